#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "spingp/grid.hpp"

namespace spingp {

/// Normalized one-body spinor on a d-site periodic ring; mode = 2*site + spin
/// with spin 0 = up, spin 1 = down.
struct LatticeOrbital {
    int sites = 0;
    Eigen::VectorXcd amps;  // length 2*sites

    LatticeOrbital() = default;
    explicit LatticeOrbital(int d) : sites(d), amps(Eigen::VectorXcd::Zero(2 * d)) {}
    double norm2() const { return amps.squaredNorm(); }
    void normalize();
};

enum class ScalingMode { gross_pitaevskii, mean_field };

/// Exactly diagonalizable N-boson model on a 1D periodic ring with two
/// internal levels per site: nearest-neighbour hopping, a per-site 2x2
/// internal-level matrix (possibly time-dependent), and a density-density
/// pair potential depending on the ring separation of the two sites.
struct LatticeModel {
    int sites = 2;
    double hopping = 1.0;
    std::function<double(int)> pair_potential;                 // of separation 0..d-1
    std::function<Eigen::Matrix2cd(int, double)> onebody;      // (site, t) -> 2x2
    ScalingMode scaling = ScalingMode::mean_field;

    void validate() const;
    /// Interaction prefactor: 1 for gross_pitaevskii, 1/(N-1) for mean_field.
    double pair_coupling(int n_particles) const;
    /// Ring separation min(|i-j|, d-|i-j|).
    int separation(int i, int j) const;
};

/// Occupation-number basis of the symmetric N-particle sector over `modes`
/// single-particle modes, dimension binom(modes + N - 1, N).
class SymmetricBasis {
public:
    SymmetricBasis(int modes, int n_particles, std::size_t cap = 200000);

    int modes() const { return modes_; }
    int n_particles() const { return n_; }
    std::size_t dimension() const { return occupations_.size(); }
    const std::vector<int>& occupation(std::size_t i) const { return occupations_[i]; }
    std::size_t index_of(const std::vector<int>& occ) const;  // throws if absent
    bool contains(const std::vector<int>& occ) const;

private:
    static std::uint64_t key(const std::vector<int>& occ);
    int modes_, n_;
    std::vector<std::vector<int>> occupations_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct ManyBodyState {
    std::shared_ptr<const SymmetricBasis> basis;
    Eigen::VectorXcd amplitudes;

    void check_normalized(double tol = 1e-12) const;
};

/// Dense 2d x 2d one-body operator of the model at time t: hopping stencil
/// J (2 I - shift - shift^t) acting per spin plus the per-site 2x2 blocks.
Eigen::MatrixXcd onebody_matrix(const LatticeModel& m, double t);

/// Second quantization dGamma(K) = sum K_ab a^dag_a a_b on the basis; zero
/// entries of K are skipped, so sparse one-body operators stay cheap.
Eigen::SparseMatrix<cplx> dgamma(const SymmetricBasis& b, const Eigen::MatrixXcd& K);

/// Diagonal pair-interaction energies E(n) = coupling * [ (1/2) sum_{i != j}
/// V(i-j) m_i m_j + (1/2) V(0) sum_i m_i (m_i - 1) ], m_i = site density.
Eigen::VectorXd interaction_diagonal(const LatticeModel& m, const SymmetricBasis& b);

Eigen::SparseMatrix<cplx> assemble_hamiltonian(const LatticeModel& m,
                                               const SymmetricBasis& b, double t);

/// Condensate product state phi^{tensor N} in the occupation basis.
ManyBodyState product_state(std::shared_ptr<const SymmetricBasis> basis,
                            const LatticeOrbital& phi);

/// Normalized state with iid Gaussian amplitudes from the given seed.
ManyBodyState random_state(std::shared_ptr<const SymmetricBasis> basis, std::uint64_t seed);

/// Raw creation operator a^dag(chi) mapping the (N-1)-particle state into the
/// N-particle basis; the result is not normalized.
ManyBodyState apply_creation(const ManyBodyState& psi, const Eigen::VectorXcd& chi,
                             std::shared_ptr<const SymmetricBasis> target);

/// exp(-i tau A) v for a Hermitian operator given as a mat-vec, via a Lanczos
/// Krylov subspace with full reorthogonalization; recursively halves tau if
/// the subspace cap cannot reach `tol`. Throws on non-convergence.
Eigen::VectorXcd krylov_expi(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& matvec,
    const Eigen::VectorXcd& v, double tau, double tol = 1e-13, int max_dim = 60);

/// Unitary propagation from t0 to t1 in steps of dt, the Hamiltonian sampled
/// at the midpoint of every step (second-order accurate for time-dependent S).
ManyBodyState propagate(const ManyBodyState& psi, const LatticeModel& m, double t0,
                        double t1, double dt);

/// One-body reduced density matrix gamma(a,b) = <a^dag_b a_a> / N.
Eigen::MatrixXcd partial_trace(const ManyBodyState& psi);

/// Throws unless gamma is Hermitian, unit-trace and positive within tol.
void validate_density_matrix(const Eigen::MatrixXcd& gamma, double tol = 1e-12);

double energy_per_particle(const ManyBodyState& psi, const LatticeModel& m, double t);

struct TraceDistanceResult {
    double distance = 0.0;  // Tr |gamma - |phi><phi||
    double lower = 0.0;     // 1 - <phi, gamma phi>
    double upper = 0.0;     // 2 sqrt(1 - <phi, gamma phi>)
};

TraceDistanceResult trace_distance(const Eigen::MatrixXcd& gamma,
                                   const Eigen::VectorXcd& phi);

}  // namespace spingp
