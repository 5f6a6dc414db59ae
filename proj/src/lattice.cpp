#include "spingp/lattice.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace spingp {

void LatticeOrbital::normalize() {
    const double n = amps.norm();
    if (n == 0.0) throw std::invalid_argument("LatticeOrbital: cannot normalize zero orbital");
    amps /= n;
}

void LatticeModel::validate() const {
    if (sites < 2 || sites > 8)
        throw std::invalid_argument("LatticeModel: sites must lie in [2, 8]");
    if (!(hopping > 0.0))
        throw std::invalid_argument("LatticeModel: hopping must be positive");
    if (!pair_potential) throw std::invalid_argument("LatticeModel: pair_potential unset");
    if (!onebody) throw std::invalid_argument("LatticeModel: onebody unset");
    for (int i = 0; i < sites; ++i) {
        const Eigen::Matrix2cd S = onebody(i, 0.0);
        if ((S - S.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("LatticeModel: onebody block at site " +
                                        std::to_string(i) + " is not Hermitian");
    }
}

double LatticeModel::pair_coupling(int n_particles) const {
    if (scaling == ScalingMode::mean_field) {
        if (n_particles < 2) return 0.0;
        return 1.0 / static_cast<double>(n_particles - 1);
    }
    return 1.0;
}

int LatticeModel::separation(int i, int j) const {
    const int s = std::abs(i - j);
    return std::min(s, sites - s);
}

namespace {

std::size_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

SymmetricBasis::SymmetricBasis(int modes, int n_particles, std::size_t cap)
    : modes_(modes), n_(n_particles) {
    if (modes < 1 || n_particles < 1)
        throw std::invalid_argument("SymmetricBasis: need modes >= 1 and N >= 1");
    if (n_particles > 15)
        throw std::invalid_argument("SymmetricBasis: N > 15 exceeds the occupation encoding");
    const std::size_t dim = binom(modes + n_particles - 1, n_particles);
    if (dim > cap)
        throw std::length_error("SymmetricBasis: dimension " + std::to_string(dim) +
                                " exceeds cap " + std::to_string(cap));
    occupations_.reserve(dim);
    std::vector<int> occ(modes, 0);
    // lexicographic: highest occupation of the lowest mode first
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == modes - 1) {
            occ[mode] = left;
            occupations_.push_back(occ);
            return;
        }
        for (int k = left; k >= 0; --k) {
            occ[mode] = k;
            rec(mode + 1, left - k);
        }
        occ[mode] = 0;
    };
    rec(0, n_particles);
    if (occupations_.size() != dim)
        throw std::logic_error("SymmetricBasis: enumeration does not match the binomial");
    index_.reserve(dim * 2);
    for (std::size_t i = 0; i < occupations_.size(); ++i) index_[key(occupations_[i])] = i;
}

std::uint64_t SymmetricBasis::key(const std::vector<int>& occ) {
    std::uint64_t k = 0;
    for (int c : occ) k = (k << 4) | static_cast<std::uint64_t>(c);
    return k;
}

std::size_t SymmetricBasis::index_of(const std::vector<int>& occ) const {
    const auto it = index_.find(key(occ));
    if (it == index_.end())
        throw std::out_of_range("SymmetricBasis: occupation not in this basis");
    return it->second;
}

bool SymmetricBasis::contains(const std::vector<int>& occ) const {
    return index_.count(key(occ)) != 0;
}

void ManyBodyState::check_normalized(double tol) const {
    if (!basis) throw std::invalid_argument("ManyBodyState: no basis attached");
    if (amplitudes.size() != static_cast<Eigen::Index>(basis->dimension()))
        throw std::invalid_argument("ManyBodyState: amplitude length mismatch");
    if (std::abs(amplitudes.squaredNorm() - 1.0) > tol)
        throw std::invalid_argument("ManyBodyState: state is not normalized");
}

Eigen::MatrixXcd onebody_matrix(const LatticeModel& m, double t) {
    const int d = m.sites;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        const int ip = (i + 1) % d;
        for (int s = 0; s < 2; ++s) {
            K(2 * i + s, 2 * i + s) += 2.0 * m.hopping;
            K(2 * i + s, 2 * ip + s) -= m.hopping;
            K(2 * ip + s, 2 * i + s) -= m.hopping;
        }
        const Eigen::Matrix2cd S = m.onebody(i, t);
        K.block<2, 2>(2 * i, 2 * i) += S;
    }
    return K;
}

Eigen::SparseMatrix<cplx> dgamma(const SymmetricBasis& b, const Eigen::MatrixXcd& K) {
    const int M = b.modes();
    if (K.rows() != M || K.cols() != M)
        throw std::invalid_argument("dgamma: one-body matrix does not match mode count");
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(b.dimension() * static_cast<std::size_t>(M));
    std::vector<int> occ;
    for (std::size_t col = 0; col < b.dimension(); ++col) {
        const std::vector<int>& n = b.occupation(col);
        for (int beta = 0; beta < M; ++beta) {
            if (n[beta] == 0) continue;
            for (int alpha = 0; alpha < M; ++alpha) {
                const cplx k = K(alpha, beta);
                if (k == cplx(0.0)) continue;
                if (alpha == beta) {
                    trips.emplace_back(static_cast<int>(col), static_cast<int>(col),
                                       k * static_cast<double>(n[beta]));
                } else {
                    occ = n;
                    occ[beta] -= 1;
                    occ[alpha] += 1;
                    const std::size_t row = b.index_of(occ);
                    const double amp = std::sqrt(static_cast<double>(n[beta]) *
                                                 static_cast<double>(n[alpha] + 1));
                    trips.emplace_back(static_cast<int>(row), static_cast<int>(col), k * amp);
                }
            }
        }
    }
    Eigen::SparseMatrix<cplx> A(static_cast<int>(b.dimension()),
                                static_cast<int>(b.dimension()));
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

Eigen::VectorXd interaction_diagonal(const LatticeModel& m, const SymmetricBasis& b) {
    if (b.modes() != 2 * m.sites)
        throw std::invalid_argument("interaction_diagonal: basis/model mode mismatch");
    const double coupling = m.pair_coupling(b.n_particles());
    Eigen::VectorXd diag(b.dimension());
    std::vector<double> dens(m.sites);
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const std::vector<int>& n = b.occupation(i);
        for (int s = 0; s < m.sites; ++s) dens[s] = n[2 * s] + n[2 * s + 1];
        double e = 0.0;
        for (int s1 = 0; s1 < m.sites; ++s1) {
            e += 0.5 * m.pair_potential(0) * dens[s1] * (dens[s1] - 1.0);
            for (int s2 = 0; s2 < m.sites; ++s2) {
                if (s1 == s2) continue;
                e += 0.5 * m.pair_potential(m.separation(s1, s2)) * dens[s1] * dens[s2];
            }
        }
        diag[i] = coupling * e;
    }
    return diag;
}

Eigen::SparseMatrix<cplx> assemble_hamiltonian(const LatticeModel& m,
                                               const SymmetricBasis& b, double t) {
    m.validate();
    Eigen::SparseMatrix<cplx> H = dgamma(b, onebody_matrix(m, t));
    const Eigen::VectorXd diag = interaction_diagonal(m, b);
    for (int i = 0; i < H.rows(); ++i) H.coeffRef(i, i) += diag[i];
    H.makeCompressed();
    return H;
}

ManyBodyState product_state(std::shared_ptr<const SymmetricBasis> basis,
                            const LatticeOrbital& phi) {
    if (!basis) throw std::invalid_argument("product_state: null basis");
    if (phi.amps.size() != basis->modes())
        throw std::invalid_argument("product_state: orbital/basis mode mismatch");
    if (std::abs(phi.norm2() - 1.0) > 1e-12)
        throw std::invalid_argument("product_state: orbital must be normalized");
    const int N = basis->n_particles();
    ManyBodyState psi;
    psi.basis = basis;
    psi.amplitudes.resize(basis->dimension());
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        const std::vector<int>& n = basis->occupation(i);
        double lognorm = std::lgamma(N + 1.0);
        cplx amp(1.0, 0.0);
        for (int a = 0; a < basis->modes(); ++a) {
            lognorm -= std::lgamma(n[a] + 1.0);
            for (int r = 0; r < n[a]; ++r) amp *= phi.amps[a];
        }
        psi.amplitudes[i] = std::exp(0.5 * lognorm) * amp;
    }
    return psi;
}

ManyBodyState random_state(std::shared_ptr<const SymmetricBasis> basis, std::uint64_t seed) {
    if (!basis) throw std::invalid_argument("random_state: null basis");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ManyBodyState psi;
    psi.basis = basis;
    psi.amplitudes.resize(basis->dimension());
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        psi.amplitudes[i] = cplx(re, im);
    }
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

ManyBodyState apply_creation(const ManyBodyState& psi, const Eigen::VectorXcd& chi,
                             std::shared_ptr<const SymmetricBasis> target) {
    if (!psi.basis || !target) throw std::invalid_argument("apply_creation: null basis");
    if (target->n_particles() != psi.basis->n_particles() + 1 ||
        target->modes() != psi.basis->modes())
        throw std::invalid_argument("apply_creation: target basis must add one particle");
    if (chi.size() != psi.basis->modes())
        throw std::invalid_argument("apply_creation: orbital/basis mode mismatch");
    ManyBodyState out;
    out.basis = target;
    out.amplitudes = Eigen::VectorXcd::Zero(target->dimension());
    std::vector<int> occ;
    for (std::size_t i = 0; i < psi.basis->dimension(); ++i) {
        const cplx c = psi.amplitudes[i];
        if (c == cplx(0.0)) continue;
        const std::vector<int>& n = psi.basis->occupation(i);
        for (int a = 0; a < psi.basis->modes(); ++a) {
            if (chi[a] == cplx(0.0)) continue;
            occ = n;
            occ[a] += 1;
            out.amplitudes[target->index_of(occ)] +=
                chi[a] * std::sqrt(static_cast<double>(occ[a])) * c;
        }
    }
    return out;
}

Eigen::VectorXcd krylov_expi(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& matvec,
    const Eigen::VectorXcd& v, double tau, double tol, int max_dim) {
    const double vnorm = v.norm();
    if (vnorm == 0.0 || tau == 0.0) return v;
    const Eigen::Index dim = v.size();
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(max_dim, dim));

    std::vector<Eigen::VectorXcd> basis;
    basis.push_back(v / vnorm);
    std::vector<double> alpha, beta;
    Eigen::VectorXcd w(dim);

    auto small_exp = [&](int m) -> Eigen::VectorXcd {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        Eigen::VectorXcd phase(m);
        for (int i = 0; i < m; ++i)
            phase[i] = std::exp(cplx(0.0, -tau * es.eigenvalues()[i]));
        Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(m);
        e1[0] = 1.0;
        return es.eigenvectors().cast<cplx>() *
               (phase.asDiagonal() * (es.eigenvectors().cast<cplx>().adjoint() * e1));
    };

    for (int j = 0; j < m_cap; ++j) {
        matvec(basis[j], w);
        cplx a = basis[j].dot(w);
        if (std::abs(a.imag()) > 1e-9 * (1.0 + std::abs(a.real())))
            throw std::runtime_error("krylov_expi: operator is not Hermitian");
        alpha.push_back(a.real());
        w -= a.real() * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (const auto& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
        const double b = w.norm();
        const int m = j + 1;
        // invariant subspace: the small exponential is exact
        if (b < 1e-14) {
            const Eigen::VectorXcd y = small_exp(m);
            Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
            for (int i = 0; i < m; ++i) out += y[i] * basis[i];
            return vnorm * out;
        }
        // a posteriori residual estimate: |beta_m| * |last component of y|
        if (m >= 3) {
            const Eigen::VectorXcd y = small_exp(m);
            const double err = b * std::abs(y[m - 1]) * std::abs(tau);
            if (err < tol) {
                Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
                for (int i = 0; i < m; ++i) out += y[i] * basis[i];
                return vnorm * out;
            }
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    // subspace cap reached without convergence: halve the time step
    if (std::abs(tau) < 1e-12)
        throw std::runtime_error("krylov_expi: no convergence even at tiny step");
    const Eigen::VectorXcd half = krylov_expi(matvec, v, 0.5 * tau, 0.5 * tol, max_dim);
    return krylov_expi(matvec, half, 0.5 * tau, 0.5 * tol, max_dim);
}

ManyBodyState propagate(const ManyBodyState& psi, const LatticeModel& m, double t0,
                        double t1, double dt) {
    psi.check_normalized();
    m.validate();
    if (!(dt > 0.0) || !(t1 > t0))
        throw std::invalid_argument("propagate: need t1 > t0 and dt > 0");
    const long n_steps = std::lround((t1 - t0) / dt);
    if (n_steps < 1 || std::abs(n_steps * dt - (t1 - t0)) > 1e-9 * std::max(1.0, t1 - t0))
        throw std::invalid_argument("propagate: (t1 - t0) must be an integer multiple of dt");

    ManyBodyState out = psi;
    const Eigen::VectorXd diag = interaction_diagonal(m, *psi.basis);
    for (long s = 0; s < n_steps; ++s) {
        const double t_mid = t0 + (s + 0.5) * dt;
        Eigen::SparseMatrix<cplx> K = dgamma(*psi.basis, onebody_matrix(m, t_mid));
        auto matvec = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
            y = K * x + diag.cast<cplx>().cwiseProduct(x);
        };
        out.amplitudes = krylov_expi(matvec, out.amplitudes, dt);
    }
    return out;
}

Eigen::MatrixXcd partial_trace(const ManyBodyState& psi) {
    psi.check_normalized(1e-10);
    const SymmetricBasis& b = *psi.basis;
    const int M = b.modes();
    const int N = b.n_particles();
    Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(M, M);
    std::vector<int> occ;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const cplx c = psi.amplitudes[i];
        if (c == cplx(0.0)) continue;
        const std::vector<int>& n = b.occupation(i);
        for (int a = 0; a < M; ++a) {
            if (n[a] == 0) continue;
            gamma(a, a) += std::norm(c) * static_cast<double>(n[a]);
            for (int bb = 0; bb < M; ++bb) {
                if (bb == a) continue;
                occ = n;
                occ[a] -= 1;
                occ[bb] += 1;
                const std::size_t j = b.index_of(occ);
                const double amp =
                    std::sqrt(static_cast<double>(n[a]) * static_cast<double>(occ[bb]));
                // gamma(a, bb) = <a^dag_bb a_a> / N
                gamma(a, bb) += std::conj(psi.amplitudes[j]) * c * amp;
            }
        }
    }
    gamma /= static_cast<double>(N);
    return gamma;
}

void validate_density_matrix(const Eigen::MatrixXcd& gamma, double tol) {
    if ((gamma - gamma.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::runtime_error("density matrix: Hermiticity violated");
    if (std::abs(gamma.trace().real() - 1.0) > tol || std::abs(gamma.trace().imag()) > tol)
        throw std::runtime_error("density matrix: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gamma);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::runtime_error("density matrix: negative eigenvalue");
}

double energy_per_particle(const ManyBodyState& psi, const LatticeModel& m, double t) {
    psi.check_normalized();
    const Eigen::SparseMatrix<cplx> H = assemble_hamiltonian(m, *psi.basis, t);
    const cplx e = psi.amplitudes.dot(H * psi.amplitudes);
    if (std::abs(e.imag()) > 1e-12 * std::max(1.0, std::abs(e.real())))
        throw std::runtime_error("energy_per_particle: imaginary residue in expectation");
    return e.real() / static_cast<double>(psi.basis->n_particles());
}

TraceDistanceResult trace_distance(const Eigen::MatrixXcd& gamma,
                                   const Eigen::VectorXcd& phi) {
    if (std::abs(phi.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("trace_distance: orbital must be normalized");
    Eigen::MatrixXcd diff = gamma - phi * phi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    TraceDistanceResult r;
    r.distance = es.eigenvalues().cwiseAbs().sum();
    const double overlap = std::max(0.0, 1.0 - (phi.adjoint() * gamma * phi)(0, 0).real());
    r.lower = overlap;
    r.upper = 2.0 * std::sqrt(overlap);
    return r;
}

}  // namespace spingp
