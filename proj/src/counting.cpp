#include "spingp/counting.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spingp {

CondensateProjector::CondensateProjector(std::shared_ptr<const SymmetricBasis> b,
                                         const Eigen::VectorXcd& phi)
    : basis(std::move(b)), orbital(phi) {
    if (!basis) throw std::invalid_argument("CondensateProjector: null basis");
    if (orbital.size() != basis->modes())
        throw std::invalid_argument("CondensateProjector: orbital/basis mode mismatch");
    if (std::abs(orbital.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("CondensateProjector: orbital must be normalized");
    number_op = dgamma(*basis, orbital * orbital.adjoint());
}

std::vector<Eigen::VectorXcd> decompose(const CondensateProjector& proj,
                                        const Eigen::VectorXcd& v) {
    const int N = proj.basis->n_particles();
    std::vector<Eigen::VectorXcd> comps(N + 1);
    // P_k is the spectral projector of dGamma(p) at the integer eigenvalue
    // N - k; the Lagrange polynomial through the exact spectrum is an exact
    // projector up to rounding.
    for (int k = 0; k <= N; ++k) {
        Eigen::VectorXcd y = v;
        for (int l = 0; l <= N; ++l) {
            if (l == k) continue;
            y = (proj.number_op * y - cplx(static_cast<double>(N - l)) * y) /
                cplx(static_cast<double>(l - k));
        }
        comps[k] = std::move(y);
    }
    return comps;
}

ManyBodyState apply_pk(const ManyBodyState& psi, const CondensateProjector& proj, int k) {
    if (psi.basis.get() != proj.basis.get() &&
        (psi.basis->modes() != proj.basis->modes() ||
         psi.basis->n_particles() != proj.basis->n_particles()))
        throw std::invalid_argument("apply_pk: state and projector bases differ");
    ManyBodyState out;
    out.basis = psi.basis;
    const int N = psi.basis->n_particles();
    if (k < 0 || k > N) {
        out.amplitudes = Eigen::VectorXcd::Zero(psi.amplitudes.size());
        return out;
    }
    Eigen::VectorXcd y = psi.amplitudes;
    for (int l = 0; l <= N; ++l) {
        if (l == k) continue;
        y = (proj.number_op * y - cplx(static_cast<double>(N - l)) * y) /
            cplx(static_cast<double>(l - k));
    }
    out.amplitudes = std::move(y);
    return out;
}

WeightFunction WeightFunction::n_weight(int n_particles) {
    WeightFunction f;
    f.kind = Kind::n;
    f.n_particles = n_particles;
    f.values.resize(n_particles + 5);
    for (int k = 0; k < f.values.size(); ++k)
        f.values[k] = std::sqrt(static_cast<double>(k) / n_particles);
    return f;
}

WeightFunction WeightFunction::m_weight(int n_particles, double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("WeightFunction: xi must be positive");
    WeightFunction f;
    f.kind = Kind::m;
    f.n_particles = n_particles;
    f.xi = xi;
    f.values.resize(n_particles + 5);
    const double N = n_particles;
    const double crossover = std::pow(N, 1.0 - 2.0 * xi);
    for (int k = 0; k < f.values.size(); ++k) {
        if (k >= crossover)
            f.values[k] = std::sqrt(static_cast<double>(k) / N);
        else
            f.values[k] = 0.5 * (std::pow(N, -1.0 + xi) * k + std::pow(N, -xi));
    }
    return f;
}

WeightFunction WeightFunction::custom(int n_particles, const Eigen::VectorXd& values) {
    WeightFunction f;
    f.kind = Kind::custom;
    f.n_particles = n_particles;
    f.values = values;
    return f;
}

double WeightFunction::eval(int k) const {
    if (k < 0 || k >= values.size()) return 0.0;
    return values[k];
}

ManyBodyState apply_counting(const ManyBodyState& psi, const CondensateProjector& proj,
                             const CountingOperator& op) {
    const auto comps = decompose(proj, psi.amplitudes);
    ManyBodyState out;
    out.basis = psi.basis;
    out.amplitudes = Eigen::VectorXcd::Zero(psi.amplitudes.size());
    for (int k = 0; k < static_cast<int>(comps.size()); ++k)
        out.amplitudes += op.weight.eval(k + op.shift) * comps[k];
    return out;
}

MVariants build_m_variants(const WeightFunction& m) {
    if (m.kind != WeightFunction::Kind::m)
        throw std::invalid_argument("build_m_variants: weight must be of kind m");
    const int N = m.n_particles;
    Eigen::VectorXd a(N + 5), b(N + 5), c(N + 5), d(N + 5), e(N + 5);
    a.setZero(); b.setZero(); c.setZero(); d.setZero(); e.setZero();
    for (int k = 0; k <= N; ++k) {
        a[k] = m.eval(k) - m.eval(k + 1);
        b[k] = m.eval(k) - m.eval(k + 2);
        c[k] = m.eval(k) - 2.0 * m.eval(k + 2) + m.eval(k + 4);
        d[k] = m.eval(k) - m.eval(k + 1) - m.eval(k + 2) + m.eval(k + 3);
        e[k] = m.eval(k) - 2.0 * m.eval(k + 1) + m.eval(k + 2);
    }
    MVariants v;
    v.a = {WeightFunction::custom(N, a), 0};
    v.b = {WeightFunction::custom(N, b), 0};
    v.c = {WeightFunction::custom(N, c), 0};
    v.d = {WeightFunction::custom(N, d), 0};
    v.e = {WeightFunction::custom(N, e), 0};
    return v;
}

double counting_operator_norm(const CountingOperator& op) {
    double mx = 0.0;
    for (int k = 0; k <= op.weight.n_particles; ++k)
        mx = std::max(mx, std::abs(op.weight.eval(k + op.shift)));
    return mx;
}

// ---- slot representations --------------------------------------------------

TwoSlotState expand_two_slots(const ManyBodyState& psi, std::size_t cap) {
    const SymmetricBasis& b = *psi.basis;
    const int M = b.modes();
    const int N = b.n_particles();
    if (N < 2) throw std::invalid_argument("expand_two_slots: need N >= 2");
    TwoSlotState t;
    // the N == 2 case has a trivial one-dimensional rest factor (null rest)
    if (N > 2) t.rest = std::make_shared<SymmetricBasis>(M, N - 2, cap);
    const std::size_t rdim = t.rest ? t.rest->dimension() : 1;
    const std::size_t total = static_cast<std::size_t>(M) * M * rdim;
    if (total > cap)
        throw std::length_error("expand_two_slots: representation size " +
                                std::to_string(total) + " exceeds cap");
    t.modes = M;
    t.data = Eigen::VectorXcd::Zero(total);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N) * (N - 1));
    std::vector<int> occ;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const cplx c = psi.amplitudes[i];
        if (c == cplx(0.0)) continue;
        const std::vector<int>& n = b.occupation(i);
        for (int alpha = 0; alpha < M; ++alpha) {
            if (n[alpha] == 0) continue;
            for (int beta = 0; beta < M; ++beta) {
                const int nb = n[beta] - (alpha == beta ? 1 : 0);
                if (nb <= 0) continue;
                occ = n;
                occ[alpha] -= 1;
                occ[beta] -= 1;
                const std::size_t r = t.rest ? t.rest->index_of(occ) : 0;
                const double amp = std::sqrt(static_cast<double>(n[alpha]) * nb) * scale;
                t.data[(static_cast<std::size_t>(alpha) * M + beta) * rdim + r] += amp * c;
            }
        }
    }
    return t;
}

ManyBodyState contract_two_slots(const TwoSlotState& t,
                                 std::shared_ptr<const SymmetricBasis> full) {
    const SymmetricBasis& b = *full;
    const int M = b.modes();
    const int N = b.n_particles();
    const std::size_t rdim = t.rest ? t.rest->dimension() : 1;
    ManyBodyState out;
    out.basis = full;
    out.amplitudes = Eigen::VectorXcd::Zero(b.dimension());
    const double scale = 1.0 / std::sqrt(static_cast<double>(N) * (N - 1));
    std::vector<int> occ;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const std::vector<int>& n = b.occupation(i);
        cplx acc(0.0);
        for (int alpha = 0; alpha < M; ++alpha) {
            if (n[alpha] == 0) continue;
            for (int beta = 0; beta < M; ++beta) {
                const int nb = n[beta] - (alpha == beta ? 1 : 0);
                if (nb <= 0) continue;
                occ = n;
                occ[alpha] -= 1;
                occ[beta] -= 1;
                const std::size_t r = t.rest ? t.rest->index_of(occ) : 0;
                const double amp = std::sqrt(static_cast<double>(n[alpha]) * nb) * scale;
                acc += amp * t.data[(static_cast<std::size_t>(alpha) * M + beta) * rdim + r];
            }
        }
        out.amplitudes[i] = acc;
    }
    return out;
}

OneSlotState expand_one_slot(const ManyBodyState& psi) {
    const SymmetricBasis& b = *psi.basis;
    const int M = b.modes();
    const int N = b.n_particles();
    if (N < 2) throw std::invalid_argument("expand_one_slot: need N >= 2");
    OneSlotState t;
    t.rest = std::make_shared<SymmetricBasis>(M, N - 1);
    t.modes = M;
    const std::size_t rdim = t.rest->dimension();
    t.data = Eigen::VectorXcd::Zero(static_cast<std::size_t>(M) * rdim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<int> occ;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const cplx c = psi.amplitudes[i];
        if (c == cplx(0.0)) continue;
        const std::vector<int>& n = b.occupation(i);
        for (int alpha = 0; alpha < M; ++alpha) {
            if (n[alpha] == 0) continue;
            occ = n;
            occ[alpha] -= 1;
            const std::size_t r = t.rest->index_of(occ);
            t.data[static_cast<std::size_t>(alpha) * rdim + r] +=
                std::sqrt(static_cast<double>(n[alpha])) * scale * c;
        }
    }
    return t;
}

ManyBodyState contract_one_slot(const OneSlotState& t,
                                std::shared_ptr<const SymmetricBasis> full) {
    const SymmetricBasis& b = *full;
    const int M = b.modes();
    const int N = b.n_particles();
    const std::size_t rdim = t.rest->dimension();
    ManyBodyState out;
    out.basis = full;
    out.amplitudes = Eigen::VectorXcd::Zero(b.dimension());
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<int> occ;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const std::vector<int>& n = b.occupation(i);
        cplx acc(0.0);
        for (int alpha = 0; alpha < M; ++alpha) {
            if (n[alpha] == 0) continue;
            occ = n;
            occ[alpha] -= 1;
            const std::size_t r = t.rest->index_of(occ);
            acc += std::sqrt(static_cast<double>(n[alpha])) * scale *
                   t.data[static_cast<std::size_t>(alpha) * rdim + r];
        }
        out.amplitudes[i] = acc;
    }
    return out;
}

void apply_slot_projector(TwoSlotState& t, const Eigen::VectorXcd& phi, int slot, bool q) {
    const int M = t.modes;
    const Eigen::Index R = t.rest ? static_cast<Eigen::Index>(t.rest->dimension()) : 1;
    Eigen::VectorXcd out = q ? t.data : Eigen::VectorXcd(Eigen::VectorXcd::Zero(t.data.size()));
    if (slot == 1) {
        for (int beta = 0; beta < M; ++beta) {
            for (Eigen::Index r = 0; r < R; ++r) {
                cplx s(0.0);
                for (int a = 0; a < M; ++a)
                    s += std::conj(phi[a]) * t.data[(static_cast<Eigen::Index>(a) * M + beta) * R + r];
                for (int a = 0; a < M; ++a) {
                    const Eigen::Index idx = (static_cast<Eigen::Index>(a) * M + beta) * R + r;
                    if (q)
                        out[idx] -= phi[a] * s;
                    else
                        out[idx] = phi[a] * s;
                }
            }
        }
    } else if (slot == 2) {
        for (int alpha = 0; alpha < M; ++alpha) {
            for (Eigen::Index r = 0; r < R; ++r) {
                cplx s(0.0);
                for (int b = 0; b < M; ++b)
                    s += std::conj(phi[b]) * t.data[(static_cast<Eigen::Index>(alpha) * M + b) * R + r];
                for (int b = 0; b < M; ++b) {
                    const Eigen::Index idx = (static_cast<Eigen::Index>(alpha) * M + b) * R + r;
                    if (q)
                        out[idx] -= phi[b] * s;
                    else
                        out[idx] = phi[b] * s;
                }
            }
        }
    } else {
        throw std::invalid_argument("apply_slot_projector: slot must be 1 or 2");
    }
    t.data = std::move(out);
}

void apply_slot_projector(OneSlotState& t, const Eigen::VectorXcd& phi, bool q) {
    const int M = t.modes;
    const Eigen::Index R = static_cast<Eigen::Index>(t.rest->dimension());
    Eigen::VectorXcd out = q ? t.data : Eigen::VectorXcd(Eigen::VectorXcd::Zero(t.data.size()));
    for (Eigen::Index r = 0; r < R; ++r) {
        cplx s(0.0);
        for (int a = 0; a < M; ++a) s += std::conj(phi[a]) * t.data[a * R + r];
        for (int a = 0; a < M; ++a) {
            if (q)
                out[a * R + r] -= phi[a] * s;
            else
                out[a * R + r] = phi[a] * s;
        }
    }
    t.data = std::move(out);
}

void apply_slot_pair_matrix(TwoSlotState& t, const Eigen::MatrixXcd& A) {
    const int M = t.modes;
    const Eigen::Index R = t.rest ? static_cast<Eigen::Index>(t.rest->dimension()) : 1;
    if (A.rows() != M * M || A.cols() != M * M)
        throw std::invalid_argument("apply_slot_pair_matrix: matrix must be M^2 x M^2");
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMat> X(t.data.data(), M * M, R);
    RowMat Y = A * X;
    X = Y;
}

void apply_slot_pair_diagonal(TwoSlotState& t, const Eigen::MatrixXd& w) {
    const int M = t.modes;
    const Eigen::Index R = t.rest ? static_cast<Eigen::Index>(t.rest->dimension()) : 1;
    if (w.rows() != M || w.cols() != M)
        throw std::invalid_argument("apply_slot_pair_diagonal: weight must be M x M");
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            t.data.segment((static_cast<Eigen::Index>(a) * M + b) * R, R) *= w(a, b);
}

namespace {

// Splits the rest factor of every slot-pair column into P_j components.
// comps[j] has the full representation layout.
std::vector<Eigen::VectorXcd> rest_decomposition(const TwoSlotState& t,
                                                 const CondensateProjector& rest_proj) {
    const int M = t.modes;
    const Eigen::Index R = t.rest ? static_cast<Eigen::Index>(t.rest->dimension()) : 1;
    const int n_rest = t.rest ? t.rest->n_particles() : 0;
    std::vector<Eigen::VectorXcd> comps(n_rest + 1,
                                        Eigen::VectorXcd::Zero(t.data.size()));
    if (!t.rest) {
        comps[0] = t.data;
        return comps;
    }
    for (int pair = 0; pair < M * M; ++pair) {
        const Eigen::VectorXcd col = t.data.segment(static_cast<Eigen::Index>(pair) * R, R);
        const auto parts = decompose(rest_proj, col);
        for (int j = 0; j <= n_rest; ++j)
            comps[j].segment(static_cast<Eigen::Index>(pair) * R, R) = parts[j];
    }
    return comps;
}

struct SlotSplit {
    TwoSlotState pp, pq, qp, qq;
};

SlotSplit split_slots(const TwoSlotState& t, const Eigen::VectorXcd& phi) {
    SlotSplit s;
    s.pp = t;
    apply_slot_projector(s.pp, phi, 1, false);
    apply_slot_projector(s.pp, phi, 2, false);
    s.pq = t;
    apply_slot_projector(s.pq, phi, 1, false);
    apply_slot_projector(s.pq, phi, 2, true);
    s.qp = t;
    apply_slot_projector(s.qp, phi, 1, true);
    apply_slot_projector(s.qp, phi, 2, false);
    s.qq = t;
    apply_slot_projector(s.qq, phi, 1, true);
    apply_slot_projector(s.qq, phi, 2, true);
    return s;
}

}  // namespace

TwoSlotState apply_counting_two_slots(const TwoSlotState& t,
                                      const CondensateProjector& rest_proj,
                                      const Eigen::VectorXcd& phi,
                                      const WeightFunction& f, int shift) {
    if (t.rest && rest_proj.basis.get() != t.rest.get() &&
        (rest_proj.basis->modes() != t.rest->modes() ||
         rest_proj.basis->n_particles() != t.rest->n_particles()))
        throw std::invalid_argument("apply_counting_two_slots: projector basis mismatch");
    const auto comps = rest_decomposition(t, rest_proj);
    TwoSlotState out = t;
    out.data.setZero();
    for (int j = 0; j < static_cast<int>(comps.size()); ++j) {
        TwoSlotState layer = t;
        layer.data = comps[j];
        const SlotSplit s = split_slots(layer, phi);
        out.data += f.eval(j + shift) * s.pp.data;
        out.data += f.eval(j + 1 + shift) * (s.pq.data + s.qp.data);
        out.data += f.eval(j + 2 + shift) * s.qq.data;
    }
    return out;
}

OneSlotState apply_counting_one_slot(const OneSlotState& t,
                                     const CondensateProjector& rest_proj,
                                     const Eigen::VectorXcd& phi,
                                     const WeightFunction& f, int shift) {
    const int M = t.modes;
    const Eigen::Index R = static_cast<Eigen::Index>(t.rest->dimension());
    const int n_rest = t.rest->n_particles();
    std::vector<Eigen::VectorXcd> comps(n_rest + 1, Eigen::VectorXcd::Zero(t.data.size()));
    for (int a = 0; a < M; ++a) {
        const Eigen::VectorXcd col = t.data.segment(static_cast<Eigen::Index>(a) * R, R);
        const auto parts = decompose(rest_proj, col);
        for (int j = 0; j <= n_rest; ++j)
            comps[j].segment(static_cast<Eigen::Index>(a) * R, R) = parts[j];
    }
    OneSlotState out = t;
    out.data.setZero();
    for (int j = 0; j <= n_rest; ++j) {
        OneSlotState layer = t;
        layer.data = comps[j];
        OneSlotState p_part = layer;
        apply_slot_projector(p_part, phi, false);
        OneSlotState q_part = layer;
        apply_slot_projector(q_part, phi, true);
        out.data += f.eval(j + shift) * p_part.data;
        out.data += f.eval(j + 1 + shift) * q_part.data;
    }
    return out;
}

TwoSlotState apply_r12_two_slots(const TwoSlotState& t, const CondensateProjector& rest_proj,
                                 const Eigen::VectorXcd& phi, const WeightFunction& m) {
    const auto comps = rest_decomposition(t, rest_proj);
    TwoSlotState out = t;
    out.data.setZero();
    for (int j = 0; j < static_cast<int>(comps.size()); ++j) {
        TwoSlotState layer = t;
        layer.data = comps[j];
        const SlotSplit s = split_slots(layer, phi);
        // p1 p2 sector carries m - m_2, the mixed sectors carry m - m_1
        out.data += (m.eval(j) - m.eval(j + 2)) * s.pp.data;
        out.data += (m.eval(j + 1) - m.eval(j + 2)) * (s.pq.data + s.qp.data);
    }
    return out;
}

ManyBodyState apply_r12(const ManyBodyState& psi, const CondensateProjector& proj,
                        const WeightFunction& weight_m) {
    const TwoSlotState t = expand_two_slots(psi);
    std::shared_ptr<CondensateProjector> rest_proj;
    if (t.rest) rest_proj = std::make_shared<CondensateProjector>(t.rest, proj.orbital);
    const TwoSlotState r = t.rest
        ? apply_r12_two_slots(t, *rest_proj, proj.orbital, weight_m)
        : apply_r12_two_slots(t, proj, proj.orbital, weight_m);
    return contract_two_slots(r, psi.basis);
}

// ---- convergence indicators -------------------------------------------------

double alpha_tilde(const ManyBodyState& psi, const Eigen::VectorXcd& phi) {
    if (std::abs(phi.squaredNorm() - 1.0) > 1e-12)
        throw std::invalid_argument("alpha_tilde: orbital must be normalized");
    const Eigen::MatrixXcd gamma = partial_trace(psi);
    return 1.0 - (phi.adjoint() * gamma * phi)(0, 0).real();
}

double alpha_tilde_counting(const ManyBodyState& psi, const CondensateProjector& proj) {
    const auto comps = decompose(proj, psi.amplitudes);
    const int N = psi.basis->n_particles();
    double s = 0.0;
    for (int k = 0; k <= N; ++k)
        s += (static_cast<double>(k) / N) * comps[k].squaredNorm();
    return s;
}

double alpha_less(const ManyBodyState& psi, const Eigen::VectorXcd& phi,
                  const LatticeModel& model, double t, double gp_energy_value, double xi) {
    const CondensateProjector proj(psi.basis, phi);
    const WeightFunction m = WeightFunction::m_weight(psi.basis->n_particles(), xi);
    const auto comps = decompose(proj, psi.amplitudes);
    double expectation = 0.0;
    for (int k = 0; k < static_cast<int>(comps.size()); ++k)
        expectation += m.eval(k) * comps[k].squaredNorm();
    const double e_n = energy_per_particle(psi, model, t);
    return expectation + std::abs(e_n - gp_energy_value);
}

AlphaFullResult alpha_full(const ManyBodyState& psi, const Eigen::VectorXcd& phi,
                           const LatticeModel& model, double t, double gp_energy_value,
                           double xi, const Eigen::VectorXd& g_of_sep) {
    const int N = psi.basis->n_particles();
    const int M = psi.basis->modes();
    if (M != 2 * model.sites)
        throw std::invalid_argument("alpha_full: basis/model mode mismatch");
    AlphaFullResult res;
    res.alpha_less = alpha_less(psi, phi, model, t, gp_energy_value, xi);

    const WeightFunction m = WeightFunction::m_weight(N, xi);
    const TwoSlotState tt = expand_two_slots(psi);
    TwoSlotState r;
    if (tt.rest) {
        const CondensateProjector rest_proj(tt.rest, phi);
        r = apply_r12_two_slots(tt, rest_proj, phi, m);
    } else {
        const CondensateProjector proj(psi.basis, phi);
        r = apply_r12_two_slots(tt, proj, phi, m);
    }
    // g(x1 - x2) sampled at the nearest lattice node of the separation
    Eigen::MatrixXd w(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            w(a, b) = g_of_sep[model.separation(a / 2, b / 2)];
    apply_slot_pair_diagonal(r, w);
    const cplx inner = tt.data.dot(r.data);
    res.correction = static_cast<double>(N) * (N - 1) * inner.real();
    res.discarded_imag = static_cast<double>(N) * (N - 1) * std::abs(inner.imag());
    res.alpha = res.alpha_less - res.correction;
    return res;
}

double delta_a(const ManyBodyState& psi, const Eigen::VectorXcd& phi,
               const std::function<Eigen::Matrix2cd(int)>& s_dot) {
    const int M = psi.basis->modes();
    Eigen::MatrixXcd Sdot = Eigen::MatrixXcd::Zero(M, M);
    for (int site = 0; site < M / 2; ++site)
        Sdot.block<2, 2>(2 * site, 2 * site) = s_dot(site);
    const Eigen::MatrixXcd gamma = partial_trace(psi);
    const double many = (Sdot * gamma).trace().real();
    const double one = (phi.adjoint() * Sdot * phi)(0, 0).real();
    return many - one;
}

}  // namespace spingp
