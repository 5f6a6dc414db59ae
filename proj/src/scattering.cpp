#include "spingp/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spingp {

namespace {

// One integration piece of the radial problem w'' = U(r) w / 2 for w = r f.
// Each piece carries a U that is smooth on its closed interval, so potential
// jumps only ever sit at piece boundaries and are never sampled by a stage.
struct Piece {
    double r0, r1;
    std::function<double(double)> half_u;  // U(r)/2
    int steps;
    bool log_spaced = false;
};

struct RadialMesh {
    std::vector<double> r;
    std::vector<double> w;
    double w_prime_end = 0.0;
    double w_prime_0 = 1.0;
};

RadialMesh integrate_pieces(const std::vector<Piece>& pieces) {
    RadialMesh mesh;
    double w = 0.0, wp = 1.0;
    mesh.r.push_back(pieces.front().r0);
    mesh.w.push_back(w);
    for (const auto& p : pieces) {
        if (!(p.r1 > p.r0)) throw std::invalid_argument("radial solver: empty piece");
        std::vector<double> nodes(p.steps + 1);
        if (p.log_spaced && p.r0 > 0.0) {
            const double lr0 = std::log(p.r0), lr1 = std::log(p.r1);
            for (int i = 0; i <= p.steps; ++i)
                nodes[i] = std::exp(lr0 + (lr1 - lr0) * i / p.steps);
            nodes.front() = p.r0;
            nodes.back() = p.r1;
        } else {
            for (int i = 0; i <= p.steps; ++i)
                nodes[i] = p.r0 + (p.r1 - p.r0) * i / p.steps;
        }
        for (int i = 0; i < p.steps; ++i) {
            const double h = nodes[i + 1] - nodes[i];
            const double r = nodes[i];
            // classic RK4 on (w, w')
            auto f2 = [&](double rr, double ww) { return p.half_u(rr) * ww; };
            const double k1w = wp, k1p = f2(r, w);
            const double k2w = wp + 0.5 * h * k1p, k2p = f2(r + 0.5 * h, w + 0.5 * h * k1w);
            const double k3w = wp + 0.5 * h * k2p, k3p = f2(r + 0.5 * h, w + 0.5 * h * k2w);
            const double k4w = wp + h * k3p, k4p = f2(r + h, w + h * k3w);
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            wp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            mesh.r.push_back(nodes[i + 1]);
            mesh.w.push_back(w);
        }
    }
    mesh.w_prime_end = wp;
    return mesh;
}

// Least-squares line w = c r + b over exterior nodes; a = -b/c.
struct ExteriorFit {
    double slope, intercept, residual;
};

ExteriorFit fit_exterior(const RadialMesh& mesh, double r_from) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < mesh.r.size(); ++i) {
        if (mesh.r[i] < r_from) continue;
        sx += mesh.r[i];
        sy += mesh.w[i];
        sxx += mesh.r[i] * mesh.r[i];
        sxy += mesh.r[i] * mesh.w[i];
        ++n;
    }
    if (n < 4) throw std::runtime_error("radial solver: too few exterior nodes for fit");
    const double det = n * sxx - sx * sx;
    ExteriorFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0, wmax = 0.0;
    for (std::size_t i = 0; i < mesh.r.size(); ++i) {
        if (mesh.r[i] < r_from) continue;
        const double d = mesh.w[i] - (fit.slope * mesh.r[i] + fit.intercept);
        ss += d * d;
        wmax = std::max(wmax, std::abs(mesh.w[i]));
    }
    fit.residual = std::sqrt(ss / n) / std::max(wmax, 1e-300);
    return fit;
}

int count_exterior_nodes(const RadialMesh& mesh, double r_from) {
    int nodes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < mesh.r.size(); ++i) {
        if (mesh.r[i] < r_from || mesh.w[i] == 0.0) continue;
        if (have_prev && std::signbit(mesh.w[i]) != std::signbit(prev)) ++nodes;
        prev = mesh.w[i];
        have_prev = true;
    }
    return nodes;
}

ScatteringSolution finish_solution(const RadialMesh& mesh, double r_support) {
    const ExteriorFit fit = fit_exterior(mesh, r_support);
    ScatteringSolution sol;
    sol.exterior_nodes = count_exterior_nodes(mesh, r_support);
    if (sol.exterior_nodes > 0)
        throw std::runtime_error(
            "scattering_length: bound state detected (zero-energy solution has " +
            std::to_string(sol.exterior_nodes) + " exterior node(s))");
    const double c = fit.slope;
    sol.scattering_length = -fit.intercept / c;
    sol.fit_residual = fit.residual;
    sol.r_grid = mesh.r;
    sol.f_values.resize(mesh.r.size());
    sol.f_values[0] = mesh.w_prime_0 / c;  // limit w/r at r = 0
    for (std::size_t i = 1; i < mesh.r.size(); ++i)
        sol.f_values[i] = mesh.w[i] / (c * mesh.r[i]);
    return sol;
}

}  // namespace

RadialPotential RadialPotential::square_well(double v0, double radius) {
    RadialPotential V;
    V.profile = [v0](double) { return v0; };
    V.support_radius = radius;
    V.nonneg = v0 >= 0.0;
    return V;
}

double ScatteringSolution::eval(double r) const {
    if (r >= r_grid.back()) return 1.0 - scattering_length / r;
    auto it = std::upper_bound(r_grid.begin(), r_grid.end(), r);
    const std::size_t hi = std::max<std::size_t>(1, it - r_grid.begin());
    const std::size_t lo = hi - 1;
    const double t = (r - r_grid[lo]) / (r_grid[hi] - r_grid[lo]);
    return f_values[lo] + t * (f_values[hi] - f_values[lo]);
}

ScatteringSolution scattering_length(const RadialPotential& V, const SolverSettings& s) {
    const double R = V.support_radius;
    if (!(R > 0.0)) throw std::invalid_argument("scattering_length: support radius must be positive");
    std::vector<Piece> pieces;
    pieces.push_back({0.0, R, [&V](double r) { return 0.5 * V.profile(r); }, s.steps_per_piece});
    pieces.push_back({R, s.extraction_factor * R, [](double) { return 0.0; },
                      std::max(16, s.steps_per_piece / 8)});
    const RadialMesh mesh = integrate_pieces(pieces);
    return finish_solution(mesh, R);
}

RadialPotential rescale_potential(const RadialPotential& V, int n) {
    if (n < 1) throw std::invalid_argument("rescale_potential: n must be >= 1");
    RadialPotential out;
    const double nn = static_cast<double>(n);
    auto base = V.profile;
    out.profile = [base, nn](double r) { return nn * nn * base(nn * r); };
    out.support_radius = V.support_radius / nn;
    out.nonneg = V.nonneg;
    return out;
}

namespace {

// Zero-energy solve for V_N - W_beta at a candidate outer radius; returns
// the exterior scattering length and, optionally, the mesh.
double shell_scattering_length(const RadialPotential& VN, double w_height,
                               double r_inner, double r_outer, const SolverSettings& s,
                               RadialMesh* mesh_out) {
    const double core = VN.support_radius;
    std::vector<Piece> pieces;
    auto prof = VN.profile;
    pieces.push_back({0.0, core, [prof](double r) { return 0.5 * prof(r); }, s.steps_per_piece});
    pieces.push_back({core, r_inner, [](double) { return 0.0; },
                      std::max(64, s.steps_per_piece / 4), /*log_spaced=*/true});
    pieces.push_back({r_inner, r_outer, [w_height](double) { return -0.5 * w_height; },
                      s.steps_per_piece});
    pieces.push_back({r_outer, s.extraction_factor * r_outer, [](double) { return 0.0; },
                      std::max(16, s.steps_per_piece / 8)});
    const RadialMesh mesh = integrate_pieces(pieces);
    const ExteriorFit fit = fit_exterior(mesh, r_outer);
    if (mesh_out) *mesh_out = mesh;
    return -fit.intercept / fit.slope;
}

}  // namespace

ShellConstruction build_shell(const RadialPotential& V, double beta, int n,
                              const SolverSettings& s) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("build_shell: beta must lie in (0,1)");
    const RadialPotential VN = rescale_potential(V, n);
    const double nn = static_cast<double>(n);
    const double r_inner = std::pow(nn, -beta);
    if (!(r_inner > VN.support_radius))
        throw std::invalid_argument(
            "build_shell: N^{-beta} <= R_V / N, supports of V_N and W_beta would overlap");

    ShellConstruction shell;
    shell.beta = beta;
    shell.n = n;
    shell.inner_radius = r_inner;
    shell.a_n = scattering_length(VN, s).scattering_length;
    shell.w_height = 4.0 * M_PI * shell.a_n * std::pow(nn, 3.0 * beta);

    auto residual = [&](double r_outer) {
        return shell_scattering_length(VN, shell.w_height, r_inner, r_outer, s, nullptr);
    };

    // The residual oscillates once the shell gets wide (the attractive well
    // supports more and more half-waves), so endpoint signs alone are not a
    // reliable bracket. Scan outward for the first sign change -- the outer
    // radius is defined as the smallest root above N^{-beta} -- then bisect.
    const double scan_start = r_inner * (1.0 + 1e-9);
    double lo = scan_start, hi = 0.0, f_lo = residual(lo), f_hi = 0.0;
    bool bracketed = false;
    for (double span : {10.0 * r_inner, 100.0 * r_inner}) {
        const int segments = 512;
        const double step = (span - lo) / segments;
        double r_prev = lo, f_prev = f_lo;
        for (int i = 1; i <= segments; ++i) {
            const double r_cur = (i == segments) ? span : lo + i * step;
            const double f_cur = residual(r_cur);
            if (f_prev * f_cur <= 0.0) {
                lo = r_prev;
                f_lo = f_prev;
                hi = r_cur;
                f_hi = f_cur;
                bracketed = true;
                break;
            }
            r_prev = r_cur;
            f_prev = f_cur;
        }
        if (bracketed) break;
        lo = span;
        f_lo = f_prev;
    }
    if (!bracketed)
        throw std::runtime_error(
            "build_shell: no sign change of the residual scattering length in the "
            "bracket [N^-beta, 100 N^-beta]; beta and N are incompatible");
    while ((hi - lo) / hi > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    shell.outer_radius = 0.5 * (lo + hi);

    RadialMesh mesh;
    shell.residual_scattering_length =
        shell_scattering_length(VN, shell.w_height, r_inner, shell.outer_radius, s, &mesh);
    // normalise so f -> 1 in the (now scattering-free) exterior
    const double c = mesh.w_prime_end;
    shell.f_beta.r_grid = mesh.r;
    shell.f_beta.f_values.resize(mesh.r.size());
    shell.f_beta.f_values[0] = mesh.w_prime_0 / c;
    for (std::size_t i = 1; i < mesh.r.size(); ++i)
        shell.f_beta.f_values[i] = mesh.w[i] / (c * mesh.r[i]);
    shell.f_beta.scattering_length = 0.0;
    shell.g_beta.resize(mesh.r.size());
    for (std::size_t i = 0; i < mesh.r.size(); ++i)
        shell.g_beta[i] = 1.0 - shell.f_beta.f_values[i];
    return shell;
}

GBetaNorms g_beta_norms(const ShellConstruction& shell) {
    const auto& r = shell.f_beta.r_grid;
    const auto& g = shell.g_beta;
    if (r.size() < 3) throw std::runtime_error("g_beta_norms: mesh too small");
    double s1 = 0.0, s32 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (r[i] >= shell.outer_radius) break;  // g vanishes outside R_beta
        const double h = r[i + 1] - r[i];
        auto term = [&](double p) {
            const double a = std::pow(std::abs(g[i]), p) * r[i] * r[i];
            const double b = std::pow(std::abs(g[i + 1]), p) * r[i + 1] * r[i + 1];
            return 0.5 * (a + b) * h;
        };
        s1 += term(1.0);
        s32 += term(1.5);
        s2 += term(2.0);
    }
    const double fourpi = 4.0 * M_PI;
    GBetaNorms norms;
    norms.l1 = fourpi * s1;
    norms.l32 = std::pow(fourpi * s32, 2.0 / 3.0);
    norms.l2 = std::sqrt(fourpi * s2);
    if (!std::isfinite(norms.l1) || !std::isfinite(norms.l32) || !std::isfinite(norms.l2))
        throw std::runtime_error("g_beta_norms: quadrature failed to converge");
    return norms;
}

}  // namespace spingp
