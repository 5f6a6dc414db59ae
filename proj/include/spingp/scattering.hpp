#pragma once

#include <functional>
#include <vector>

namespace spingp {

/// Spherically symmetric, compactly supported two-body potential profile.
struct RadialPotential {
    std::function<double(double)> profile;  // V(r), zero for r > support_radius
    double support_radius = 1.0;
    bool nonneg = true;

    static RadialPotential square_well(double v0, double radius);
    double operator()(double r) const { return r > support_radius ? 0.0 : profile(r); }
};

/// Zero-energy radial solution f(r) = w(r)/r of (-Lap + V/2) f = 0, f -> 1.
struct ScatteringSolution {
    std::vector<double> r_grid;
    std::vector<double> f_values;
    double scattering_length = 0.0;
    double fit_residual = 0.0;  // rms residual of the exterior linear fit of w
    int exterior_nodes = 0;     // sign changes of w outside the support

    /// Piecewise-linear evaluation on the mesh; exact 1 - a/r beyond it.
    double eval(double r) const;
};

struct SolverSettings {
    int steps_per_piece = 6000;
    double extraction_factor = 1.6;  // integrate to extraction_factor * support
};

ScatteringSolution scattering_length(const RadialPotential& V,
                                     const SolverSettings& s = SolverSettings{});

/// Gross-Pitaevskii rescaling V_N(r) = n^2 V(n r), support shrunk by 1/n.
RadialPotential rescale_potential(const RadialPotential& V, int n);

/// The shell construction: W_beta of height 4 pi a_N N^{3 beta} on the shell
/// N^{-beta} < r < R_beta, with R_beta fixed so V_N - W_beta has vanishing
/// scattering length.
struct ShellConstruction {
    double beta = 0.0;
    int n = 0;
    double a_n = 0.0;          // a / N from the solver
    double w_height = 0.0;     // 4 pi a_N N^{3 beta}
    double inner_radius = 0.0; // N^{-beta}
    double outer_radius = 0.0; // R_beta
    double residual_scattering_length = 0.0;  // of V_N - W_beta at R_beta
    ScatteringSolution f_beta; // zero-energy solution of V_N - W_beta
    std::vector<double> g_beta; // 1 - f_beta on f_beta.r_grid
};

ShellConstruction build_shell(const RadialPotential& V, double beta, int n,
                              const SolverSettings& s = SolverSettings{});

struct GBetaNorms {
    double l1 = 0.0;
    double l32 = 0.0;
    double l2 = 0.0;
};

/// Radial quadrature of |g_beta|^p 4 pi r^2 dr for p in {1, 3/2, 2}.
GBetaNorms g_beta_norms(const ShellConstruction& shell);

}  // namespace spingp
