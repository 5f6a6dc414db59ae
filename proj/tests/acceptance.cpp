// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Tolerances are pinned here, next to each criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "spingp/counting.hpp"
#include "spingp/effective.hpp"
#include "spingp/gp.hpp"
#include "spingp/runner.hpp"
#include "spingp/scattering.hpp"

using namespace spingp;
using json = nlohmann::ordered_json;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

double field_distance(const SpinorField& a, const SpinorField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i)
        s += std::norm(a.u[i] - b.u[i]) + std::norm(a.v[i] - b.v[i]);
    return std::sqrt(s * a.grid.cell_volume());
}

// --- criterion 1: resonant population transfer --------------------------

void criterion_rabi() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.scenario = "rabi";
    cfg.grid_points = 8;
    cfg.box_length = 4.0;
    cfg.dt = 5e-5;
    cfg.t_end = 2.0 * M_PI;
    cfg.omega_rabi = 1.0;
    cfg.omega_drive = 1.0;
    cfg.out_dir = "acceptance_out/rabi";
    const RunResult r = run_experiment(cfg);
    const json rep = json::parse(r.report_json);
    const double dev = rep.at("max_population_law_deviation").get<double>();
    const double secs = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof detail, "max deviation %.3e (< 1e-8), %.1f s (< 10 s)",
                  dev, secs);
    report(1, "resonant two-photon population law", dev < 1e-8 && secs < 10.0, detail);
}

// --- criterion 2: integrator order, norm and energy drift ----------------

void criterion_gp_order() {
    const Grid g(1, 64, {16.0, 1.0, 1.0});
    SpinorField f0(g);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        f0.u[i] = std::exp(-0.5 * x * x);
    }
    normalize(f0);

    auto run = [&](double dt, double t_end) {
        GPParams params;
        params.scattering_length = 0.05;
        params.potential = MatrixPotential::harmonic(1.0, 0.8);
        params.dt = dt;
        params.t_end = t_end;
        return evolve(f0, params, 1 << 30);
    };
    const double h = 2e-3, T = 0.5;
    const double e1 =
        field_distance(run(h, T).snapshots.back(), run(h / 4.0, T).snapshots.back());
    const double e2 = field_distance(run(h / 2.0, T).snapshots.back(),
                                     run(h / 8.0, T).snapshots.back());
    const double ratio = e1 / e2;

    const GPTrajectory longrun = run(1e-3, 10.0);  // ten thousand steps, static S
    double norm_drift = 0.0, energy_drift = 0.0;
    for (const auto& snap : longrun.snapshots)
        norm_drift = std::max(norm_drift, std::abs(spinor_norm2(snap) - 1.0));
    for (double e : longrun.energies)
        energy_drift = std::max(energy_drift, std::abs(e - longrun.energies.front()) /
                                                  std::abs(longrun.energies.front()));
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "halving ratio %.3f (in [3.6, 4.4]), norm drift %.2e (< 1e-9), "
                  "energy drift %.2e (< 1e-6)",
                  ratio, norm_drift, energy_drift);
    report(2, "second-order splitting with conserved norm and energy",
           ratio > 3.6 && ratio < 4.4 && norm_drift < 1e-9 && energy_drift < 1e-6,
           detail);
}

// --- criterion 3: scattering length oracle and 1/N scaling ---------------

void criterion_scattering() {
    double worst_rel = 0.0, worst_scaling = 0.0;
    for (const auto& [v0, R] : std::vector<std::pair<double, double>>{
             {8.0, 1.0}, {2.0, 0.5}, {20.0, 2.0}}) {
        const RadialPotential V = RadialPotential::square_well(v0, R);
        const double a = scattering_length(V).scattering_length;
        const double kappa = std::sqrt(0.5 * v0);
        const double exact = R - std::tanh(kappa * R) / kappa;
        worst_rel = std::max(worst_rel, std::abs(a - exact) / std::abs(exact));
        for (int n : {2, 10, 100}) {
            const double an = scattering_length(rescale_potential(V, n)).scattering_length;
            worst_scaling = std::max(worst_scaling, std::abs(an * n / a - 1.0));
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "analytic mismatch %.2e (< 1e-8 rel), |a_N N / a - 1| %.2e (< 1e-9)",
                  worst_rel, worst_scaling);
    report(3, "square-well scattering length and 1/N rescaling",
           worst_rel < 1e-8 && worst_scaling < 1e-9, detail);
}

// --- criterion 4: shell construction ------------------------------------

void criterion_shell() {
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = run_suite("lemma41", 1, "acceptance_out/lemma41");
    const double secs = seconds_since(t0);
    char detail[120];
    std::snprintf(detail, sizeof detail, "suite %s, %.1f s (< 60 s)",
                  r.passed ? "clean" : "breached", secs);
    report(4, "shell construction residuals and norm slopes", r.passed && secs < 60.0,
           detail);
}

// --- criterion 5: counting algebra suite ---------------------------------

void criterion_counting() {
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult a = run_suite("lemma31", 1, "acceptance_out/lemma31");
    const RunResult b = run_suite("lemma32", 1, "acceptance_out/lemma32");
    const double secs = seconds_since(t0);
    char detail[140];
    std::snprintf(detail, sizeof detail, "projection suite %s, identity suite %s, %.1f s (< 60 s)",
                  a.passed ? "clean" : "breached", b.passed ? "clean" : "breached", secs);
    report(5, "counting algebra identities and norm bounds",
           a.passed && b.passed && secs < 60.0, detail);
}

// --- criterion 6: partial-trace contract ----------------------------------

void criterion_partial_trace() {
    const int d = 2, N = 3;
    const auto basis = std::make_shared<SymmetricBasis>(2 * d, N);
    bool contract_ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        try {
            validate_density_matrix(partial_trace(random_state(basis, 500 + rep)));
        } catch (...) {
            contract_ok = false;
        }
    }
    LatticeOrbital phi(d);
    phi.amps << 0.6, cplx(0.0, 0.5), 0.5, cplx(0.3, -0.2);
    phi.normalize();
    const Eigen::MatrixXcd gamma = partial_trace(product_state(basis, phi));
    const double rank_one_residual = (gamma - phi.amps * phi.amps.adjoint()).norm();

    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool sandwich_ok = true;
    for (int rep = 0; rep < 1000; ++rep) {
        Eigen::MatrixXcd A(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A(i, j) = cplx(gauss(rng), gauss(rng));
        Eigen::MatrixXcd rho = A * A.adjoint();
        rho /= rho.trace().real();
        Eigen::VectorXcd v(4);
        for (int i = 0; i < 4; ++i) v[i] = cplx(gauss(rng), gauss(rng));
        v /= v.norm();
        const TraceDistanceResult td = trace_distance(rho, v);
        if (!(td.lower <= td.distance + 1e-12 && td.distance <= td.upper + 1e-12))
            sandwich_ok = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "contract on 100 states %s, rank-one residual %.2e (< 1e-12), "
                  "sandwich on 1000 pairs %s",
                  contract_ok ? "clean" : "violated", rank_one_residual,
                  sandwich_ok ? "holds" : "violated");
    report(6, "one-body marginal contract and trace-norm sandwich",
           contract_ok && rank_one_residual < 1e-12 && sandwich_ok, detail);
}

// --- criterion 7: mean-field convergence trend ----------------------------

void criterion_convergence() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.scenario = "convergence_trend";
    cfg.sites = 4;
    cfg.hopping = 1.0;
    cfg.pair_v = {1.0, 0.4, 0.1};
    cfg.omega_rabi = 1.0;
    cfg.omega_drive = 0.0;
    cfg.scaling_mode = "mean_field";
    cfg.n_list = {2, 3, 4, 5, 6, 8};
    cfg.dt = 2e-3;
    cfg.t_end = 1.0;
    cfg.threads = 4;
    cfg.out_dir = "acceptance_out/convergence";
    const RunResult r = run_experiment(cfg);
    const json rep = json::parse(r.report_json);
    const double slope = rep.at("alpha_tilde_slope").get<double>();
    const bool monotone = rep.at("trace_distance_monotone_decreasing").get<bool>();
    const double secs = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "trace distance monotone: %s, log-log slope %.3f (<= -0.7), %.0f s (< 300 s)",
                  monotone ? "yes" : "no", slope, secs);
    report(7, "mean-field convergence trend on the four-site ring",
           monotone && slope <= -0.7 && secs < 300.0, detail);
}

// --- criterion 8: energy-derivative identity -------------------------------

void criterion_energy_derivative() {
    const int d = 2, N = 3;
    LatticeModel model;
    model.sites = d;
    model.hopping = 1.0;
    model.pair_potential = [](int sep) { return sep == 0 ? 1.0 : 0.4; };
    // detuned (v_hf != w/2) and site-dependent drive: the resonant uniform
    // drive is a pure frame rotation under which the energy gap stays
    // identically zero, which would make this criterion measure only noise
    const double W = 1.0, w = 1.0, vhf = 0.2;
    model.onebody = [W, w, vhf](int site, double t) {
        const double amp = W * (1.0 + 0.5 * site);
        const double b1 = amp * std::cos(w * t);
        const double b2 = -amp * std::sin(w * t);
        Eigen::Matrix2cd S;
        S << cplx(-vhf, 0.0), cplx(b1, -b2), cplx(b1, b2), cplx(vhf, 0.0);
        return S;
    };
    model.scaling = ScalingMode::mean_field;

    const auto basis = std::make_shared<SymmetricBasis>(2 * d, N);
    LatticeOrbital phi0(d);
    phi0.amps << 1.0, 0.2, 0.7, -0.1;
    phi0.normalize();
    const ManyBodyState psi0 = product_state(basis, phi0);

    const double t_star = 0.4;
    // the propagation step must sit far below the finite-difference truncation
    // error, otherwise the h-halving ratio saturates at the propagation floor
    const double dt_prop = 5e-5;
    auto gap_at = [&](double t) {
        const int steps = std::max(1, static_cast<int>(std::lround(t / dt_prop)));
        const double dt = t / steps;
        ManyBodyState psi = propagate(psi0, model, 0.0, t, dt);
        // remove the ~1e-11 round-off norm drift accumulated over the many
        // small steps; it sits far below the truncation error being measured
        psi.amplitudes.normalize();
        LatticeOrbital phi = evolve_effective(phi0, model, N, 0.0, t, dt);
        phi.normalize();
        return energy_per_particle(psi, model, t) - lattice_gp_energy(phi, model, N, t);
    };
    ManyBodyState psi_star = propagate(psi0, model, 0.0, t_star, dt_prop);
    psi_star.amplitudes.normalize();
    LatticeOrbital phi_star = evolve_effective(phi0, model, N, 0.0, t_star, dt_prop);
    phi_star.normalize();
    auto sdot = [W, w, t_star](int site) {
        const double amp = W * (1.0 + 0.5 * site);
        const double b1p = -amp * w * std::sin(w * t_star);
        const double b2p = -amp * w * std::cos(w * t_star);
        Eigen::Matrix2cd S;
        S << 0.0, cplx(b1p, -b2p), cplx(b1p, b2p), 0.0;
        return S;
    };
    const double exact = delta_a(psi_star, phi_star.amps, sdot);

    auto centered = [&](double h) {
        return (gap_at(t_star + h) - gap_at(t_star - h)) / (2.0 * h);
    };
    const double err1 = std::abs(centered(0.1) - exact);
    const double err2 = std::abs(centered(0.05) - exact);
    const double ratio = err1 / err2;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "fd errors %.3e -> %.3e, halving ratio %.2f (in [3.5, 4.5])", err1,
                  err2, ratio);
    report(8, "energy-derivative identity via centered differences",
           ratio > 3.5 && ratio < 4.5, detail);
}

// --- criterion 9: determinism ---------------------------------------------

void criterion_determinism() {
    ExperimentConfig cfg;
    cfg.scenario = "convergence_trend";
    cfg.sites = 3;
    cfg.pair_v = {1.0, 0.4};
    cfg.omega_rabi = 1.0;
    cfg.omega_drive = 0.0;
    cfg.n_list = {2, 3, 4};
    cfg.dt = 0.01;
    cfg.t_end = 0.2;
    cfg.threads = 3;  // fan-out must not change the output bytes
    cfg.seed = 12345;
    cfg.out_dir = "acceptance_out/det_a";
    const RunResult a = run_experiment(cfg);
    cfg.out_dir = "acceptance_out/det_b";
    const RunResult b = run_experiment(cfg);
    const bool csv_same = slurp("acceptance_out/det_a/convergence_trend.csv") ==
                          slurp("acceptance_out/det_b/convergence_trend.csv");
    const bool json_same = a.report_json == b.report_json;
    const bool svg_same = slurp("acceptance_out/det_a/convergence_trend.svg") ==
                          slurp("acceptance_out/det_b/convergence_trend.svg");

    const RunResult s1 = run_suite("lemma51", 7, "acceptance_out/det_a");
    const RunResult s2 = run_suite("lemma51", 7, "acceptance_out/det_b");
    const bool suite_same = s1.report_json == s2.report_json;
    char detail[120];
    std::snprintf(detail, sizeof detail, "csv %s, json %s, svg %s, suite report %s",
                  csv_same ? "identical" : "differs", json_same ? "identical" : "differs",
                  svg_same ? "identical" : "differs", suite_same ? "identical" : "differs");
    report(9, "seeded reruns are byte-identical", csv_same && json_same && svg_same && suite_same,
           detail);
}

}  // namespace

int main() {
    std::filesystem::create_directories("acceptance_out");
    criterion_rabi();
    criterion_gp_order();
    criterion_scattering();
    criterion_shell();
    criterion_counting();
    criterion_partial_trace();
    criterion_convergence();
    criterion_energy_derivative();
    criterion_determinism();
    if (failures == 0)
        std::printf("all 9 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
