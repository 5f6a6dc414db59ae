#include "spingp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "spingp/counting.hpp"
#include "spingp/effective.hpp"
#include "spingp/gp.hpp"
#include "spingp/lattice.hpp"
#include "spingp/protocol.hpp"
#include "spingp/scattering.hpp"
#include "spingp/svg.hpp"

#ifndef SPINGP_BUILD_ID
#define SPINGP_BUILD_ID "unknown"
#endif

namespace spingp {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

json report_header(const std::string& kind) {
    json j;
    j["schema_version"] = 1;
    j["build_id"] = SPINGP_BUILD_ID;
    j["kind"] = kind;
    return j;
}

void write_text(const std::string& path, const std::string& text,
                std::vector<std::string>& files) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    files.push_back(path);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::VectorXcd random_orbital(int modes, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd phi(modes);
    for (int i = 0; i < modes; ++i) phi[i] = cplx(gauss(rng), gauss(rng));
    phi /= phi.norm();
    return phi;
}

// Per-site internal-level drive block matching the matrix potential layout:
// [[-w/2, W cos(wt) + i W sin(wt)], [conj, w/2]].
std::function<Eigen::Matrix2cd(int, double)> drive_onebody(double omega_rabi,
                                                           double omega_drive) {
    return [omega_rabi, omega_drive](int, double t) {
        const double b1 = omega_rabi * std::cos(omega_drive * t);
        const double b2 = -omega_rabi * std::sin(omega_drive * t);
        const double vhf = 0.5 * omega_drive;
        Eigen::Matrix2cd S;
        S << cplx(-vhf, 0.0), cplx(b1, -b2), cplx(b1, b2), cplx(vhf, 0.0);
        return S;
    };
}

LatticeModel model_from_config(const ExperimentConfig& cfg) {
    LatticeModel m;
    m.sites = cfg.sites;
    m.hopping = cfg.hopping;
    std::vector<double> pv = cfg.pair_v;
    if (pv.empty()) pv = {1.0, 0.4, 0.1, 0.05};
    m.pair_potential = [pv](int sep) {
        return pv[std::min<std::size_t>(sep, pv.size() - 1)];
    };
    m.onebody = drive_onebody(cfg.omega_rabi, cfg.omega_drive);
    m.scaling = cfg.scaling_mode == "mean_field" ? ScalingMode::mean_field
                                                 : ScalingMode::gross_pitaevskii;
    return m;
}

LatticeOrbital trend_initial_orbital(int sites) {
    LatticeOrbital phi(sites);
    for (int s = 0; s < sites; ++s)
        phi.amps[2 * s] = 1.0 + 0.3 * std::cos(2.0 * M_PI * s / sites);
    phi.normalize();
    return phi;
}

// operator norm of diag(g) * (projector on the given slot) over the pair
// space C^M (x) C^M; g indexed by ring separation of the two sites.
double pair_diag_projector_norm(const Eigen::VectorXd& g_of_sep, int sites,
                                const Eigen::VectorXcd& phi, int slot) {
    const int M = 2 * sites;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(M * M, M * M);
    const Eigen::MatrixXcd p = phi * phi.adjoint();
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            for (int ap = 0; ap < M; ++ap)
                for (int bp = 0; bp < M; ++bp) {
                    cplx val(0.0);
                    if (slot == 1 && b == bp) val = p(a, ap);
                    if (slot == 2 && a == ap) val = p(b, bp);
                    if (val != cplx(0.0)) P(a * M + b, ap * M + bp) = val;
                }
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) {
            const int sep = std::min(std::abs(a / 2 - b / 2),
                                     sites - std::abs(a / 2 - b / 2));
            P.row(a * M + b) *= g_of_sep[sep];
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
    return svd.singularValues()[0];
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

json scenario_rabi(const ExperimentConfig& cfg, std::vector<std::string>& files) {
    const Grid g(cfg.grid_dim, cfg.grid_points,
                 {cfg.box_length, cfg.box_length, cfg.box_length});
    SpinorField f(g);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    for (auto& c : f.u) c = 1.0 / std::sqrt(vol);

    GPParams params;
    params.scattering_length = cfg.scattering_length_a;
    params.potential = MatrixPotential::rabi_drive(cfg.omega_rabi, cfg.omega_drive);
    params.dt = cfg.dt;
    params.t_end = cfg.t_end;
    params.validate(g);

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const long stride = std::max<long>(1, n_steps / 400);
    Fft fft(g);
    double max_dev = 0.0;
    std::string csv = "t,pop_up,pop_down,pop_up_law,pop_down_law\n";
    std::vector<double> ts, pus, pvs;
    for (long s = 0; s <= n_steps; ++s) {
        const double t = s * cfg.dt;
        const auto [pu, pv] = populations(f);
        const double cu = std::cos(cfg.omega_rabi * t);
        const double sv = std::sin(cfg.omega_rabi * t);
        max_dev = std::max({max_dev, std::abs(pu - cu * cu), std::abs(pv - sv * sv)});
        if (s % stride == 0 || s == n_steps) {
            csv += num(t) + "," + num(pu) + "," + num(pv) + "," + num(cu * cu) + "," +
                   num(sv * sv) + "\n";
            ts.push_back(t);
            pus.push_back(pu);
            pvs.push_back(pv);
        }
        if (s < n_steps) f = strang_step(f, params, t, &fft);
    }
    write_text(cfg.out_dir + "/rabi_populations.csv", csv, files);

    SvgPlot plot("Resonant population transfer", "t", "population");
    plot.add_series("up", ts, pus, "#1f77b4");
    plot.add_series("down", ts, pvs, "#d62728");
    plot.write(cfg.out_dir + "/rabi_populations.svg");
    files.push_back(cfg.out_dir + "/rabi_populations.svg");

    json r = report_header("rabi");
    r["omega_rabi"] = cfg.omega_rabi;
    r["omega_drive"] = cfg.omega_drive;
    r["dt"] = cfg.dt;
    r["t_end"] = cfg.t_end;
    r["max_population_law_deviation"] = max_dev;
    r["passed"] = max_dev < 1e-8;
    return r;
}

json scenario_gp_run(const ExperimentConfig& cfg, std::vector<std::string>& files) {
    const Grid g(cfg.grid_dim, cfg.grid_points,
                 {cfg.box_length, cfg.box_length, cfg.box_length});
    SpinorField f(g);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        const auto x = g.position(i);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
        f.u[i] = std::exp(-0.5 * r2);
    }
    normalize(f);

    GPParams params;
    params.scattering_length = cfg.scattering_length_a;
    params.potential = MatrixPotential::harmonic(cfg.trap_omega_up, cfg.trap_omega_down);
    if (cfg.omega_rabi != 0.0) {
        const MatrixPotential drive =
            MatrixPotential::rabi_drive(cfg.omega_rabi, cfg.omega_drive);
        params.potential.b1 = drive.b1;
        params.potential.b2 = drive.b2;
        params.potential.v_hf = drive.v_hf;
    }
    params.dt = cfg.dt;
    params.t_end = cfg.t_end;

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const int record_every = static_cast<int>(std::max<long>(1, n_steps / 400));
    const GPTrajectory traj = evolve(f, params, record_every);

    write_trajectory_csv(traj, cfg.out_dir + "/gp_trajectory.csv");
    files.push_back(cfg.out_dir + "/gp_trajectory.csv");
    write_snapshot(traj.snapshots.back(), traj.times.back(), cfg.out_dir + "/gp_final.spgp");
    files.push_back(cfg.out_dir + "/gp_final.spgp");

    SvgPlot plot("Condensate energy and populations", "t", "value");
    std::vector<double> pu, pv;
    for (const auto& p : traj.populations) {
        pu.push_back(p.first);
        pv.push_back(p.second);
    }
    plot.add_series("energy", traj.times, traj.energies, "#2ca02c");
    plot.add_series("pop up", traj.times, pu, "#1f77b4");
    plot.add_series("pop down", traj.times, pv, "#d62728");
    plot.write(cfg.out_dir + "/gp_trajectory.svg");
    files.push_back(cfg.out_dir + "/gp_trajectory.svg");

    double norm_drift = 0.0;
    for (const auto& s : traj.snapshots)
        norm_drift = std::max(norm_drift, std::abs(spinor_norm2(s) - 1.0));
    double energy_drift = 0.0;
    for (double e : traj.energies)
        energy_drift = std::max(energy_drift,
                                std::abs(e - traj.energies.front()) /
                                    std::max(1.0, std::abs(traj.energies.front())));

    json r = report_header("gp_run");
    r["scattering_length"] = cfg.scattering_length_a;
    r["norm_drift"] = norm_drift;
    r["energy_drift_relative"] = energy_drift;
    r["static_potential"] = cfg.omega_rabi == 0.0;
    r["passed"] = norm_drift < 1e-9;
    return r;
}

json scenario_scattering_sweep(const ExperimentConfig& cfg,
                               std::vector<std::string>& files) {
    const RadialPotential V = RadialPotential::square_well(cfg.well_depth, cfg.well_radius);
    const ScatteringSolution base = scattering_length(V);
    const double kappa = std::sqrt(0.5 * cfg.well_depth);
    const double analytic = cfg.well_radius - std::tanh(kappa * cfg.well_radius) / kappa;

    std::vector<int> ns = cfg.n_list;
    if (ns.empty()) ns = {100, 1000, 10000, 100000};

    std::string csv = "N,a_N,a_N_times_N,R_beta,R_beta_N_beta,g_l1,g_l32,g_l2,residual_a\n";
    std::vector<double> logN, l1, l32, l2, xs;
    json rows = json::array();
    for (int n : ns) {
        const ShellConstruction shell = build_shell(V, cfg.beta, n);
        const GBetaNorms norms = g_beta_norms(shell);
        const double rb = shell.outer_radius * std::pow(n, cfg.beta);
        csv += std::to_string(n) + "," + num(shell.a_n) + "," + num(shell.a_n * n) + "," +
               num(shell.outer_radius) + "," + num(rb) + "," + num(norms.l1) + "," +
               num(norms.l32) + "," + num(norms.l2) + "," +
               num(shell.residual_scattering_length) + "\n";
        logN.push_back(std::log(static_cast<double>(n)));
        l1.push_back(std::log(norms.l1));
        l32.push_back(std::log(norms.l32));
        l2.push_back(std::log(norms.l2));
        xs.push_back(n);
        json row;
        row["N"] = n;
        row["a_N"] = shell.a_n;
        row["R_beta"] = shell.outer_radius;
        row["R_beta_N_beta"] = rb;
        row["residual_scattering_length"] = shell.residual_scattering_length;
        rows.push_back(row);
    }
    write_text(cfg.out_dir + "/scattering_sweep.csv", csv, files);

    SvgPlot plot("Shell-construction norm scaling", "N", "norm", true, true);
    std::vector<double> e1, e32, e2;
    for (double v : l1) e1.push_back(std::exp(v));
    for (double v : l32) e32.push_back(std::exp(v));
    for (double v : l2) e2.push_back(std::exp(v));
    plot.add_series("L1", xs, e1, "#1f77b4");
    plot.add_series("L3/2", xs, e32, "#2ca02c");
    plot.add_series("L2", xs, e2, "#d62728");
    plot.write(cfg.out_dir + "/scattering_sweep.svg");
    files.push_back(cfg.out_dir + "/scattering_sweep.svg");

    const double s1 = fit_slope(logN, l1), s32 = fit_slope(logN, l32),
                 s2 = fit_slope(logN, l2);
    json r = report_header("scattering_sweep");
    r["well_depth"] = cfg.well_depth;
    r["well_radius"] = cfg.well_radius;
    r["beta"] = cfg.beta;
    r["scattering_length"] = base.scattering_length;
    r["scattering_length_analytic"] = analytic;
    r["fit_residual"] = base.fit_residual;
    r["rows"] = rows;
    r["slope_l1"] = s1;
    r["slope_l32"] = s32;
    r["slope_l2"] = s2;
    r["slope_targets"] = {-(1.0 + 2.0 * cfg.beta), -(1.0 + cfg.beta),
                          -(1.0 + 0.5 * cfg.beta)};
    const bool ok = std::abs(s1 + 1.0 + 2.0 * cfg.beta) <= 0.05 &&
                    std::abs(s32 + 1.0 + cfg.beta) <= 0.05 &&
                    std::abs(s2 + 1.0 + 0.5 * cfg.beta) <= 0.05;
    r["passed"] = ok;
    return r;
}

json scenario_convergence_trend(const ExperimentConfig& cfg,
                                std::vector<std::string>& files) {
    LatticeModel model = model_from_config(cfg);
    model.scaling = ScalingMode::mean_field;
    const LatticeOrbital phi0 = trend_initial_orbital(model.sites);

    std::vector<int> ns = cfg.n_list;
    if (ns.empty()) ns = {2, 3, 4, 5, 6, 8};
    std::sort(ns.begin(), ns.end());

    struct Row {
        int n;
        double alpha_tilde_val, alpha_tilde_counting_val, dist, lower, upper, e_n, e_gp;
    };
    std::vector<Row> rows(ns.size());

    auto work = [&](std::size_t idx) {
        const int N = ns[idx];
        auto basis = std::make_shared<SymmetricBasis>(2 * model.sites, N);
        ManyBodyState psi = product_state(basis, phi0);
        psi = propagate(psi, model, 0.0, cfg.t_end, cfg.dt);
        LatticeOrbital phi = evolve_effective(phi0, model, N, 0.0, cfg.t_end, cfg.dt);
        phi.normalize();
        const Eigen::MatrixXcd gamma = partial_trace(psi);
        const TraceDistanceResult td = trace_distance(gamma, phi.amps);
        const CondensateProjector proj(basis, phi.amps);
        rows[idx] = {N,
                     alpha_tilde(psi, phi.amps),
                     alpha_tilde_counting(psi, proj),
                     td.distance,
                     td.lower,
                     td.upper,
                     energy_per_particle(psi, model, cfg.t_end),
                     lattice_gp_energy(phi, model, N, cfg.t_end)};
    };

    if (cfg.threads > 1) {
        std::vector<std::thread> pool;
        std::mutex mx;
        std::size_t next = 0;
        for (int t = 0; t < std::min<int>(cfg.threads, static_cast<int>(ns.size())); ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t idx;
                    {
                        std::lock_guard<std::mutex> lk(mx);
                        if (next >= ns.size()) return;
                        idx = next++;
                    }
                    work(idx);
                }
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < ns.size(); ++i) work(i);
    }

    std::string csv =
        "N,alpha_tilde,alpha_tilde_counting,trace_distance,bound_lower,bound_upper,"
        "energy_per_particle,effective_energy\n";
    std::vector<double> logn, loga, xn, dist;
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        csv += std::to_string(r.n) + "," + num(r.alpha_tilde_val) + "," +
               num(r.alpha_tilde_counting_val) + "," + num(r.dist) + "," + num(r.lower) +
               "," + num(r.upper) + "," + num(r.e_n) + "," + num(r.e_gp) + "\n";
        logn.push_back(std::log(static_cast<double>(r.n)));
        loga.push_back(std::log(r.alpha_tilde_val));
        xn.push_back(r.n);
        dist.push_back(r.dist);
        if (i > 0 && rows[i].dist >= rows[i - 1].dist) monotone = false;
    }
    write_text(cfg.out_dir + "/convergence_trend.csv", csv, files);

    SvgPlot plot("Condensation indicator vs particle number", "N", "alpha", true, true);
    std::vector<double> alph;
    for (const auto& r : rows) alph.push_back(r.alpha_tilde_val);
    plot.add_series("alpha_tilde", xn, alph, "#1f77b4");
    plot.add_series("trace distance", xn, dist, "#d62728");
    plot.write(cfg.out_dir + "/convergence_trend.svg");
    files.push_back(cfg.out_dir + "/convergence_trend.svg");

    double g_eff = 0.0;
    for (int sep = 0; sep < model.sites; ++sep) {
        // total coupling sum over the ring relative to one site, cell weight 1
        g_eff += model.pair_potential(model.separation(0, sep));
    }

    const double slope = fit_slope(logn, loga);
    json r = report_header("convergence_trend");
    r["sites"] = model.sites;
    r["scaling_mode"] = "mean_field";
    r["effective_coupling_sum_V"] = g_eff;
    r["g_sampling"] = "ring separation, cell weight 1";
    r["t"] = cfg.t_end;
    r["dt"] = cfg.dt;
    r["n_list"] = ns;
    r["alpha_tilde_slope"] = slope;
    r["trace_distance_monotone_decreasing"] = monotone;
    r["passed"] = monotone && slope <= -0.7;
    return r;
}

json scenario_protocol_demo(const ExperimentConfig& cfg, std::vector<std::string>& files) {
    const Grid g(1, cfg.grid_points, {cfg.box_length, cfg.box_length, cfg.box_length});
    ThreeLevelSpinor s;
    s.cell_weight = g.cell_volume();
    const std::size_t n = g.total_points();
    s.u.resize(n);
    s.v.resize(n);
    s.w.assign(n, cplx(0.0));
    double nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        s.u[i] = std::exp(-0.5 * x * x);
        s.v[i] = x * std::exp(-0.5 * x * x);  // odd: orthogonal to u
        nu += std::norm(s.u[i]);
        nv += std::norm(s.v[i]);
    }
    // each level carries half of the total population
    for (auto& c : s.u) c /= std::sqrt(2.0 * nu * s.cell_weight);
    for (auto& c : s.v) c /= std::sqrt(2.0 * nv * s.cell_weight);

    const auto up_chain = probe(pump(blow(s)));
    const auto down_chain = probe(s);
    const auto joint_chain = probe(pump(s));
    const auto up_density = select_and_image(up_chain);
    const auto down_density = select_and_image(down_chain);
    const auto joint_density = select_and_image(joint_chain);

    // composite check: blow -> pump -> probe equals (u, v, 0) -> (0, 0, u)
    double comp_residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        comp_residual = std::max(comp_residual, std::abs(up_chain.u[i]));
        comp_residual = std::max(comp_residual, std::abs(up_chain.v[i]));
        comp_residual = std::max(comp_residual, std::abs(up_chain.w[i] - s.u[i]));
    }

    std::string csv = "x,up_density,down_density,joint_density\n";
    double mass_up = 0.0, mass_down = 0.0, mass_joint = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        csv += num(x) + "," + num(up_density[i]) + "," + num(down_density[i]) + "," +
               num(joint_density[i]) + "\n";
        mass_up += up_density[i] * s.cell_weight;
        mass_down += down_density[i] * s.cell_weight;
        mass_joint += joint_density[i] * s.cell_weight;
    }
    write_text(cfg.out_dir + "/protocol_densities.csv", csv, files);

    json r = report_header("protocol_demo");
    r["mass_up"] = mass_up;
    r["mass_down"] = mass_down;
    r["mass_joint"] = mass_joint;
    r["composition_residual"] = comp_residual;
    r["unit_convention"] =
        "solver units: hbar = 1, 2m = 1; the demo drive strength 1 stands for a "
        "two-photon coupling of 2*pi*625 Hz, i.e. one time unit is 1/(2*pi*625) s; "
        "the hyperfine carrier near 2*pi*6.8 GHz is not resolved and enters only "
        "through the resonant rotating frame";
    r["passed"] = comp_residual < 1e-14 && std::abs(mass_joint - 1.0) < 1e-12;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// property suites
// ---------------------------------------------------------------------------

namespace {

struct Case {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
};

json cases_to_json(const std::vector<Case>& cases, bool& all_ok) {
    json arr = json::array();
    for (const auto& c : cases) {
        json j;
        j["name"] = c.name;
        j["measured"] = c.measured;
        j["bound"] = c.bound;
        j["passed"] = c.passed;
        arr.push_back(j);
        if (!c.passed) all_ok = false;
    }
    return arr;
}

Eigen::VectorXd random_weights(int n_particles, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd w(n_particles + 5);
    for (int i = 0; i < w.size(); ++i) w[i] = uni(rng);
    return w;
}

json suite_lemma31(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Case> cases;
    const double xi = 0.1;

    for (const auto& [d, N] : std::vector<std::pair<int, int>>{{2, 3}, {3, 4}, {2, 5}}) {
        auto basis = std::make_shared<SymmetricBasis>(2 * d, N);
        const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
        const CondensateProjector proj(basis, phi);
        const std::string tag = "d=" + std::to_string(d) + ",N=" + std::to_string(N) + ": ";

        // completeness and orthogonality of {P_k}
        double comp_res = 0.0, orth_res = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const ManyBodyState psi = random_state(basis, rng());
            const auto comps = decompose(proj, psi.amplitudes);
            Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(psi.amplitudes.size());
            for (const auto& c : comps) sum += c;
            comp_res = std::max(comp_res, (sum - psi.amplitudes).norm());
            for (int k = 0; k <= N; ++k) {
                const auto nested = decompose(proj, comps[k]);
                for (int l = 0; l <= N; ++l) {
                    const Eigen::VectorXcd expect =
                        (l == k) ? comps[k] : Eigen::VectorXcd::Zero(comps[k].size());
                    orth_res = std::max(orth_res, (nested[l] - expect).norm());
                }
            }
        }
        cases.push_back({tag + "sum_k P_k = 1", comp_res, 1e-12, comp_res < 1e-12});
        cases.push_back({tag + "P_k P_l = delta P_k", orth_res, 1e-12, orth_res < 1e-12});

        // [f_hat, q_1] = 0 on the one-slot representation
        {
            const ManyBodyState psi = random_state(basis, rng());
            const WeightFunction f = WeightFunction::custom(N, random_weights(N, rng));
            OneSlotState t = expand_one_slot(psi);
            const CondensateProjector rest_proj(t.rest, phi);
            OneSlotState a = apply_counting_one_slot(t, rest_proj, phi, f, 0);
            apply_slot_projector(a, phi, true);
            OneSlotState b = t;
            apply_slot_projector(b, phi, true);
            b = apply_counting_one_slot(b, rest_proj, phi, f, 0);
            const double res = (a.data - b.data).norm();
            cases.push_back({tag + "[f,q1] = 0", res, 1e-12, res < 1e-12});
        }

        // f g = (fg) as operators
        {
            const ManyBodyState psi = random_state(basis, rng());
            const Eigen::VectorXd fw = random_weights(N, rng);
            const Eigen::VectorXd gw = random_weights(N, rng);
            const CountingOperator f{WeightFunction::custom(N, fw), 0};
            const CountingOperator gop{WeightFunction::custom(N, gw), 0};
            const CountingOperator fg{
                WeightFunction::custom(N, (fw.array() * gw.array()).matrix()), 0};
            const ManyBodyState lhs = apply_counting(apply_counting(psi, proj, gop), proj, f);
            const ManyBodyState rhs = apply_counting(psi, proj, fg);
            const double res = (lhs.amplitudes - rhs.amplitudes).norm();
            cases.push_back({tag + "f.g = (fg)", res, 1e-12, res < 1e-12});
        }

        // n^2 expectation equals <q_1> via slot symmetry
        {
            const ManyBodyState psi = random_state(basis, rng());
            const double route1 = alpha_tilde_counting(psi, proj);
            OneSlotState t = expand_one_slot(psi);
            apply_slot_projector(t, phi, true);
            const double route2 = t.data.squaredNorm();
            const double res = std::abs(route1 - route2);
            cases.push_back({tag + "<n^2> = <q_1>", res, 1e-12, res < 1e-12});
        }

        // operator-norm bounds for the m-variants, pinned constants 2 and 4
        {
            const WeightFunction m = WeightFunction::m_weight(N, xi);
            const MVariants v = build_m_variants(m);
            const double first_bound = 2.0 * std::pow(N, -1.0 + xi);
            const double second_bound = 4.0 * std::pow(N, -2.0 + 3.0 * xi);
            for (const auto& [nm, op] : std::vector<std::pair<std::string,
                                                              const CountingOperator*>>{
                     {"m_a", &v.a}, {"m_b", &v.b}}) {
                const double norm = counting_operator_norm(*op);
                cases.push_back({tag + "|" + nm + "| <= 2 N^(xi-1)", norm, first_bound,
                                 norm <= first_bound});
            }
            for (const auto& [nm, op] : std::vector<std::pair<std::string,
                                                              const CountingOperator*>>{
                     {"m_c", &v.c}, {"m_d", &v.d}, {"m_e", &v.e}}) {
                const double norm = counting_operator_norm(*op);
                cases.push_back({tag + "|" + nm + "| <= 4 N^(3xi-2)", norm, second_bound,
                                 norm <= second_bound});
            }
            // continuity of m at the crossover
            const double kstar = std::pow(N, 1.0 - 2.0 * xi);
            const double lin = 0.5 * (std::pow(N, -1.0 + xi) * kstar + std::pow(N, -xi));
            const double sq = std::sqrt(kstar / N);
            cases.push_back({tag + "m continuous at crossover", std::abs(lin - sq), 1e-12,
                             std::abs(lin - sq) < 1e-12});
        }

        // R_(12) norm bound on random states
        if (N >= 2) {
            const WeightFunction m = WeightFunction::m_weight(N, xi);
            double worst = 0.0;
            for (int rep = 0; rep < 5; ++rep) {
                const ManyBodyState psi = random_state(basis, rng());
                const TwoSlotState t = expand_two_slots(psi);
                TwoSlotState r = t;
                if (t.rest) {
                    const CondensateProjector rest_proj(t.rest, phi);
                    r = apply_r12_two_slots(t, rest_proj, phi, m);
                } else {
                    r = apply_r12_two_slots(t, proj, phi, m);
                }
                worst = std::max(worst, r.data.norm() / t.data.norm());
            }
            const double bnd = 2.0 * std::pow(N, -1.0 + xi);
            cases.push_back({tag + "|R12| <= C N^(xi-1)", worst, bnd, worst <= bnd});
        }
    }

    bool ok = true;
    json r = report_header("suite");
    r["suite"] = "lemma31";
    r["xi"] = xi;
    r["cases"] = cases_to_json(cases, ok);
    r["passed"] = ok;
    return r;
}

json suite_lemma32(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Case> cases;
    const int d = 2, N = 4;
    auto basis = std::make_shared<SymmetricBasis>(2 * d, N);

    // symmetric-state counting inequality |f q1 psi|^2 <= |f n psi|^2
    {
        double worst_excess = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
            const CondensateProjector proj(basis, phi);
            const ManyBodyState psi = random_state(basis, rng());
            const Eigen::VectorXd fw = random_weights(N, rng);
            const WeightFunction f = WeightFunction::custom(N, fw);

            OneSlotState t = expand_one_slot(psi);
            const CondensateProjector rest_proj(t.rest, phi);
            apply_slot_projector(t, phi, true);
            t = apply_counting_one_slot(t, rest_proj, phi, f, 0);
            const double lhs = t.data.squaredNorm();

            Eigen::VectorXd fnw(N + 5);
            fnw.setZero();
            const WeightFunction n = WeightFunction::n_weight(N);
            for (int k = 0; k <= N; ++k) fnw[k] = f.eval(k) * n.eval(k);
            const ManyBodyState fn =
                apply_counting(psi, proj, {WeightFunction::custom(N, fnw), 0});
            const double rhs = fn.amplitudes.squaredNorm();
            worst_excess = std::max(worst_excess, lhs - rhs);
        }
        cases.push_back({"|f q1 psi|^2 <= |f n psi|^2 (100 random cases)", worst_excess,
                         1e-12, worst_excess < 1e-12});
    }

    // shift identity f Q1 A12 Q2 = Q1 A12 Q2 f_{z-s}
    {
        std::uniform_int_distribution<int> coin(0, 1);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int M = 2 * d;
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(M, rng);
            const ManyBodyState psi = random_state(basis, rng());
            const WeightFunction f = WeightFunction::custom(N, random_weights(N, rng));
            Eigen::MatrixXcd A(M * M, M * M);
            for (int i = 0; i < M * M; ++i)
                for (int j = 0; j < M * M; ++j) A(i, j) = cplx(gauss(rng), gauss(rng));
            const bool q1a = coin(rng), q1b = coin(rng);  // Q1 slot-projector choice
            const bool q2a = coin(rng), q2b = coin(rng);  // Q2 slot-projector choice
            const int z = (q1a ? 1 : 0) + (q1b ? 1 : 0);
            const int s = (q2a ? 1 : 0) + (q2b ? 1 : 0);

            const TwoSlotState t0 = expand_two_slots(psi);
            const CondensateProjector rest_proj(t0.rest, phi);
            auto q1aQ = [&](TwoSlotState& t) {
                apply_slot_projector(t, phi, 1, q1a);
                apply_slot_projector(t, phi, 2, q1b);
            };
            auto q2aQ = [&](TwoSlotState& t) {
                apply_slot_projector(t, phi, 1, q2a);
                apply_slot_projector(t, phi, 2, q2b);
            };
            TwoSlotState lhs = t0;
            q2aQ(lhs);
            apply_slot_pair_matrix(lhs, A);
            q1aQ(lhs);
            lhs = apply_counting_two_slots(lhs, rest_proj, phi, f, 0);

            TwoSlotState rhs = apply_counting_two_slots(t0, rest_proj, phi, f, z - s);
            q2aQ(rhs);
            apply_slot_pair_matrix(rhs, A);
            q1aQ(rhs);
            worst = std::max(worst, (lhs.data - rhs.data).norm());
        }
        cases.push_back({"shift identity (50 random cases)", worst, 1e-12, worst < 1e-12});
    }

    // commutator identity [A12, m] = [A12, R12]
    {
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int M = 2 * d;
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(M, rng);
            const ManyBodyState psi = random_state(basis, rng());
            const WeightFunction m = WeightFunction::m_weight(N, 0.1);
            Eigen::MatrixXcd A(M * M, M * M);
            for (int i = 0; i < M * M; ++i)
                for (int j = 0; j < M * M; ++j) A(i, j) = cplx(gauss(rng), gauss(rng));
            A = (A + A.adjoint().eval()) / 2.0;

            const TwoSlotState t0 = expand_two_slots(psi);
            const CondensateProjector rest_proj(t0.rest, phi);
            auto apply_m = [&](const TwoSlotState& t) {
                return apply_counting_two_slots(t, rest_proj, phi, m, 0);
            };
            auto apply_r = [&](const TwoSlotState& t) {
                return apply_r12_two_slots(t, rest_proj, phi, m);
            };
            TwoSlotState am = apply_m(t0);
            apply_slot_pair_matrix(am, A);
            TwoSlotState ta = t0;
            apply_slot_pair_matrix(ta, A);
            const TwoSlotState ma = apply_m(ta);
            TwoSlotState ar = apply_r(t0);
            apply_slot_pair_matrix(ar, A);
            const TwoSlotState ra = apply_r(ta);
            const Eigen::VectorXcd comm_m = am.data - ma.data;
            const Eigen::VectorXcd comm_r = ar.data - ra.data;
            worst = std::max(worst, (comm_m - comm_r).norm());
        }
        cases.push_back({"[A,m] = [A,R12] (10 random cases)", worst, 1e-11, worst < 1e-11});
    }

    bool ok = true;
    json r = report_header("suite");
    r["suite"] = "lemma32";
    r["cases"] = cases_to_json(cases, ok);
    r["passed"] = ok;
    return r;
}

json suite_lemma33(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Case> cases;
    const int d = 6;
    const double spacing = 0.05;

    // pair-correlation profile from the shell construction, sampled on the ring
    const RadialPotential V = RadialPotential::square_well(8.0, 1.0);
    const ShellConstruction shell = build_shell(V, 0.4, 100);
    Eigen::VectorXd g_of_sep(d);
    for (int s = 0; s < d; ++s) {
        const int sep = std::min(s, d - s);
        const double r = sep * spacing;
        g_of_sep[s] = (r < shell.outer_radius)
                          ? (sep == 0 ? 1.0 - shell.f_beta.f_values[0]
                                      : 1.0 - shell.f_beta.eval(r))
                          : 0.0;
    }

    {
        double worst_ratio = 0.0;
        bool all_ok = true;
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
            const double lhs = pair_diag_projector_norm(g_of_sep, d, phi, 2);
            double sup2 = 0.0;
            for (int s = 0; s < d; ++s)
                sup2 = std::max(sup2, std::norm(phi[2 * s]) + std::norm(phi[2 * s + 1]));
            double g_l2_sq = 0.0;
            for (int s = 0; s < d; ++s) g_l2_sq += g_of_sep[s] * g_of_sep[s];
            const double rhs = std::sqrt(sup2) * std::sqrt(g_l2_sq);
            worst_ratio = std::max(worst_ratio, lhs / rhs);
            if (lhs > rhs + 1e-12) all_ok = false;
        }
        cases.push_back(
            {"|g(x1-x2) p2| <= sup|phi| |g|_2 (10 random orbitals, worst ratio)",
             worst_ratio, 1.0, all_ok});
    }

    // pair-potential smoothing trend: p1 V_n(x1-x2) grows strictly slower
    // than V_n(x1-x2) over the scaling sweep. The gain comes from the
    // support-volume factor |p1 1_supp(V_n)| <= sup|phi| sqrt(#cells), so the
    // lattice must keep resolving the shrinking support: refine the ring with
    // n (sites d_n = 2n, fixed circumference), which keeps the support at a
    // constant number of cells while its one-dimensional volume falls like
    // 1/n. The expected exponent gap is then 1/2 (one dimension), checked
    // with slack; the factorized bound itself is asserted exactly per n.
    {
        const int N = 2;
        const double circumference = d * spacing;
        const double v0 = 8.0, rv = 0.3;
        std::vector<double> logn, log_plain, log_proj;
        bool chain_ok = true;
        double worst_chain = 0.0;
        for (int n : {4, 8, 16, 32}) {
            const int dn = 2 * n;
            const double h = circumference / dn;
            auto basis = std::make_shared<SymmetricBasis>(2 * dn, N);
            LatticeOrbital orb(dn);
            for (int s = 0; s < dn; ++s)
                orb.amps[2 * s] = 1.0 + 0.3 * std::cos(2.0 * M_PI * s / dn);
            orb.normalize();
            const Eigen::VectorXcd& phi = orb.amps;
            const ManyBodyState psi = product_state(basis, orb);
            Eigen::VectorXd vn(dn), supp(dn);
            for (int s = 0; s < dn; ++s) {
                const int sep = std::min(s, dn - s);
                // cell average of n^2 V(n x) around the node sep * h
                const double lo = std::max(sep * h - 0.5 * h, sep == 0 ? -rv / n : 0.0);
                const double hi = std::min(sep * h + 0.5 * h, rv / n);
                const double overlap = std::max(0.0, hi - lo);
                vn[s] = n * static_cast<double>(n) * v0 * overlap / h;
                supp[s] = overlap > 0.0 ? 1.0 : 0.0;
            }
            auto pair_weight = [&](const Eigen::VectorXd& prof) {
                Eigen::MatrixXd w(2 * dn, 2 * dn);
                for (int a = 0; a < 2 * dn; ++a)
                    for (int b = 0; b < 2 * dn; ++b) {
                        const int sep = std::min(std::abs(a / 2 - b / 2),
                                                 dn - std::abs(a / 2 - b / 2));
                        w(a, b) = prof[sep];
                    }
                return w;
            };
            TwoSlotState t = expand_two_slots(psi);
            apply_slot_pair_diagonal(t, pair_weight(vn));
            const double plain = t.data.norm();
            apply_slot_projector(t, phi, 1, false);
            const double proj = t.data.norm();
            // |diag(w) (p tensor 1)|_op = max_beta |w(., beta) phi|_2; used for
            // the characteristic-function factor of the support
            const Eigen::MatrixXd ws = pair_weight(supp);
            double supp_factor = 0.0;
            for (int b = 0; b < 2 * dn; ++b) {
                double col = 0.0;
                for (int a = 0; a < 2 * dn; ++a)
                    col += std::norm(phi[a]) * ws(a, b) * ws(a, b);
                supp_factor = std::max(supp_factor, std::sqrt(col));
            }
            const double chain = supp_factor * plain;  // |p1 1_supp| |V_n psi|
            worst_chain = std::max(worst_chain, proj / chain);
            if (proj > chain * (1.0 + 1e-12)) chain_ok = false;
            logn.push_back(std::log(static_cast<double>(n)));
            log_plain.push_back(std::log(plain));
            log_proj.push_back(std::log(proj));
        }
        const double e_plain = fit_slope(logn, log_plain);
        const double e_proj = fit_slope(logn, log_proj);
        cases.push_back({"exponent of |V_n psi| (reported)", e_plain, 0.0, true});
        cases.push_back({"exponent of |p1 V_n psi| (reported)", e_proj, 0.0, true});
        cases.push_back({"factorized bound |p1 V_n psi| <= |p1 1_supp| |V_n psi| "
                         "(worst ratio)",
                         worst_chain, 1.0, chain_ok});
        cases.push_back({"p1 smoothing: exponent gap > 0.4", e_plain - e_proj, 0.4,
                         e_plain - e_proj > 0.4});
    }

    bool ok = true;
    json r = report_header("suite");
    r["suite"] = "lemma33";
    r["sampling"] = "ring separation times spacing 0.05, nearest node";
    r["cases"] = cases_to_json(cases, ok);
    r["passed"] = ok;
    return r;
}

json suite_lemma41(std::uint64_t) {
    std::vector<Case> cases;
    const RadialPotential V = RadialPotential::square_well(8.0, 1.0);
    const double beta = 0.4;

    std::vector<double> logN, l1, l32, l2;
    double worst_residual = 0.0, worst_band = 0.0;
    for (int n : {100, 1000, 10000, 100000}) {
        const ShellConstruction shell = build_shell(V, beta, n);
        const GBetaNorms norms = g_beta_norms(shell);
        logN.push_back(std::log(static_cast<double>(n)));
        l1.push_back(std::log(norms.l1));
        l32.push_back(std::log(norms.l32));
        l2.push_back(std::log(norms.l2));
        worst_residual = std::max(worst_residual,
                                  std::abs(shell.residual_scattering_length));
        worst_band = std::max(worst_band, shell.outer_radius * std::pow(n, beta));
    }
    cases.push_back({"residual scattering length of V_N - W_beta", worst_residual, 1e-10,
                     worst_residual < 1e-10});
    cases.push_back({"R_beta within factor 3 of N^-beta", worst_band, 3.0,
                     worst_band >= 1.0 && worst_band <= 3.0});
    const double s1 = fit_slope(logN, l1);
    const double s32 = fit_slope(logN, l32);
    const double s2 = fit_slope(logN, l2);
    cases.push_back({"L1 slope vs -(1+2b)", std::abs(s1 + 1.0 + 2.0 * beta), 0.05,
                     std::abs(s1 + 1.0 + 2.0 * beta) <= 0.05});
    cases.push_back({"L3/2 slope vs -(1+b)", std::abs(s32 + 1.0 + beta), 0.05,
                     std::abs(s32 + 1.0 + beta) <= 0.05});
    cases.push_back({"L2 slope vs -(1+b/2)", std::abs(s2 + 1.0 + 0.5 * beta), 0.05,
                     std::abs(s2 + 1.0 + 0.5 * beta) <= 0.05});

    bool ok = true;
    json r = report_header("suite");
    r["suite"] = "lemma41";
    r["beta"] = beta;
    r["slopes"] = {s1, s32, s2};
    r["cases"] = cases_to_json(cases, ok);
    r["passed"] = ok;
    return r;
}

json suite_lemma51(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Case> cases;
    const int d = 3, N = 4;
    const double xi = 0.1;
    auto basis = std::make_shared<SymmetricBasis>(2 * d, N);

    LatticeModel model;
    model.sites = d;
    model.hopping = 1.0;
    model.pair_potential = [](int sep) { return sep == 0 ? 1.0 : 0.4; };
    model.onebody = drive_onebody(1.0, 0.0);
    model.scaling = ScalingMode::mean_field;

    // ordering <n^2> <= <n> <= <m> <= <n> + N^-xi on random states
    {
        double worst = -1.0;
        bool ok_all = true;
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
            const CondensateProjector proj(basis, phi);
            const ManyBodyState psi = random_state(basis, rng());
            const auto comps = decompose(proj, psi.amplitudes);
            const WeightFunction n = WeightFunction::n_weight(N);
            const WeightFunction m = WeightFunction::m_weight(N, xi);
            double en2 = 0.0, en = 0.0, em = 0.0;
            for (int k = 0; k <= N; ++k) {
                const double w = comps[k].squaredNorm();
                en2 += n.eval(k) * n.eval(k) * w;
                en += n.eval(k) * w;
                em += m.eval(k) * w;
            }
            const double slack = std::pow(N, -xi);
            if (!(en2 <= en + 1e-12 && en <= em + 1e-12 && em <= en + slack + 1e-12))
                ok_all = false;
            worst = std::max(worst, em - en);
        }
        cases.push_back({"<n^2> <= <n> <= <m> <= <n> + N^-xi (worst m-n gap)", worst,
                         std::pow(N, -xi), ok_all});
    }

    // exact condensate: <m> = m(0) = N^-xi / 2 and alpha< reduces to it
    {
        const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
        const ManyBodyState psi = product_state(
            basis, [&] { LatticeOrbital o(d); o.amps = phi; return o; }());
        const double e_n = energy_per_particle(psi, model, 0.0);
        const double a_less = alpha_less(psi, phi, model, 0.0, e_n, xi);
        const double m0 = 0.5 * std::pow(N, -xi);
        cases.push_back({"condensate: alpha_less = m(0)", std::abs(a_less - m0), 1e-12,
                         std::abs(a_less - m0) < 1e-12});
    }

    // g = 0 collapses alpha to alpha_less
    {
        const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
        const ManyBodyState psi = random_state(basis, rng());
        const double e_gp = 0.0;
        const AlphaFullResult full =
            alpha_full(psi, phi, model, 0.0, e_gp, xi, Eigen::VectorXd::Zero(d));
        const double res = std::abs(full.alpha - full.alpha_less);
        cases.push_back({"g = 0: alpha = alpha_less", res, 1e-15, res < 1e-15});
    }

    // correction bound |alpha - alpha_less| <= N^2 |g p1| (|m_b| + 2 |m_a|)
    {
        const RadialPotential V = RadialPotential::square_well(8.0, 1.0);
        const ShellConstruction shell = build_shell(V, 0.4, 100);
        const double spacing = 0.05;
        Eigen::VectorXd g_of_sep(d);
        for (int s = 0; s < d; ++s) {
            const int sep = std::min(s, d - s);
            const double rr = sep * spacing;
            g_of_sep[s] = (rr < shell.outer_radius)
                              ? (sep == 0 ? 1.0 - shell.f_beta.f_values[0]
                                          : 1.0 - shell.f_beta.eval(rr))
                              : 0.0;
        }
        double worst_gap = 0.0, worst_mod = 0.0, worst_bound = 0.0;
        bool ok_all = true;
        const WeightFunction m = WeightFunction::m_weight(N, xi);
        const MVariants v = build_m_variants(m);
        for (int rep = 0; rep < 5; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
            const ManyBodyState psi = random_state(basis, rng());
            const double e_n = energy_per_particle(psi, model, 0.0);
            const AlphaFullResult full =
                alpha_full(psi, phi, model, 0.0, e_n, xi, g_of_sep);
            const double gap = std::abs(full.alpha - full.alpha_less);
            // full modulus of the complex pair expectation: bounds both the
            // correction and the imaginary part discarded by Re extraction
            const double mod = std::hypot(full.correction, full.discarded_imag);
            const double gp1 = pair_diag_projector_norm(g_of_sep, d, phi, 1);
            const double bound = static_cast<double>(N) * N * gp1 *
                                 (counting_operator_norm(v.b) +
                                  2.0 * counting_operator_norm(v.a));
            if (gap > bound + 1e-12 || mod > bound + 1e-12) ok_all = false;
            worst_gap = std::max(worst_gap, gap);
            worst_mod = std::max(worst_mod, mod);
            worst_bound = std::max(worst_bound, bound);
        }
        cases.push_back({"|alpha - alpha_less| within operator bound (worst gap)",
                         worst_gap, worst_bound, ok_all});
        cases.push_back({"correction modulus (Re and discarded Im) within bound",
                         worst_mod, worst_bound, worst_mod <= worst_bound + 1e-12});
    }

    // dual routes for alpha_tilde
    {
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::VectorXcd phi = random_orbital(2 * d, rng);
            const CondensateProjector proj(basis, phi);
            const ManyBodyState psi = random_state(basis, rng());
            worst = std::max(worst, std::abs(alpha_tilde(psi, phi) -
                                             alpha_tilde_counting(psi, proj)));
        }
        cases.push_back({"alpha_tilde routes agree", worst, 1e-12, worst < 1e-12});
    }

    bool ok = true;
    json r = report_header("suite");
    r["suite"] = "lemma51";
    r["xi"] = xi;
    r["g_sampling"] = "ring separation times spacing 0.05, nearest node";
    r["cases"] = cases_to_json(cases, ok);
    r["passed"] = ok;
    return r;
}

}  // namespace

RunResult run_suite(const std::string& suite, std::uint64_t seed,
                    const std::string& out_dir) {
    json rep;
    if (suite == "lemma31")
        rep = suite_lemma31(seed);
    else if (suite == "lemma32")
        rep = suite_lemma32(seed);
    else if (suite == "lemma33")
        rep = suite_lemma33(seed);
    else if (suite == "lemma41")
        rep = suite_lemma41(seed);
    else if (suite == "lemma51")
        rep = suite_lemma51(seed);
    else
        throw std::invalid_argument("unknown suite '" + suite + "'");
    RunResult res;
    res.passed = rep.at("passed").get<bool>();
    res.report_json = rep.dump(2) + "\n";
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const std::string path = out_dir + "/" + suite + "_report.json";
        std::ofstream out(path);
        out << res.report_json;
        res.files.push_back(path);
    }
    return res;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    RunResult res;
    json rep;
    try {
        if (cfg.scenario == "rabi")
            rep = scenario_rabi(cfg, res.files);
        else if (cfg.scenario == "gp_run")
            rep = scenario_gp_run(cfg, res.files);
        else if (cfg.scenario == "scattering_sweep")
            rep = scenario_scattering_sweep(cfg, res.files);
        else if (cfg.scenario == "convergence_trend")
            rep = scenario_convergence_trend(cfg, res.files);
        else if (cfg.scenario == "protocol_demo")
            rep = scenario_protocol_demo(cfg, res.files);
        else if (cfg.scenario == "lemma_suite") {
            const RunResult sres = run_suite(cfg.suite, cfg.seed, cfg.out_dir);
            res.files = sres.files;
            rep = json::parse(sres.report_json);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("scenario '" + cfg.scenario + "': " + e.what());
    }
    rep["seed"] = cfg.seed;
    res.passed = rep.value("passed", true);
    res.report_json = rep.dump(2) + "\n";
    const std::string path = cfg.out_dir + "/report.json";
    std::ofstream out(path);
    out << res.report_json;
    res.files.push_back(path);
    return res;
}

}  // namespace spingp
