#include "spingp/gp.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace spingp {

void GPParams::validate(const Grid& g) const {
    if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end)
        throw std::invalid_argument("GPParams: need 0 < dt <= t_end");
    // stability guard dt * max|S| <= 0.5, sampled over grid and time
    double smax = 0.0;
    const int nt = 16;
    for (int it = 0; it <= nt; ++it) {
        const double t = t_end * it / nt;
        for (std::size_t i = 0; i < g.total_points(); i += std::max<std::size_t>(1, g.total_points() / 64)) {
            const Mat2 S = assemble_S(potential, g.position(i), t);
            smax = std::max(smax, S.cwiseAbs().maxCoeff());
        }
    }
    if (dt * smax > 0.5)
        throw std::invalid_argument("GPParams: dt * max|S| exceeds 0.5 stability guard");
}

double gp_energy(const SpinorField& f, double a, const MatrixPotential& p, double t) {
    f.check_shape();
    const double n2 = spinor_norm2(f);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("gp_energy: field must be normalized");

    const Grid& g = f.grid;
    const std::size_t n = g.total_points();
    const double dv = g.cell_volume();

    Fft fft(g);
    std::vector<cplx> uh = f.u, vh = f.v;
    fft.forward(uh);
    fft.forward(vh);

    // Parseval: sum_x |u|^2 dv == sum_k |uh_k|^2 dv / n
    double kinetic = 0.0;
    const int npa = g.points_per_axis;
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t rem = flat;
        double k2 = 0.0;
        for (int ax = 0; ax < g.dim; ++ax) {
            const int i = static_cast<int>(rem % npa);
            rem /= npa;
            const double k = g.wavenumber(i, ax);
            k2 += k * k;
        }
        kinetic += k2 * (std::norm(uh[flat]) + std::norm(vh[flat]));
    }
    kinetic *= dv / static_cast<double>(n);

    double interaction = 0.0;
    cplx pot(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double du = std::norm(f.u[i]);
        const double dvw = std::norm(f.v[i]);
        interaction += du * du + 2.0 * du * dvw + dvw * dvw;
        const Mat2 S = assemble_S(p, g.position(i), t);
        Eigen::Vector2cd spin(f.u[i], f.v[i]);
        pot += (spin.adjoint() * (S * spin))(0, 0);
    }
    interaction *= 4.0 * M_PI * a * dv;
    pot *= dv;
    if (std::abs(pot.imag()) > 1e-10)
        throw std::runtime_error("gp_energy: imaginary residue in potential term");
    return kinetic + interaction + pot.real();
}

namespace {

void potential_half_step(SpinorField& f, const GPParams& params, double t_mid, double half_dt) {
    const Grid& g = f.grid;
    const double coupling = 8.0 * M_PI * params.scattering_length;
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        Mat2 M = assemble_S(params.potential, g.position(i), t_mid);
        const double rho = std::norm(f.u[i]) + std::norm(f.v[i]);
        M(0, 0) += coupling * rho;
        M(1, 1) += coupling * rho;
        const Mat2 U = matexp_2x2(M, half_dt);
        const cplx u = f.u[i], v = f.v[i];
        f.u[i] = U(0, 0) * u + U(0, 1) * v;
        f.v[i] = U(1, 0) * u + U(1, 1) * v;
    }
}

void kinetic_step(SpinorField& f, double dt, const Fft& fft) {
    const Grid& g = f.grid;
    fft.forward(f.u);
    fft.forward(f.v);
    const int npa = g.points_per_axis;
    for (std::size_t flat = 0; flat < g.total_points(); ++flat) {
        std::size_t rem = flat;
        double k2 = 0.0;
        for (int ax = 0; ax < g.dim; ++ax) {
            const int i = static_cast<int>(rem % npa);
            rem /= npa;
            const double k = g.wavenumber(i, ax);
            k2 += k * k;
        }
        const cplx ph = std::exp(cplx(0.0, -k2 * dt));
        f.u[flat] *= ph;
        f.v[flat] *= ph;
    }
    fft.backward(f.u);
    fft.backward(f.v);
}

bool has_non_finite(const SpinorField& f) {
    for (const auto& c : f.u)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    for (const auto& c : f.v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
}

}  // namespace

SpinorField strang_step(const SpinorField& f, const GPParams& params, double t, const Fft* fft) {
    SpinorField out = f;
    const double dt = params.dt;
    const double t_mid = t + 0.5 * dt;
    potential_half_step(out, params, t_mid, 0.5 * dt);
    if (fft) {
        kinetic_step(out, dt, *fft);
    } else {
        Fft local(f.grid);
        kinetic_step(out, dt, local);
    }
    potential_half_step(out, params, t_mid, 0.5 * dt);
    return out;
}

GPTrajectory evolve(const SpinorField& f0, const GPParams& params, int record_every) {
    f0.check_shape();
    params.validate(f0.grid);
    if (record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
    if (std::abs(spinor_norm2(f0) - 1.0) > 1e-9)
        throw std::invalid_argument("evolve: initial field must be normalized");

    const long n_steps = std::lround(params.t_end / params.dt);
    Fft fft(f0.grid);
    GPTrajectory traj;
    SpinorField f = f0;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(f);
        traj.energies.push_back(gp_energy(f, params.scattering_length, params.potential, t));
        traj.populations.push_back(populations(f));
    };
    record(0.0);
    for (long s = 0; s < n_steps; ++s) {
        const double t = s * params.dt;
        f = strang_step(f, params, t, &fft);
        if (has_non_finite(f))
            throw std::runtime_error("evolve: blow-up (non-finite value) at step " + std::to_string(s));
        if ((s + 1) % record_every == 0 || s + 1 == n_steps) record((s + 1) * params.dt);
    }
    return traj;
}

SpinorField rabi_reference(const std::vector<cplx>& u0, const Grid& g,
                           const RabiParams& rabi, double t) {
    if (!rabi.on_resonance())
        throw std::invalid_argument("rabi_reference: drive off resonance (closed form requires v_hf = w/2)");
    if (u0.size() != g.total_points())
        throw std::invalid_argument("rabi_reference: orbital shape does not match grid");
    SpinorField f(g);
    const double W = rabi.omega_rabi;
    const double w = rabi.omega_drive;
    const cplx up = std::exp(cplx(0.0, 0.5 * w * t)) * std::cos(W * t);
    const cplx dn = cplx(0.0, -1.0) * std::exp(cplx(0.0, -0.5 * w * t)) * std::sin(W * t);
    for (std::size_t i = 0; i < u0.size(); ++i) {
        f.u[i] = up * u0[i];
        f.v[i] = dn * u0[i];
    }
    return f;
}

std::pair<double, double> populations(const SpinorField& f) {
    double pu = 0.0, pv = 0.0;
    for (const auto& c : f.u) pu += std::norm(c);
    for (const auto& c : f.v) pv += std::norm(c);
    const double dv = f.grid.cell_volume();
    return {pu * dv, pv * dv};
}

void write_trajectory_csv(const GPTrajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    out << "t,E,pop_up,pop_down\n";
    char line[160];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(line, sizeof line, "%.12e,%.12e,%.12e,%.12e\n", traj.times[i],
                      traj.energies[i], traj.populations[i].first, traj.populations[i].second);
        out << line;
    }
}

void write_snapshot(const SpinorField& f, double t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    const char magic[4] = {'S', 'P', 'G', 'P'};
    out.write(magic, 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(1);
    put_u32(static_cast<std::uint32_t>(f.grid.dim));
    put_u32(static_cast<std::uint32_t>(f.grid.points_per_axis));
    for (int a = 0; a < 3; ++a) put_f64(f.grid.box_length[a]);
    put_f64(t);
    for (std::size_t i = 0; i < f.u.size(); ++i) {
        put_f64(f.u[i].real());
        put_f64(f.u[i].imag());
        put_f64(f.v[i].real());
        put_f64(f.v[i].imag());
    }
}

SpinorField read_snapshot(const std::string& path, double* t_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "SPGP", 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    auto get_u32 = [&]() { std::uint32_t v; in.read(reinterpret_cast<char*>(&v), 4); return v; };
    auto get_f64 = [&]() { double v; in.read(reinterpret_cast<char*>(&v), 8); return v; };
    const std::uint32_t version = get_u32();
    if (version != 1) throw std::runtime_error("read_snapshot: unsupported version");
    const int dim = static_cast<int>(get_u32());
    const int npa = static_cast<int>(get_u32());
    std::array<double, 3> box;
    for (int a = 0; a < 3; ++a) box[a] = get_f64();
    const double t = get_f64();
    SpinorField f(Grid(dim, npa, box));
    for (std::size_t i = 0; i < f.u.size(); ++i) {
        const double ur = get_f64(), ui = get_f64(), vr = get_f64(), vi = get_f64();
        f.u[i] = cplx(ur, ui);
        f.v[i] = cplx(vr, vi);
    }
    if (!in) throw std::runtime_error("read_snapshot: truncated file " + path);
    if (t_out) *t_out = t;
    return f;
}

}  // namespace spingp
