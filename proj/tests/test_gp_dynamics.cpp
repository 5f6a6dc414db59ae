#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "spingp/gp.hpp"

using namespace spingp;

namespace {

Grid box1d(int points = 64, double length = 16.0) {
    return Grid(1, points, {length, 1.0, 1.0});
}

SpinorField uniform_up(const Grid& g) {
    SpinorField f(g);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    for (auto& c : f.u) c = 1.0 / std::sqrt(vol);
    return f;
}

SpinorField gaussian_up(const Grid& g) {
    SpinorField f(g);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        f.u[i] = std::exp(-0.5 * x * x);
    }
    normalize(f);
    return f;
}

double field_distance(const SpinorField& a, const SpinorField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i)
        s += std::norm(a.u[i] - b.u[i]) + std::norm(a.v[i] - b.v[i]);
    return std::sqrt(s * a.grid.cell_volume());
}

}  // namespace

TEST_CASE("energy of a free plane wave is k^2") {
    const Grid g = box1d();
    SpinorField f(g);
    const double k = g.wavenumber(2, 0);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    for (std::size_t i = 0; i < g.total_points(); ++i)
        f.u[i] = std::polar(1.0 / std::sqrt(vol), k * g.coord(static_cast<int>(i), 0));
    const double E = gp_energy(f, 0.0, MatrixPotential::zero(), 0.0);
    CHECK(E == doctest::Approx(k * k).epsilon(1e-12));
}

TEST_CASE("quartic energy of a uniform field is 4 pi a rho") {
    const Grid g = box1d();
    const SpinorField f = uniform_up(g);
    const double a = 0.3;
    const double rho = 1.0 / (g.cell_volume() * static_cast<double>(g.total_points()));
    const double E = gp_energy(f, a, MatrixPotential::zero(), 0.0);
    CHECK(E == doctest::Approx(4.0 * M_PI * a * rho).epsilon(1e-12));
}

TEST_CASE("energy is symmetric under component swap with swapped traps") {
    const Grid g = box1d();
    SpinorField f = gaussian_up(g);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        f.v[i] = 0.4 * std::exp(-0.3 * (x - 1.0) * (x - 1.0));
    }
    normalize(f);
    SpinorField swapped = f;
    std::swap(swapped.u, swapped.v);

    const MatrixPotential p = MatrixPotential::harmonic(1.0, 0.5);
    const MatrixPotential ps = MatrixPotential::harmonic(0.5, 1.0);
    const double E = gp_energy(f, 0.1, p, 0.0);
    const double Es = gp_energy(swapped, 0.1, ps, 0.0);
    CHECK(E == doctest::Approx(Es).epsilon(1e-12));
}

TEST_CASE("energy requires a normalized field") {
    const Grid g = box1d();
    SpinorField f = uniform_up(g);
    for (auto& c : f.u) c *= 2.0;
    CHECK_THROWS(gp_energy(f, 0.0, MatrixPotential::zero(), 0.0));
}

TEST_CASE("free plane wave acquires the exact phase in one step") {
    const Grid g = box1d();
    SpinorField f(g);
    const double k = g.wavenumber(3, 0);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    for (std::size_t i = 0; i < g.total_points(); ++i)
        f.u[i] = std::polar(1.0 / std::sqrt(vol), k * g.coord(static_cast<int>(i), 0));
    GPParams params;
    params.potential = MatrixPotential::zero();
    params.dt = 0.01;
    params.t_end = 0.01;
    const SpinorField g1 = strang_step(f, params, 0.0);
    const cplx phase = std::polar(1.0, -k * k * params.dt);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        CHECK(std::abs(g1.u[i] - phase * f.u[i]) < 1e-13);
        CHECK(std::abs(g1.v[i]) < 1e-15);
    }
}

TEST_CASE("uniform interacting spinor picks up the constant-density phase") {
    const Grid g = box1d();
    SpinorField f(g);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        f.u[i] = 0.8 / std::sqrt(vol);
        f.v[i] = 0.6 / std::sqrt(vol);
    }
    GPParams params;
    params.scattering_length = 0.05;
    params.potential = MatrixPotential::zero();
    params.dt = 0.01;
    params.t_end = 0.01;
    const double rho = 1.0 / vol;
    const SpinorField g1 = strang_step(f, params, 0.0);
    const cplx phase = std::polar(1.0, -8.0 * M_PI * params.scattering_length * rho * params.dt);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        CHECK(std::abs(g1.u[i] - phase * f.u[i]) < 1e-13);
        CHECK(std::abs(g1.v[i] - phase * f.v[i]) < 1e-13);
        CHECK(std::norm(g1.u[i]) == doctest::Approx(std::norm(f.u[i])).epsilon(1e-12));
    }
}

TEST_CASE("norm is conserved over ten thousand steps") {
    const Grid g = box1d(32);
    SpinorField f = gaussian_up(g);
    GPParams params;
    params.scattering_length = 0.02;
    params.potential = MatrixPotential::harmonic(1.0, 1.0);
    params.dt = 1e-3;
    params.t_end = 10.0;
    Fft fft(g);
    for (int s = 0; s < 10000; ++s) f = strang_step(f, params, s * params.dt, &fft);
    CHECK(std::abs(spinor_norm2(f) - 1.0) < 1e-9);
}

TEST_CASE("energy drift is small for a static potential") {
    const Grid g = box1d();
    const SpinorField f = gaussian_up(g);
    GPParams params;
    params.scattering_length = 0.02;
    params.potential = MatrixPotential::harmonic(1.0, 1.0);
    params.dt = 1e-3;
    params.t_end = 10.0;
    const GPTrajectory traj = evolve(f, params, 500);
    double drift = 0.0;
    for (double e : traj.energies)
        drift = std::max(drift, std::abs(e - traj.energies.front()) /
                                    std::abs(traj.energies.front()));
    CHECK(drift < 1e-6);
}

TEST_CASE("step halving shows second-order convergence") {
    const Grid g = box1d();
    const SpinorField f0 = gaussian_up(g);
    const double T = 0.5;
    auto run = [&](double dt) {
        GPParams params;
        params.scattering_length = 0.05;
        params.potential = MatrixPotential::harmonic(1.0, 0.8);
        params.dt = dt;
        params.t_end = T;
        const GPTrajectory traj = evolve(f0, params, 1 << 30);
        return traj.snapshots.back();
    };
    const double h = 2e-3;
    const double e1 = field_distance(run(h), run(h / 4.0));
    const double e2 = field_distance(run(h / 2.0), run(h / 8.0));
    const double ratio = e1 / e2;
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
}

TEST_CASE("two-photon rotation reference") {
    const Grid g = box1d(8, 4.0);
    const double vol = g.cell_volume() * static_cast<double>(g.total_points());
    std::vector<cplx> u0(g.total_points(), 1.0 / std::sqrt(vol));
    RabiParams rabi;
    rabi.omega_rabi = 1.0;
    rabi.omega_drive = 1.0;
    rabi.v_hf_const = 0.5;

    SUBCASE("t = 0 reproduces the initial data") {
        const SpinorField f = rabi_reference(u0, g, rabi, 0.0);
        for (std::size_t i = 0; i < u0.size(); ++i) {
            CHECK(std::abs(f.u[i] - u0[i]) < 1e-15);
            CHECK(std::abs(f.v[i]) < 1e-15);
        }
    }
    SUBCASE("quarter and eighth period populations") {
        const auto p1 = populations(rabi_reference(u0, g, rabi, M_PI / 2.0));
        CHECK(std::abs(p1.first) < 1e-14);
        CHECK(std::abs(p1.second - 1.0) < 1e-14);
        const auto p2 = populations(rabi_reference(u0, g, rabi, M_PI / 4.0));
        CHECK(std::abs(p2.first - 0.5) < 1e-14);
        CHECK(std::abs(p2.second - 0.5) < 1e-14);
    }
    SUBCASE("off resonance is rejected") {
        RabiParams off = rabi;
        off.v_hf_const = 0.7;
        CHECK_THROWS(rabi_reference(u0, g, off, 0.1));
    }
}

TEST_CASE("simulated resonant drive matches the closed form") {
    const Grid g = box1d(8, 4.0);
    SpinorField f = uniform_up(g);
    const std::vector<cplx> u0 = f.u;
    RabiParams rabi;
    rabi.omega_rabi = 1.0;
    rabi.omega_drive = 1.0;
    rabi.v_hf_const = 0.5;
    GPParams params;
    params.potential = MatrixPotential::rabi_drive(1.0, 1.0);
    params.dt = 5e-5;
    params.t_end = 0.5;
    Fft fft(g);
    const long steps = std::lround(params.t_end / params.dt);
    for (long s = 0; s < steps; ++s) f = strang_step(f, params, s * params.dt, &fft);
    const SpinorField ref = rabi_reference(u0, g, rabi, params.t_end);
    CHECK(field_distance(f, ref) < 1e-8);
}

TEST_CASE("constant trap offset is a pure gauge") {
    const Grid g = box1d();
    const SpinorField f0 = gaussian_up(g);
    const double c = 0.8, T = 0.2, dt = 1e-3;
    GPParams base;
    base.scattering_length = 0.05;
    base.potential = MatrixPotential::harmonic(1.0, 1.0);
    base.dt = dt;
    base.t_end = T;
    GPParams shifted = base;
    shifted.potential = MatrixPotential::harmonic(1.0, 1.0);
    shifted.potential.trap_up = [c](const std::array<double, 3>& x, double t) {
        return 0.25 * x[0] * x[0] + c;
    };
    shifted.potential.trap_down = shifted.potential.trap_up;

    const SpinorField a = evolve(f0, base, 1 << 30).snapshots.back();
    const SpinorField b = evolve(f0, shifted, 1 << 30).snapshots.back();
    const cplx gauge = std::polar(1.0, -c * T);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        CHECK(std::abs(b.u[i] - gauge * a.u[i]) < 1e-10);
        CHECK(std::abs(std::norm(b.u[i]) - std::norm(a.u[i])) < 1e-12);
    }
}

TEST_CASE("populations decouple without spin coupling") {
    const Grid g = box1d();
    SpinorField f(g);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        const double x = g.coord(static_cast<int>(i), 0);
        f.u[i] = std::exp(-0.5 * x * x);
        f.v[i] = 0.5 * std::exp(-0.4 * x * x) * std::polar(1.0, 0.3 * x);
    }
    normalize(f);
    const auto before = populations(f);
    GPParams params;
    params.scattering_length = 0.05;
    params.potential = MatrixPotential::harmonic(1.0, 0.7);
    params.dt = 1e-3;
    params.t_end = 1.0;
    const auto after = populations(evolve(f, params, 1 << 30).snapshots.back());
    CHECK(std::abs(after.first - before.first) < 1e-10);
    CHECK(std::abs(after.second - before.second) < 1e-10);
}

TEST_CASE("binary snapshot round trip") {
    const Grid g(1, 16, {5.0, 1.0, 1.0});
    SpinorField f(g);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        f.u[i] = cplx(gauss(rng), gauss(rng));
        f.v[i] = cplx(gauss(rng), gauss(rng));
    }
    const std::string path = "snapshot_roundtrip.spgp";
    write_snapshot(f, 1.25, path);
    double t = 0.0;
    const SpinorField r = read_snapshot(path, &t);
    CHECK(t == doctest::Approx(1.25));
    CHECK(r.grid.points_per_axis == 16);
    CHECK(r.grid.box_length[0] == doctest::Approx(5.0));
    for (std::size_t i = 0; i < g.total_points(); ++i) {
        CHECK(f.u[i] == r.u[i]);
        CHECK(f.v[i] == r.v[i]);
    }
    std::remove(path.c_str());
}
