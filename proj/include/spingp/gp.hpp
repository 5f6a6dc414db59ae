#pragma once

#include <string>
#include <vector>

#include "spingp/fft.hpp"
#include "spingp/grid.hpp"
#include "spingp/potential.hpp"

namespace spingp {

struct GPParams {
    double scattering_length = 0.0;  // a >= 0
    MatrixPotential potential;
    double dt = 1e-3;
    double t_end = 1.0;

    void validate(const Grid& g) const;  // dt <= t_end, dt * max|S| <= 0.5
};

struct GPTrajectory {
    std::vector<double> times;
    std::vector<SpinorField> snapshots;
    std::vector<double> energies;
    std::vector<std::pair<double, double>> populations;  // (||u||^2, ||v||^2)
};

/// Two-component Gross-Pitaevskii energy: spectral kinetic term, quartic
/// interaction 4 pi a (|u|^4 + 2|u|^2|v|^2 + |v|^4), and <f, S(t) f>.
double gp_energy(const SpinorField& f, double a, const MatrixPotential& p, double t);

/// One Strang step: potential+nonlinearity half step (2x2 matrix exponential
/// with S sampled at t + dt/2), full kinetic step in Fourier space, second
/// potential half step. Norm-preserving per point.
SpinorField strang_step(const SpinorField& f, const GPParams& params, double t,
                        const Fft* fft = nullptr);

GPTrajectory evolve(const SpinorField& f0, const GPParams& params, int record_every);

/// Exact resonant two-photon rotation of a pure-u initial orbital:
/// (e^{i w t / 2} u0 cos(W t), -i e^{-i w t / 2} u0 sin(W t)).
/// Throws if the drive is off resonance.
SpinorField rabi_reference(const std::vector<cplx>& u0, const Grid& g,
                           const RabiParams& rabi, double t);

std::pair<double, double> populations(const SpinorField& f);

/// CSV export with columns t,E,pop_up,pop_down.
void write_trajectory_csv(const GPTrajectory& traj, const std::string& path);

/// Binary snapshot dump, little-endian: magic "SPGP", u32 version, u32 dim,
/// u32 points_per_axis, f64 box_length[3], f64 time, then for every grid
/// point (axis 0 fastest) the four doubles Re u, Im u, Re v, Im v.
void write_snapshot(const SpinorField& f, double t, const std::string& path);
SpinorField read_snapshot(const std::string& path, double* t_out = nullptr);

}  // namespace spingp
