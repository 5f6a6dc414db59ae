#pragma once

#include "spingp/lattice.hpp"

namespace spingp {

/// Per-particle Hartree energy of a normalized lattice spinor:
/// <phi, K(t) phi> + (lambda/2) sum_{i,j} V(sep(i,j)) rho_i rho_j with
/// rho_i the site density and lambda = pair_coupling(N) * (N - 1) (so 1 in
/// mean-field scaling). Matches energy_per_particle on product states
/// exactly.
double lattice_gp_energy(const LatticeOrbital& phi, const LatticeModel& m,
                         int n_particles, double t);

/// Effective one-body (Hartree) evolution on the ring:
/// i d/dt phi = K(t) phi + lambda (V * rho) phi, integrated with classic RK4
/// in steps of dt; the drive is sampled inside the stages, so the scheme is
/// fourth order for time-dependent S.
LatticeOrbital evolve_effective(const LatticeOrbital& phi0, const LatticeModel& m,
                                int n_particles, double t0, double t1, double dt);

}  // namespace spingp
