#include "spingp/effective.hpp"

#include <cmath>
#include <stdexcept>

namespace spingp {

namespace {

double effective_coupling(const LatticeModel& m, int n_particles) {
    return m.pair_coupling(n_particles) * (n_particles - 1);
}

Eigen::VectorXd site_density(const LatticeOrbital& phi) {
    Eigen::VectorXd rho(phi.sites);
    for (int s = 0; s < phi.sites; ++s)
        rho[s] = std::norm(phi.amps[2 * s]) + std::norm(phi.amps[2 * s + 1]);
    return rho;
}

Eigen::VectorXd hartree_potential(const LatticeModel& m, const Eigen::VectorXd& rho) {
    Eigen::VectorXd h(m.sites);
    for (int i = 0; i < m.sites; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.sites; ++j) s += m.pair_potential(m.separation(i, j)) * rho[j];
        h[i] = s;
    }
    return h;
}

Eigen::VectorXcd rhs(const LatticeModel& m, double lambda, double t,
                     const Eigen::VectorXcd& amps) {
    LatticeOrbital tmp;
    tmp.sites = m.sites;
    tmp.amps = amps;
    const Eigen::VectorXd h = hartree_potential(m, site_density(tmp));
    Eigen::VectorXcd y = onebody_matrix(m, t) * amps;
    for (int s = 0; s < m.sites; ++s) {
        y[2 * s] += lambda * h[s] * amps[2 * s];
        y[2 * s + 1] += lambda * h[s] * amps[2 * s + 1];
    }
    return cplx(0.0, -1.0) * y;
}

}  // namespace

double lattice_gp_energy(const LatticeOrbital& phi, const LatticeModel& m,
                         int n_particles, double t) {
    if (phi.sites != m.sites)
        throw std::invalid_argument("lattice_gp_energy: orbital/model size mismatch");
    if (std::abs(phi.norm2() - 1.0) > 1e-9)
        throw std::invalid_argument("lattice_gp_energy: orbital must be normalized");
    const double lambda = effective_coupling(m, n_particles);
    const Eigen::VectorXd rho = site_density(phi);
    const Eigen::VectorXd h = hartree_potential(m, rho);
    const double onebody = (phi.amps.adjoint() * onebody_matrix(m, t) * phi.amps)(0, 0).real();
    return onebody + 0.5 * lambda * rho.dot(h);
}

LatticeOrbital evolve_effective(const LatticeOrbital& phi0, const LatticeModel& m,
                                int n_particles, double t0, double t1, double dt) {
    if (phi0.sites != m.sites)
        throw std::invalid_argument("evolve_effective: orbital/model size mismatch");
    if (!(dt > 0.0) || !(t1 > t0))
        throw std::invalid_argument("evolve_effective: need t1 > t0 and dt > 0");
    const long n_steps = std::lround((t1 - t0) / dt);
    if (n_steps < 1 || std::abs(n_steps * dt - (t1 - t0)) > 1e-9 * std::max(1.0, t1 - t0))
        throw std::invalid_argument("evolve_effective: (t1 - t0) must be a multiple of dt");
    const double lambda = effective_coupling(m, n_particles);

    LatticeOrbital phi = phi0;
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + s * dt;
        const Eigen::VectorXcd k1 = rhs(m, lambda, t, phi.amps);
        const Eigen::VectorXcd k2 = rhs(m, lambda, t + 0.5 * dt, phi.amps + 0.5 * dt * k1);
        const Eigen::VectorXcd k3 = rhs(m, lambda, t + 0.5 * dt, phi.amps + 0.5 * dt * k2);
        const Eigen::VectorXcd k4 = rhs(m, lambda, t + dt, phi.amps + dt * k3);
        phi.amps += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

}  // namespace spingp
