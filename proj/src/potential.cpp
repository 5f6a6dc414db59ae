#include "spingp/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spingp {

namespace {
SpaceTimeFn constant(double c) {
    return [c](const std::array<double, 3>&, double) { return c; };
}
}  // namespace

MatrixPotential MatrixPotential::zero() {
    MatrixPotential p;
    p.trap_up = p.trap_down = p.b1 = p.b2 = p.v_hf = constant(0.0);
    return p;
}

MatrixPotential MatrixPotential::rabi_drive(double omega_rabi, double omega_drive) {
    MatrixPotential p = zero();
    p.b1 = [omega_rabi, omega_drive](const std::array<double, 3>&, double t) {
        return omega_rabi * std::cos(omega_drive * t);
    };
    p.b2 = [omega_rabi, omega_drive](const std::array<double, 3>&, double t) {
        return -omega_rabi * std::sin(omega_drive * t);
    };
    p.v_hf = constant(0.5 * omega_drive);
    return p;
}

MatrixPotential MatrixPotential::harmonic(double omega_up, double omega_down) {
    MatrixPotential p = zero();
    p.trap_up = [omega_up](const std::array<double, 3>& x, double) {
        return 0.25 * omega_up * omega_up * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    p.trap_down = [omega_down](const std::array<double, 3>& x, double) {
        return 0.25 * omega_down * omega_down * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    return p;
}

bool RabiParams::on_resonance() const {
    return std::abs(v_hf_const - 0.5 * omega_drive) <= 1e-12 * std::max(1.0, std::abs(omega_drive));
}

Mat2 assemble_S(const MatrixPotential& p, const std::array<double, 3>& x, double t) {
    const double tu = p.trap_up(x, t);
    const double td = p.trap_down(x, t);
    const double b1 = p.b1(x, t);
    const double b2 = p.b2(x, t);
    const double vh = p.v_hf(x, t);
    auto check = [](double val, const char* name) {
        if (!std::isfinite(val))
            throw std::runtime_error(std::string("assemble_S: non-finite value in field ") + name);
    };
    check(tu, "trap_up");
    check(td, "trap_down");
    check(b1, "b1");
    check(b2, "b2");
    check(vh, "v_hf");
    Mat2 S;
    S(0, 0) = tu - vh;
    S(0, 1) = cplx(b1, -b2);
    S(1, 0) = cplx(b1, b2);
    S(1, 1) = td + vh;
    return S;
}

Mat2 matexp_2x2(const Mat2& M, double dt) {
    const double herm = (M - M.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if (herm > 1e-12 * scale)
        throw std::invalid_argument("matexp_2x2: input is not Hermitian within tolerance");

    // M = c0 I + c.sigma with real c0, cx, cy, cz
    const double c0 = 0.5 * (M(0, 0).real() + M(1, 1).real());
    const double cz = 0.5 * (M(0, 0).real() - M(1, 1).real());
    const double cx = M(1, 0).real();
    const double cy = M(1, 0).imag();
    const double r = std::sqrt(cx * cx + cy * cy + cz * cz);

    const cplx phase = std::exp(cplx(0.0, -c0 * dt));
    Mat2 U;
    if (r == 0.0) {
        U = phase * Mat2::Identity();
        return U;
    }
    const double ca = std::cos(r * dt);
    const double sa = std::sin(r * dt) / r;  // sin(r dt)/r, finite as r -> 0
    const cplx mi(0.0, -1.0);
    U(0, 0) = phase * (ca + mi * sa * cz);
    U(0, 1) = phase * (mi * sa * cplx(cx, -cy));
    U(1, 0) = phase * (mi * sa * cplx(cx, cy));
    U(1, 1) = phase * (ca - mi * sa * cz);
    return U;
}

}  // namespace spingp
