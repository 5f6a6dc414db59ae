#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "spingp/grid.hpp"

namespace spingp {

using Mat2 = Eigen::Matrix2cd;
using SpaceTimeFn = std::function<double(const std::array<double, 3>&, double)>;

/// The five real component fields of the 2x2 matrix potential
///   S(x,t) = [[trap_up - v_hf,  b1 - i b2],
///             [b1 + i b2,       trap_down + v_hf]].
struct MatrixPotential {
    SpaceTimeFn trap_up;
    SpaceTimeFn trap_down;
    SpaceTimeFn b1;
    SpaceTimeFn b2;
    SpaceTimeFn v_hf;

    static MatrixPotential zero();
    /// Resonant plane-rotating Rabi drive: b1 = W cos(wt), b2 = -W sin(wt),
    /// v_hf = w/2, traps zero. Off-diagonal of S is W e^{i w t}.
    static MatrixPotential rabi_drive(double omega_rabi, double omega_drive);
    /// Harmonic traps (possibly different per component) on top of a drive.
    static MatrixPotential harmonic(double omega_trap_up, double omega_trap_down);
};

struct RabiParams {
    double omega_rabi = 0.0;   // W
    double omega_drive = 0.0;  // w
    double v_hf_const = 0.0;

    bool on_resonance() const;  // v_hf == w/2 within 1e-12
};

/// Evaluates S(x,t). Throws if any component evaluates non-finite.
Mat2 assemble_S(const MatrixPotential& p, const std::array<double, 3>& x, double t);

/// Closed-form exp(-i M dt) for Hermitian M via the Pauli decomposition
/// M = c0 I + c.sigma. Throws if M deviates from Hermitian beyond 1e-12.
Mat2 matexp_2x2(const Mat2& M, double dt);

}  // namespace spingp
