#pragma once

#include <vector>

#include "spingp/grid.hpp"

namespace spingp {

/// Condensate over three internal levels (up, down, imaging level m); the
/// orbitals live on any common index set (grid nodes or lattice modes) with
/// a shared quadrature weight per point.
struct ThreeLevelSpinor {
    std::vector<cplx> u, v, w;
    double cell_weight = 1.0;

    void check_shape() const;
    double norm2() const;  // weighted ||u||^2 + ||v||^2 + ||w||^2
};

/// Pumping: coherently transfers both condensate levels into the down level,
/// (u, v, w) -> (0, u + v, w).
ThreeLevelSpinor pump(const ThreeLevelSpinor& s);

/// Blowing: expels the down-level population, (u, v, w) -> (u, 0, w).
ThreeLevelSpinor blow(const ThreeLevelSpinor& s);

/// Probing: transfers the down level onto the imaging level,
/// (u, v, w) -> (u, 0, v + w).
ThreeLevelSpinor probe(const ThreeLevelSpinor& s);

/// Projects onto the imaging level and returns the spatial density |w|^2.
std::vector<double> select_and_image(const ThreeLevelSpinor& s);

}  // namespace spingp
