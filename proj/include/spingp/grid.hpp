#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spingp {

using cplx = std::complex<double>;

/// Uniform periodic box in 1, 2, or 3 dimensions. Points per axis must be a
/// power of two so the spectral kernels can use radix-2 transforms.
struct Grid {
    int dim = 1;
    int points_per_axis = 64;
    std::array<double, 3> box_length{1.0, 1.0, 1.0};

    Grid() = default;
    Grid(int dim_, int points_, std::array<double, 3> box);

    std::size_t total_points() const;
    double cell_volume() const;

    /// Coordinate of grid node `i` along `axis`, centred box [-L/2, L/2).
    double coord(int i, int axis) const;
    /// Full position of a flat index (row-major, axis 0 fastest).
    std::array<double, 3> position(std::size_t flat) const;
    /// Angular wavenumber of Fourier index `i` along `axis` (negative wrap).
    double wavenumber(int i, int axis) const;
};

/// Two-component condensate order parameter sampled on a Grid.
struct SpinorField {
    Grid grid;
    std::vector<cplx> u;
    std::vector<cplx> v;

    SpinorField() = default;
    explicit SpinorField(const Grid& g)
        : grid(g), u(g.total_points(), cplx(0)), v(g.total_points(), cplx(0)) {}

    void check_shape() const;
};

/// Cell-volume weighted ||u||^2 + ||v||^2.
double spinor_norm2(const SpinorField& f);

/// Cell-volume weighted inner product <f, g>.
cplx spinor_inner(const SpinorField& f, const SpinorField& g);

/// Scales the field so spinor_norm2 == 1. Throws on a zero field.
void normalize(SpinorField& f);

}  // namespace spingp
