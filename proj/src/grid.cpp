#include "spingp/grid.hpp"

#include <cmath>

namespace spingp {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int dim_, int points_, std::array<double, 3> box)
    : dim(dim_), points_per_axis(points_), box_length(box) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("Grid: dim must be 1, 2, or 3");
    if (!is_power_of_two(points_per_axis))
        throw std::invalid_argument("Grid: points_per_axis must be a power of two");
    for (int a = 0; a < dim; ++a)
        if (!(box_length[a] > 0.0))
            throw std::invalid_argument("Grid: box_length must be positive");
}

std::size_t Grid::total_points() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
    return n;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= box_length[a] / points_per_axis;
    return v;
}

double Grid::coord(int i, int axis) const {
    const double L = box_length[axis];
    return -0.5 * L + L * static_cast<double>(i) / points_per_axis;
}

std::array<double, 3> Grid::position(std::size_t flat) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t rem = flat;
    for (int a = 0; a < dim; ++a) {
        int i = static_cast<int>(rem % points_per_axis);
        rem /= points_per_axis;
        x[a] = coord(i, a);
    }
    return x;
}

double Grid::wavenumber(int i, int axis) const {
    const int n = points_per_axis;
    // frequencies 0..n/2-1 positive, n/2..n-1 wrap negative (Nyquist -> -n/2)
    const int f = (i < n / 2) ? i : i - n;
    return 2.0 * M_PI * f / box_length[axis];
}

void SpinorField::check_shape() const {
    const std::size_t n = grid.total_points();
    if (u.size() != n || v.size() != n)
        throw std::invalid_argument("SpinorField: component shape does not match grid");
}

double spinor_norm2(const SpinorField& f) {
    f.check_shape();
    double s = 0.0;
    for (std::size_t i = 0; i < f.u.size(); ++i)
        s += std::norm(f.u[i]) + std::norm(f.v[i]);
    return s * f.grid.cell_volume();
}

cplx spinor_inner(const SpinorField& f, const SpinorField& g) {
    f.check_shape();
    g.check_shape();
    if (f.u.size() != g.u.size())
        throw std::invalid_argument("spinor_inner: grids differ");
    cplx s(0);
    for (std::size_t i = 0; i < f.u.size(); ++i)
        s += std::conj(f.u[i]) * g.u[i] + std::conj(f.v[i]) * g.v[i];
    return s * f.grid.cell_volume();
}

void normalize(SpinorField& f) {
    const double n2 = spinor_norm2(f);
    if (!(n2 > 0.0)) throw std::invalid_argument("normalize: zero field");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : f.u) c *= s;
    for (auto& c : f.v) c *= s;
}

}  // namespace spingp
