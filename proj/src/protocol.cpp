#include "spingp/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace spingp {

void ThreeLevelSpinor::check_shape() const {
    if (u.size() != v.size() || u.size() != w.size())
        throw std::invalid_argument("ThreeLevelSpinor: level sizes differ");
    if (!(cell_weight > 0.0))
        throw std::invalid_argument("ThreeLevelSpinor: cell weight must be positive");
    for (const auto& lvl : {&u, &v, &w})
        for (const auto& c : *lvl)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::invalid_argument("ThreeLevelSpinor: non-finite amplitude");
}

double ThreeLevelSpinor::norm2() const {
    double s = 0.0;
    for (const auto& c : u) s += std::norm(c);
    for (const auto& c : v) s += std::norm(c);
    for (const auto& c : w) s += std::norm(c);
    return s * cell_weight;
}

ThreeLevelSpinor pump(const ThreeLevelSpinor& s) {
    s.check_shape();
    ThreeLevelSpinor out = s;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        out.v[i] = s.u[i] + s.v[i];
        out.u[i] = cplx(0.0);
    }
    return out;
}

ThreeLevelSpinor blow(const ThreeLevelSpinor& s) {
    s.check_shape();
    ThreeLevelSpinor out = s;
    for (auto& c : out.v) c = cplx(0.0);
    return out;
}

ThreeLevelSpinor probe(const ThreeLevelSpinor& s) {
    s.check_shape();
    ThreeLevelSpinor out = s;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        out.w[i] = s.v[i] + s.w[i];
        out.v[i] = cplx(0.0);
    }
    return out;
}

std::vector<double> select_and_image(const ThreeLevelSpinor& s) {
    s.check_shape();
    std::vector<double> density(s.w.size());
    for (std::size_t i = 0; i < s.w.size(); ++i) density[i] = std::norm(s.w[i]);
    return density;
}

}  // namespace spingp
