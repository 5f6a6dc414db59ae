#pragma once

#include <complex>
#include <vector>

#include "spingp/grid.hpp"

namespace spingp {

/// In-place complex-to-complex FFT on a Grid-shaped array (row-major, axis 0
/// fastest). Backward transform includes the 1/n^dim normalisation so
/// backward(forward(x)) == x.
class Fft {
public:
    explicit Fft(const Grid& g);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<cplx>& data) const;
    void backward(std::vector<cplx>& data) const;

private:
    struct Impl;
    Impl* impl_;
};

}  // namespace spingp
