#include "spingp/fft.hpp"

#include <fftw3.h>

namespace spingp {

struct Fft::Impl {
    fftw_plan fwd;
    fftw_plan bwd;
    std::size_t n_total;
    std::vector<cplx> scratch;
};

Fft::Fft(const Grid& g) : impl_(new Impl) {
    impl_->n_total = g.total_points();
    impl_->scratch.resize(impl_->n_total);
    int dims[3];
    for (int a = 0; a < g.dim; ++a) dims[a] = g.points_per_axis;
    auto* buf = reinterpret_cast<fftw_complex*>(impl_->scratch.data());
    // all axes have equal length, so row-major vs column-major is immaterial
    impl_->fwd = fftw_plan_dft(g.dim, dims, buf, buf, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->bwd = fftw_plan_dft(g.dim, dims, buf, buf, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Fft::~Fft() {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    delete impl_;
}

void Fft::forward(std::vector<cplx>& data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(impl_->fwd, buf, buf);
}

void Fft::backward(std::vector<cplx>& data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(impl_->bwd, buf, buf);
    const double s = 1.0 / static_cast<double>(impl_->n_total);
    for (auto& c : data) c *= s;
}

}  // namespace spingp
