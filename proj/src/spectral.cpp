#include "cnls/spectral.hpp"

namespace cnls {

SpectralTransform::SpectralTransform(const CartesianGrid& grid)
    : dim_(grid.dim), n_(grid.n), total_(grid.size()) {
  line_.resize(n_);
  spec_.resize(n_);
}

void SpectralTransform::transform_axis(ArrayXc& data, int axis, bool fwd) const {
  // Row-major layout: axis `a` has stride n^(dim-1-a).
  Eigen::Index stride = 1;
  for (int a = dim_ - 1; a > axis; --a) stride *= n_;
  const Eigen::Index block = stride * n_;

  for (Eigen::Index base = 0; base < total_; base += block) {
    for (Eigen::Index off = 0; off < stride; ++off) {
      Complex* p = data.data() + base + off;
      if (stride == 1) {
        Eigen::Map<Eigen::VectorXcd> line(p, n_);
        if (fwd)
          fft_.fwd(spec_, line);
        else
          fft_.inv(spec_, line);
        line = spec_;
      } else {
        for (int i = 0; i < n_; ++i) line_[i] = p[i * stride];
        if (fwd)
          fft_.fwd(spec_, line_);
        else
          fft_.inv(spec_, line_);
        for (int i = 0; i < n_; ++i) p[i * stride] = spec_[i];
      }
    }
  }
}

void SpectralTransform::forward(ArrayXc& data) const {
  for (int a = 0; a < dim_; ++a) transform_axis(data, a, true);
}

void SpectralTransform::inverse(ArrayXc& data) const {
  for (int a = 0; a < dim_; ++a) transform_axis(data, a, false);
}

}  // namespace cnls
