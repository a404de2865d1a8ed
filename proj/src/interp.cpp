#include "cnls/interp.hpp"

#include <algorithm>
#include <cmath>

namespace cnls {

MonotoneCubic::MonotoneCubic(ArrayXr x, ArrayXr y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  ArrayXr d(n - 1);  // secant slopes
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  slope_.resize(n);
  slope_[0] = d[0];
  slope_[n - 1] = d[n - 2];
  for (Eigen::Index i = 1; i + 1 < n; ++i) slope_[i] = 0.5 * (d[i - 1] + d[i]);
  // Fritsch-Carlson limiter keeps the interpolant free of overshoot on
  // monotone data while staying third-order accurate on smooth data.
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      slope_[i] = 0.0;
      slope_[i + 1] = 0.0;
      continue;
    }
    const Real a = slope_[i] / d[i];
    const Real b = slope_[i + 1] / d[i];
    const Real s = a * a + b * b;
    if (s > 9.0) {
      const Real t = 3.0 / std::sqrt(s);
      slope_[i] = t * a * d[i];
      slope_[i + 1] = t * b * d[i];
    }
  }
}

Real MonotoneCubic::operator()(Real x) const {
  const Eigen::Index n = x_.size();
  if (x > x_[n - 1]) return 0.0;
  if (x < x_[0]) x = 2.0 * x_[0] - x;  // even reflection about the origin
  if (x > x_[n - 1]) return 0.0;
  const Real h = x_[1] - x_[0];
  Eigen::Index i = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>((x - x_[0]) / h), 0, n - 2);
  const Real t = (x - x_[i]) / (x_[i + 1] - x_[i]);
  const Real t2 = t * t, t3 = t2 * t;
  const Real h00 = 2 * t3 - 3 * t2 + 1;
  const Real h10 = t3 - 2 * t2 + t;
  const Real h01 = -2 * t3 + 3 * t2;
  const Real h11 = t3 - t2;
  const Real dx = x_[i + 1] - x_[i];
  return h00 * y_[i] + h10 * dx * slope_[i] + h01 * y_[i + 1] +
         h11 * dx * slope_[i + 1];
}

RadialInterpolant::RadialInterpolant(const RadialGrid& grid, const ArrayXc& values)
    : re_(grid.r, values.real()), im_(grid.r, values.imag()) {}

Complex RadialInterpolant::operator()(Real r) const {
  return Complex(re_(r), im_(r));
}

BoxInterpolant::BoxInterpolant(const CartesianGrid& grid, const ArrayXc& values)
    : grid_(grid), values_(values) {}

namespace {
inline void catmull_rom_weights(Real t, Real* w) {
  const Real t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}
}  // namespace

Complex BoxInterpolant::operator()(const Real* x) const {
  const int dim = grid_.dim;
  const int n = grid_.n;
  const Real h = grid_.spacing();
  int base[4];
  Real wts[4][4];
  for (int a = 0; a < dim; ++a) {
    const Real s = (x[a] + grid_.half_extent) / h;
    const Real fl = std::floor(s);
    base[a] = static_cast<int>(fl) - 1;
    catmull_rom_weights(s - fl, wts[a]);
  }
  // Accumulate the 4^dim tensor-product stencil; out-of-box taps are zero.
  Complex acc(0, 0);
  int taps = 1;
  for (int a = 0; a < dim; ++a) taps *= 4;
  for (int tap = 0; tap < taps; ++tap) {
    int rest = tap;
    Real w = 1.0;
    Eigen::Index idx = 0;
    bool inside = true;
    for (int a = 0; a < dim; ++a) {
      const int off = rest % 4;
      rest /= 4;
      const int node = base[a] + off;
      if (node < 0 || node >= n) {
        inside = false;
        break;
      }
      w *= wts[a][off];
      idx = idx * n + node;
    }
    if (inside) acc += w * values_[idx];
  }
  return acc;
}

}  // namespace cnls
