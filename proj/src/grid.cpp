#include "cnls/grid.hpp"

#include <cmath>
#include <numbers>

#include "cnls/errors.hpp"

namespace cnls {

Real unit_sphere_area(int dim) {
  // omega_N = 2 pi^(N/2) / Gamma(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

Real ball_volume(int dim, Real radius) {
  return unit_sphere_area(dim) * std::pow(radius, dim) / dim;
}

ArrayXr CartesianGrid::axis_coords() const {
  const Real h = spacing();
  ArrayXr x(n);
  for (int i = 0; i < n; ++i) x[i] = -half_extent + i * h;
  return x;
}

ArrayXr CartesianGrid::axis_wavenumbers() const {
  const Real base = std::numbers::pi / half_extent;
  ArrayXr k(n);
  for (int i = 0; i < n; ++i) {
    const int freq = i <= n / 2 ? i : i - n;
    k[i] = base * freq;
  }
  return k;
}

ArrayXr CartesianGrid::squared_wavenumbers() const {
  const ArrayXr k = axis_wavenumbers();
  const Eigen::Index total = size();
  ArrayXr k2 = ArrayXr::Zero(total);
  Eigen::Index stride = total;
  for (int a = 0; a < dim; ++a) {
    stride /= n;
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      const int f = static_cast<int>((idx / stride) % n);
      k2[idx] += k[f] * k[f];
    }
  }
  return k2;
}

ArrayXr CartesianGrid::squared_radii() const {
  const ArrayXr x = axis_coords();
  const Eigen::Index total = size();
  ArrayXr r2 = ArrayXr::Zero(total);
  Eigen::Index stride = total;
  for (int a = 0; a < dim; ++a) {
    stride /= n;
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      const int f = static_cast<int>((idx / stride) % n);
      r2[idx] += x[f] * x[f];
    }
  }
  return r2;
}

void CartesianGrid::node_coords(Eigen::Index idx, Real* x) const {
  const Real h = spacing();
  for (int a = dim - 1; a >= 0; --a) {
    x[a] = -half_extent + static_cast<Real>(idx % n) * h;
    idx /= n;
  }
}

RadialGrid RadialGrid::make(int dim, Eigen::Index n_r, Real radius) {
  if (dim < 2) throw UnsupportedDimension("radial grid requires N >= 2");
  if (n_r < 8) throw ConfigError("radial grid requires at least 8 nodes");
  if (!(radius > 0)) throw ConfigError("radial grid requires R > 0");

  RadialGrid g;
  g.dim = dim;
  g.n_r = n_r;
  g.radius = radius;
  const Real h = g.spacing();
  g.r.resize(n_r);
  g.w.resize(n_r);
  const Real area = unit_sphere_area(dim);
  for (Eigen::Index i = 0; i < n_r; ++i) g.r[i] = i * h;
  g.r[n_r - 1] = radius;
  // Cell-integrated weights: w_i = omega_N (s_+^N - s_-^N)/N over the cell
  // [r_i - h/2, r_i + h/2] clipped to [0, R].  They sum to the exact ball
  // volume and are all positive.
  for (Eigen::Index i = 0; i < n_r; ++i) {
    const Real lo = i == 0 ? 0.0 : g.r[i] - 0.5 * h;
    const Real hi = i == n_r - 1 ? radius : g.r[i] + 0.5 * h;
    g.w[i] = area * (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  }
  return g;
}

}  // namespace cnls
