#include "cnls/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace cnls {

namespace {
struct Bump {
  Real amp;
  Real phase;
  std::array<Real, 4> center;
  std::array<Real, 4> mod;
  Real width;
};
}  // namespace

BoxField sample_bumps(const CartesianGrid& grid, int m,
                      const std::vector<std::vector<Bump>>& bumps) {
  return sample_box(grid, m, [&](int j, const Real* x) {
    Complex acc(0, 0);
    for (const Bump& b : bumps[j]) {
      Real q = 0, kx = 0;
      for (int a = 0; a < grid.dim; ++a) {
        const Real d = x[a] - b.center[a];
        q += d * d;
        kx += b.mod[a] * x[a];
      }
      acc += b.amp * std::exp(Complex(0, b.phase + kx)) *
             std::exp(-q / (2 * b.width * b.width));
    }
    return acc;
  });
}

BoxField FieldEnsemble::next(const CartesianGrid& grid, int m) {
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  std::vector<std::vector<Bump>> bumps(m);
  for (int j = 0; j < m; ++j)
    for (int b = 0; b < opts_.bumps; ++b) {
      Bump bump{};
      bump.amp = 0.2 + (opts_.max_amplitude - 0.2) * unit(rng_);
      bump.phase = 2 * std::numbers::pi * unit(rng_);
      bump.width = opts_.min_width + (opts_.max_width - opts_.min_width) * unit(rng_);
      for (int a = 0; a < grid.dim; ++a) {
        bump.center[a] = opts_.max_center * (2 * unit(rng_) - 1);
        bump.mod[a] = opts_.max_mod_wavenumber * (2 * unit(rng_) - 1);
      }
      bumps[j].push_back(bump);
    }
  return sample_bumps(grid, m, bumps);
}

RadialField FieldEnsemble::next(const RadialGrid& grid, int m) {
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  RadialField u(grid, m);
  for (int j = 0; j < m; ++j) {
    for (int b = 0; b < opts_.bumps; ++b) {
      const Real amp = 0.2 + (opts_.max_amplitude - 0.2) * unit(rng_);
      const Real phase = 2 * std::numbers::pi * unit(rng_);
      const Real center = opts_.max_center * unit(rng_);
      const Real width =
          opts_.min_width + (opts_.max_width - opts_.min_width) * unit(rng_);
      const Complex rot = std::exp(Complex(0, phase));
      for (Eigen::Index i = 0; i < grid.n_r; ++i) {
        const Real d = grid.r[i] - center;
        // even reflection keeps radial regularity at the origin
        const Real dm = grid.r[i] + center;
        u.comps[j][i] += amp * rot *
                         (std::exp(-d * d / (2 * width * width)) +
                          std::exp(-dm * dm / (2 * width * width)));
      }
    }
  }
  return u;
}

}  // namespace cnls
