#ifndef CNLS_TEST_HELPERS_HPP_
#define CNLS_TEST_HELPERS_HPP_

#include <cmath>
#include <numbers>

#include "cnls/field.hpp"
#include "cnls/params.hpp"

namespace cnls::test {

inline Real rel_err(Real got, Real want) {
  const Real scale = std::max(std::abs(got), std::abs(want));
  return scale > 0 ? std::abs(got - want) / scale : 0.0;
}

/// Reference single-component parameters (N = 2, p = 2.5, a = 1).
inline SystemParams reference_params() {
  return validate_params(2, 2.5, 1, MatrixXr::Ones(1, 1));
}

/// e^(-|x|^2 / 2) sampled on a box; closed-form norms in 2d:
/// ||u||^2 = pi, ||grad u||^2 = pi, int |u|^(2p) = pi / p.
inline BoxField unit_gaussian(const CartesianGrid& grid, Real width = 1.0,
                              Real amplitude = 1.0) {
  return sample_box(grid, 1, [=](int, const Real* x) {
    Real q = 0;
    for (int a = 0; a < grid.dim; ++a) q += x[a] * x[a];
    return Complex(amplitude * std::exp(-q / (2 * width * width)), 0);
  });
}

inline RadialField unit_gaussian(const RadialGrid& grid, Real width = 1.0,
                                 Real amplitude = 1.0) {
  return sample_radial(grid, 1, [=](int, Real r) {
    return Complex(amplitude * std::exp(-r * r / (2 * width * width)), 0);
  });
}

inline constexpr Real kPi = std::numbers::pi;

}  // namespace cnls::test

#endif  // CNLS_TEST_HELPERS_HPP_
