#ifndef CNLS_INTERP_HPP_
#define CNLS_INTERP_HPP_

#include "cnls/grid.hpp"
#include "cnls/types.hpp"

namespace cnls {

/**
 * Monotonicity-limited cubic Hermite interpolant (Fritsch-Carlson slopes)
 * on a uniform knot sequence.  Queries past the last knot return zero;
 * queries left of the first knot reflect evenly (radial regularity).
 */
class MonotoneCubic {
 public:
  MonotoneCubic(ArrayXr x, ArrayXr y);

  Real operator()(Real x) const;

 private:
  ArrayXr x_, y_, slope_;
};

/// Interpolates a complex radial profile (real and imaginary parts separately).
class RadialInterpolant {
 public:
  RadialInterpolant(const RadialGrid& grid, const ArrayXc& values);

  Complex operator()(Real r) const;

 private:
  MonotoneCubic re_, im_;
};

/**
 * Separable Catmull-Rom cubic interpolation of a flattened row-major
 * Cartesian field; points outside the box evaluate to zero.
 */
class BoxInterpolant {
 public:
  BoxInterpolant(const CartesianGrid& grid, const ArrayXc& values);

  Complex operator()(const Real* x) const;

 private:
  CartesianGrid grid_;
  const ArrayXc& values_;
};

}  // namespace cnls

#endif  // CNLS_INTERP_HPP_
