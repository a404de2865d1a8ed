#ifndef CNLS_GRID_HPP_
#define CNLS_GRID_HPP_

#include <array>
#include <cstdint>

#include "cnls/types.hpp"

namespace cnls {

/**
 * Uniform periodic grid on the box [-L, L)^N, n points per axis.
 *
 * Nodes along one axis sit at x_i = -L + i h with h = 2L/n; the quadrature
 * weight of every node is h^N.  Wavenumbers follow the standard FFT
 * convention for a box of period 2L: index f maps to the integer frequency
 * f <= n/2 ? f : f - n and to the wavenumber k = pi * freq / L.
 */
struct CartesianGrid {
  int dim = 2;
  int n = 256;
  Real half_extent = 16.0;

  Real spacing() const { return 2.0 * half_extent / n; }

  Eigen::Index size() const {
    Eigen::Index total = 1;
    for (int a = 0; a < dim; ++a) total *= n;
    return total;
  }

  Real cell_volume() const {
    Real v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing();
    return v;
  }

  /// Node coordinates along one axis.
  ArrayXr axis_coords() const;

  /// Wavenumbers along one axis, FFT ordering.
  ArrayXr axis_wavenumbers() const;

  /// |k|^2 for every flattened node, row-major (last axis fastest).
  ArrayXr squared_wavenumbers() const;

  /// |x|^2 for every flattened node (box-centered coordinates).
  ArrayXr squared_radii() const;

  /// Coordinates of the flattened node `idx`, written into x[0..dim-1].
  void node_coords(Eigen::Index idx, Real* x) const;

  bool operator==(const CartesianGrid&) const = default;
};

/**
 * Uniform radial grid on [0, R] for N-dimensional radial functions.
 *
 * Nodes r_i = i h, h = R/(n_r - 1).  Quadrature weights integrate the
 * measure omega_N r^(N-1) dr exactly over each node cell
 * [r_i - h/2, r_i + h/2] (clipped to [0, R]), so integrating the constant 1
 * reproduces the volume of the ball of radius R to rounding accuracy and
 * every weight is positive.
 */
struct RadialGrid {
  int dim = 2;
  Eigen::Index n_r = 4096;
  Real radius = 16.0;
  ArrayXr r;  ///< node radii, strictly increasing, r.back() == R
  ArrayXr w;  ///< positive quadrature weights

  static RadialGrid make(int dim, Eigen::Index n_r, Real radius);

  Real spacing() const { return radius / static_cast<Real>(n_r - 1); }
  Eigen::Index size() const { return n_r; }

  bool operator==(const RadialGrid& o) const {
    return dim == o.dim && n_r == o.n_r && radius == o.radius;
  }
};

/// Surface area of the unit sphere in R^N.
Real unit_sphere_area(int dim);

/// Volume of the ball of radius R in R^N.
Real ball_volume(int dim, Real radius);

}  // namespace cnls

#endif  // CNLS_GRID_HPP_
