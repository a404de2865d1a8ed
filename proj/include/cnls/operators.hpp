#ifndef CNLS_OPERATORS_HPP_
#define CNLS_OPERATORS_HPP_

#include "cnls/field.hpp"
#include "cnls/params.hpp"

namespace cnls {

/**
 * Componentwise Laplacian.
 *
 * Cartesian grids use the spectral multiplier -|k|^2 (exact for resolved
 * modes).  Radial grids use the conservative second-order stencil of
 * (1/r^(N-1)) d/dr (r^(N-1) d/dr), with zero flux through r = 0 (regularity)
 * and a homogeneous Dirichlet ghost value beyond r = R.  The radial stencil
 * is exactly self-adjoint with respect to the grid quadrature weights.
 */
BoxField laplacian(const BoxField& u);
RadialField laplacian(const RadialField& u);

/// Tridiagonal coefficients of the radial Laplacian: (Lap psi)_i =
/// lower[i] psi_{i-1} + diag[i] psi_i + upper[i] psi_{i+1}.
struct RadialLaplacianStencil {
  ArrayXr lower, diag, upper;
};
RadialLaplacianStencil radial_laplacian_stencil(const RadialGrid& grid);

/// Per-component squared L2 norms and squared gradient norms.
struct InnerProducts {
  ArrayXr mass;  ///< ||u_j||^2
  ArrayXr grad;  ///< ||grad u_j||^2
};

InnerProducts inner_products(const BoxField& u);
InnerProducts inner_products(const RadialField& u);

/// Radial derivative by central differences; d/dr = 0 at r = 0.
ArrayXc radial_derivative(const RadialGrid& grid, const ArrayXc& psi);

/// Grid quadrature of a real sample array.
Real integrate(const CartesianGrid& grid, const ArrayXr& values);
Real integrate(const RadialGrid& grid, const ArrayXr& values);

}  // namespace cnls

#endif  // CNLS_OPERATORS_HPP_
