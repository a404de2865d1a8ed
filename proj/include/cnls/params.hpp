#ifndef CNLS_PARAMS_HPP_
#define CNLS_PARAMS_HPP_

#include <limits>

#include "cnls/types.hpp"

namespace cnls {

/**
 * Parameters of the m-component coupled focusing Schrodinger system
 *
 *   i du_j/dt + Lap u_j = - sum_k a_jk |u_k|^p |u_j|^(p-2) u_j,   j = 1..m,
 *
 * on R^N.  The coupling matrix a_jk is symmetric with positive entries and
 * the nonlinearity exponent p lies in the intercritical window
 * (1 + 2/N, N/(N-2)), the upper bound being +inf in dimension two.
 */
struct SystemParams {
  int dim = 2;          ///< spatial dimension N
  Real p = 2.5;         ///< nonlinearity exponent
  int m = 1;            ///< number of components
  MatrixXr coupling;    ///< m x m symmetric matrix a_jk

  /// Mass-critical exponent 1 + 2/N.
  Real p_lower() const { return 1.0 + 2.0 / dim; }

  /// Energy-critical exponent N/(N-2), infinite for N = 2.
  Real p_upper() const {
    return dim > 2 ? static_cast<Real>(dim) / (dim - 2)
                   : std::numeric_limits<Real>::infinity();
  }
};

/**
 * Validates a candidate parameter set and returns it.
 *
 * Throws UnsupportedDimension, NonSymmetricCoupling, NonPositiveCoupling or
 * ExponentOutOfRange (the message reports the admissible window).
 */
SystemParams validate_params(int dim, Real p, int m, const MatrixXr& coupling);

/// Convenience overload.
SystemParams validate_params(const SystemParams& raw);

/// Throws UnsupportedDimension unless 2 <= N <= 4 (time-dependent runs only).
void require_dynamics_dimension(const SystemParams& params);

}  // namespace cnls

#endif  // CNLS_PARAMS_HPP_
