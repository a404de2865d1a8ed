#include "cnls/params.hpp"

#include <cmath>
#include <sstream>

#include "cnls/errors.hpp"

namespace cnls {

SystemParams validate_params(int dim, Real p, int m, const MatrixXr& coupling) {
  if (dim < 2)
    throw UnsupportedDimension("spatial dimension must satisfy N >= 2, got N = " +
                               std::to_string(dim));
  if (m < 1)
    throw UnsupportedDimension("component count must satisfy m >= 1, got m = " +
                               std::to_string(m));
  if (coupling.rows() != m || coupling.cols() != m)
    throw NonSymmetricCoupling("coupling matrix must be m x m");

  for (int j = 0; j < m; ++j)
    for (int k = 0; k < j; ++k)
      if (coupling(j, k) != coupling(k, j)) {
        std::ostringstream msg;
        msg << "coupling matrix not symmetric: a(" << j << "," << k << ") = "
            << coupling(j, k) << " but a(" << k << "," << j << ") = "
            << coupling(k, j);
        throw NonSymmetricCoupling(msg.str());
      }
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      if (!(coupling(j, k) > 0.0)) {
        std::ostringstream msg;
        msg << "coupling entries must be positive: a(" << j << "," << k
            << ") = " << coupling(j, k);
        throw NonPositiveCoupling(msg.str());
      }

  SystemParams params{dim, p, m, coupling};
  if (!(p > params.p_lower()) || !(p < params.p_upper())) {
    std::ostringstream msg;
    msg << "exponent p = " << p << " outside the admissible window ("
        << params.p_lower() << ", ";
    if (std::isinf(params.p_upper()))
      msg << "inf";
    else
      msg << params.p_upper();
    msg << ") for N = " << dim;
    throw ExponentOutOfRange(msg.str());
  }
  return params;
}

SystemParams validate_params(const SystemParams& raw) {
  return validate_params(raw.dim, raw.p, raw.m, raw.coupling);
}

void require_dynamics_dimension(const SystemParams& params) {
  if (params.dim < 2 || params.dim > 4)
    throw UnsupportedDimension(
        "time-dependent runs require 2 <= N <= 4, got N = " +
        std::to_string(params.dim));
}

}  // namespace cnls
