#ifndef CNLS_CHECKS_HPP_
#define CNLS_CHECKS_HPP_

#include <cstdint>
#include <ostream>

#include "cnls/types.hpp"

namespace cnls {

struct CheckOptions {
  std::uint64_t seed = 1234;
  int fields = 100;  ///< corpus size for the identity suites
  int box_n = 128;
  Real box_extent = 12.0;
  Eigen::Index radial_n = 8192;
  Real radial_extent = 16.0;
};

/**
 * Runs the identity and property suites (quadrature exactness, Parseval,
 * Laplacian self-adjointness, the Q/S/H identities, the derivative anchor,
 * GN-ratio invariance, scaling laws, Nehari roots, T monotonicity, H
 * positivity), printing one PASS/FAIL line per suite.  Returns the number
 * of failed suites.
 */
int run_check_suites(const CheckOptions& opts, std::ostream& out);

}  // namespace cnls

#endif  // CNLS_CHECKS_HPP_
