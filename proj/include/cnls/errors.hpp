#ifndef CNLS_ERRORS_HPP_
#define CNLS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cnls {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter validation.
struct NonSymmetricCoupling : Error { using Error::Error; };
struct NonPositiveCoupling : Error { using Error::Error; };
struct ExponentOutOfRange : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };

// Fields and functionals.
struct PoisonedState : Error { using Error::Error; };
struct InadmissibleAlphaBeta : Error { using Error::Error; };
struct DegenerateAlphaBeta : Error { using Error::Error; };
struct ZeroField : Error { using Error::Error; };

// Scaling.
struct SupportOverflow : Error { using Error::Error; };
struct DegenerateField : Error { using Error::Error; };

// Ground-state solver.
struct NoConvergence : Error { using Error::Error; };
struct CollapseToZero : Error { using Error::Error; };
struct NegativeOmega : Error { using Error::Error; };
struct BracketFailure : Error { using Error::Error; };

// Evolution diagnostics.
struct InsufficientRows : Error { using Error::Error; };

// Potential-well classification.
struct SignDisagreement : Error { using Error::Error; };

// Front end.
struct ConfigError : Error { using Error::Error; };
struct MissingDependency : Error { using Error::Error; };

}  // namespace cnls

#endif  // CNLS_ERRORS_HPP_
