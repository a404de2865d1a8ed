#ifndef CNLS_SCALING_HPP_
#define CNLS_SCALING_HPP_

#include "cnls/field.hpp"
#include "cnls/functionals.hpp"
#include "cnls/params.hpp"

namespace cnls {

/**
 * The three scaling families acting on fields:
 *
 *   Exponential     u -> e^(alpha l) u(e^(-beta l) .)   (any real l)
 *   MassPreserving  u -> l^(N/2) u(l .)                 (l > 0)
 *   Amplitude       u -> l u                            (l > 0)
 *
 * The mass-preserving law conserves every M_j exactly.
 */
struct ScalingLaw {
  enum class Kind { Exponential, MassPreserving, Amplitude };

  Kind kind = Kind::Amplitude;
  Real lambda = 1.0;
  AlphaBeta ab{};  // used by the exponential family

  static ScalingLaw exponential(const AlphaBeta& ab, Real lambda) {
    return {Kind::Exponential, lambda, ab};
  }
  static ScalingLaw mass_preserving(Real lambda) {
    return {Kind::MassPreserving, lambda, {}};
  }
  static ScalingLaw amplitude(Real lambda) {
    return {Kind::Amplitude, lambda, {}};
  }
};

/**
 * Resamples the scaled field on the original grid (cubic interpolation for
 * dilated profiles, exact amplitude factors).  Throws SupportOverflow when
 * the dilated profile carries relative tail mass above `tail_tol` near the
 * domain boundary.
 */
template <class Grid>
Field<Grid> rescale(const Field<Grid>& u, const ScalingLaw& law,
                    Real tail_tol = 1e-8);

/**
 * Dilation root of Lemma "sum_j Q_j(u_l) = 0":
 *   l0 = [ (2G/N) / ((1 - 1/p) sum a_jk P_jk) ]^(1/(N(p-1)-2)),
 * with G the total squared gradient norm.  Throws DegenerateField when
 * either aggregate vanishes.
 */
Real nehari_root_dilation(const FunctionalReport& r);
template <class Grid>
Real nehari_root_dilation(const Field<Grid>& u, const SystemParams& params) {
  return nehari_root_dilation(compute_report(u, params));
}

/**
 * Amplitude root of K_{a,b}(t u) = 0: with K(tu) = t^2 A - t^(2p) B,
 * t0 = (A/B)^(1/(2p-2)).  Throws DegenerateField when A or B is not positive.
 */
Real nehari_root_amplitude(const FunctionalReport& r, const AlphaBeta& ab);
template <class Grid>
Real nehari_root_amplitude(const Field<Grid>& u, const SystemParams& params,
                           const AlphaBeta& ab) {
  return nehari_root_amplitude(compute_report(u, params), ab);
}

/// Bisection fallbacks used to regression-test the closed forms
/// (tolerance 1e-12 in the root, at most 200 iterations).
Real nehari_root_dilation_bisect(const FunctionalReport& r);
Real nehari_root_amplitude_bisect(const FunctionalReport& r, const AlphaBeta& ab);

}  // namespace cnls

#endif  // CNLS_SCALING_HPP_
