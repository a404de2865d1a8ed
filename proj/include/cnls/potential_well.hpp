#ifndef CNLS_POTENTIAL_WELL_HPP_
#define CNLS_POTENTIAL_WELL_HPP_

#include <string>
#include <vector>

#include "cnls/evolution.hpp"
#include "cnls/functionals.hpp"
#include "cnls/ground_state.hpp"

namespace cnls {

enum class WellVerdict { APlus, AMinus, AboveWell, Boundary };

std::string to_string(WellVerdict v);

struct Classification {
  Real action_value = 0;
  Real m_ref = 0;
  std::vector<std::pair<AlphaBeta, Real>> constraints;
  WellVerdict verdict = WellVerdict::AboveWell;
};

/**
 * Places a state relative to the potential well: below the level m_ref the
 * sign of K_{a,b} decides between the invariant sets (nonnegative for every
 * tested pair -> APlus, negative for every pair -> AMinus); mixed signs
 * violate the parameter independence of the sets and throw SignDisagreement.
 * |S - m_ref| below `boundary_tol` (relative) is reported as Boundary.
 */
Classification classify(const FunctionalReport& report, Real m_ref,
                        const std::vector<AlphaBeta>& ab_set,
                        Real boundary_tol = 1e-8);

template <class Grid>
Classification classify(const Field<Grid>& u, const SystemParams& params,
                        Real m_ref, const std::vector<AlphaBeta>& ab_set,
                        Real boundary_tol = 1e-8) {
  return classify(compute_report(u, params), m_ref, ab_set, boundary_tol);
}

struct DichotomyReport {
  Classification initial;
  EvolutionTrace trace;
  Real grad_bound = 0;  ///< (2+N) m_ref / 2
  Real sup_grad = 0;
  bool verdict_stable = true;  ///< no classification flip along the run
  bool consistent = false;     ///< experiment PASS
  std::string detail;
};

/**
 * Runs the global-versus-blow-up experiment: evolves the state, re-classifies
 * at every diagnostic row (the verdict must never flip), and checks the
 * APlus gradient bound sup_t sum ||grad u_j||^2 <= (2+N) m_ref/2 within 1%
 * or the AMinus outcome (blow-up detection with K_{1,-2/N} < 0 along the run).
 */
DichotomyReport dichotomy_experiment(const BoxField& u0, const SystemParams& params,
                                     const EvolutionConfig& cfg, Real m_ref,
                                     const std::vector<AlphaBeta>& ab_set);

struct InstabilityPoint {
  Real lambda = 1;
  Real h1_distance = 0;           ///< ||psi_lambda - psi||_{H^1}
  WellVerdict classification = WellVerdict::AMinus;
  EvolutionVerdict outcome = EvolutionVerdict::Completed;
  Real t_star = 0;
  EvolutionTrace trace;
};

/**
 * Standing-wave instability experiment: for every lambda > 1 in the list,
 * forms psi_lambda = lambda^(N/2) psi(lambda .), records its H^1 distance to
 * psi, classifies it (AMinus expected), and evolves it on the box until
 * blow-up detection.
 */
std::vector<InstabilityPoint> instability_experiment(
    const RadialField& psi, const SystemParams& params, Real m_ref,
    const std::vector<Real>& lambdas, const CartesianGrid& box,
    const EvolutionConfig& cfg, const std::vector<AlphaBeta>& ab_set,
    int jobs = 1);

}  // namespace cnls

#endif  // CNLS_POTENTIAL_WELL_HPP_
