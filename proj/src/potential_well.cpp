#include "cnls/potential_well.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include "cnls/errors.hpp"
#include "cnls/scaling.hpp"

namespace cnls {

std::string to_string(WellVerdict v) {
  switch (v) {
    case WellVerdict::APlus: return "A_plus";
    case WellVerdict::AMinus: return "A_minus";
    case WellVerdict::AboveWell: return "above_well";
    case WellVerdict::Boundary: return "boundary";
  }
  return "?";
}

Classification classify(const FunctionalReport& report, Real m_ref,
                        const std::vector<AlphaBeta>& ab_set, Real boundary_tol) {
  if (!(m_ref > 0)) throw ConfigError("classification requires m_ref > 0");
  Classification cls;
  cls.action_value = report.action;
  cls.m_ref = m_ref;
  for (const AlphaBeta& ab : ab_set)
    cls.constraints.emplace_back(ab, constraint_K(report, ab));

  if (std::abs(cls.action_value - m_ref) <= boundary_tol * std::abs(m_ref)) {
    cls.verdict = WellVerdict::Boundary;
    return cls;
  }
  if (cls.action_value >= m_ref) {
    cls.verdict = WellVerdict::AboveWell;
    return cls;
  }
  bool any_neg = false, any_nonneg = false;
  for (const auto& [ab, k] : cls.constraints) (k < 0 ? any_neg : any_nonneg) = true;
  if (any_neg && any_nonneg) {
    std::ostringstream msg;
    msg << "K sign disagreement below the well level (S = " << cls.action_value
        << " < m = " << m_ref << "):";
    for (const auto& [ab, k] : cls.constraints)
      msg << " K(" << ab.alpha << "," << ab.beta << ") = " << k;
    throw SignDisagreement(msg.str());
  }
  cls.verdict = any_neg ? WellVerdict::AMinus : WellVerdict::APlus;
  return cls;
}

namespace {

// Classification from trace-row aggregates (S and the K family only need
// the total mass, total gradient and the weighted interaction).
Classification classify_row(const TraceRow& row, const SystemParams& params,
                            Real m_ref, const std::vector<AlphaBeta>& ab_set) {
  FunctionalReport r;
  r.dim = params.dim;
  r.p = params.p;
  r.mass = row.mass;
  r.grad = row.grad;
  r.weighted_interaction = EvolutionTrace::row_weighted_interaction(row, params);
  r.action = row.energy + 0.5 * row.mass.sum();
  return classify(r, m_ref, ab_set);
}

}  // namespace

DichotomyReport dichotomy_experiment(const BoxField& u0, const SystemParams& params,
                                     const EvolutionConfig& cfg, Real m_ref,
                                     const std::vector<AlphaBeta>& ab_set) {
  DichotomyReport report;
  report.initial = classify(u0, params, m_ref, ab_set);
  if (report.initial.verdict != WellVerdict::APlus &&
      report.initial.verdict != WellVerdict::AMinus)
    throw ConfigError("dichotomy experiment requires an A_plus or A_minus state");

  report.trace = evolve(u0, params, cfg);
  report.grad_bound = 0.5 * (2 + params.dim) * m_ref;

  const bool blew_up = report.trace.verdict == EvolutionVerdict::BlowupDetected;
  const std::size_t scored_rows =
      blew_up ? report.trace.rows.size() - 1 : report.trace.rows.size();

  Real k_first = 0;
  bool k_stays_negative = true;
  for (std::size_t i = 0; i < scored_rows; ++i) {
    const TraceRow& row = report.trace.rows[i];
    report.sup_grad = std::max(report.sup_grad, row.grad.sum());
    try {
      const Classification cls = classify_row(row, params, m_ref, ab_set);
      if (cls.verdict != report.initial.verdict) {
        report.verdict_stable = false;
        std::ostringstream msg;
        msg << "classification flipped to " << to_string(cls.verdict)
            << " at t = " << row.t;
        report.detail = msg.str();
      }
    } catch (const SignDisagreement&) {
      report.verdict_stable = false;
      report.detail = "K sign disagreement at t = " + std::to_string(row.t);
    }
    if (i == 0) k_first = row.k_virial;
    k_stays_negative = k_stays_negative &&
                       row.k_virial <= k_first + std::abs(k_first) * 1e-6;
  }

  std::ostringstream detail;
  if (report.initial.verdict == WellVerdict::APlus) {
    const bool completed = report.trace.verdict == EvolutionVerdict::Completed;
    const bool bounded = report.sup_grad <= report.grad_bound * 1.01;
    report.consistent = completed && bounded && report.verdict_stable;
    detail << (completed ? "completed" : "did not complete") << "; sup grad "
           << report.sup_grad << " vs bound " << report.grad_bound;
  } else {
    report.consistent = blew_up && k_stays_negative && report.verdict_stable;
    detail << (blew_up ? "blow-up detected at t* = " +
                             std::to_string(report.trace.t_star)
                       : "no blow-up detected")
           << (k_stays_negative ? "; K stayed below its initial value"
                                : "; K rose above its initial value");
  }
  if (!report.detail.empty()) detail << "; " << report.detail;
  report.detail = detail.str();
  return report;
}

std::vector<InstabilityPoint> instability_experiment(
    const RadialField& psi, const SystemParams& params, Real m_ref,
    const std::vector<Real>& lambdas, const CartesianGrid& box,
    const EvolutionConfig& cfg, const std::vector<AlphaBeta>& ab_set, int jobs) {
  for (Real l : lambdas)
    if (!(l > 1.0))
      throw ConfigError("instability experiment requires lambda > 1");

  auto run_point = [&](Real lambda) {
    InstabilityPoint point;
    point.lambda = lambda;
    const RadialField scaled = rescale(psi, ScalingLaw::mass_preserving(lambda));
    point.h1_distance = h1_distance(scaled, psi);
    point.classification = classify(scaled, params, m_ref, ab_set).verdict;
    const BoxField u0 = embed_radial_profile(scaled, box);
    point.trace = evolve(u0, params, cfg);
    point.outcome = point.trace.verdict;
    point.t_star = point.trace.t_star;
    return point;
  };

  std::vector<InstabilityPoint> points(lambdas.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) points[i] = run_point(lambdas[i]);
  } else {
    std::vector<std::future<InstabilityPoint>> futs;
    futs.reserve(lambdas.size());
    for (Real l : lambdas)
      futs.push_back(std::async(std::launch::async, run_point, l));
    for (std::size_t i = 0; i < futs.size(); ++i) points[i] = futs[i].get();
  }
  return points;
}

}  // namespace cnls
