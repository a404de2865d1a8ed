#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cnls/errors.hpp"
#include "cnls/potential_well.hpp"
#include "cnls/scaling.hpp"
#include "test_helpers.hpp"

using namespace cnls;

namespace {

const SystemParams& prm() {
  static const SystemParams p = cnls::test::reference_params();
  return p;
}

const GroundStateResult& ground() {
  static const GroundStateResult gs = [] {
    GroundStateConfig cfg;
    cfg.n_r = 8192;
    cfg.radius = 16.0;
    return solve_ground_state(prm(), cfg);
  }();
  return gs;
}

RadialField scaled_state(Real amplitude, Real lambda) {
  RadialField u = ground().profile;
  if (lambda != 1.0) u = rescale(u, ScalingLaw::mass_preserving(lambda));
  if (amplitude != 1.0)
    for (auto& c : u.comps) c *= amplitude;
  return u;
}

}  // namespace

TEST_CASE("classification of the canonical states") {
  const auto ab_set = default_alpha_beta_set(2);
  const Real m_ref = ground().level;

  // small data below the well with every K positive
  const Classification small =
      classify(scaled_state(0.1, 1.0), prm(), m_ref, ab_set);
  CHECK(small.verdict == WellVerdict::APlus);
  for (const auto& [ab, k] : small.constraints) CHECK(k > 0);

  // dilated ground state: action drops below m and every K turns negative
  const Classification dilated =
      classify(scaled_state(1.0, 1.05), prm(), m_ref, ab_set);
  CHECK(dilated.verdict == WellVerdict::AMinus);
  for (const auto& [ab, k] : dilated.constraints) CHECK(k < 0);

  // the ground state itself sits on the boundary S = m
  const Classification self =
      classify(scaled_state(1.0, 1.0), prm(), m_ref, ab_set);
  CHECK(self.verdict == WellVerdict::Boundary);

  // a heavy wide state has S > m
  const RadialGrid& g = ground().profile.grid;
  const RadialField wide = cnls::test::unit_gaussian(g, 3.0, 0.8);
  const Classification above = classify(wide, prm(), m_ref, ab_set);
  CHECK(above.action_value > m_ref);
  CHECK(above.verdict == WellVerdict::AboveWell);

  CHECK_THROWS_AS(classify(wide, prm(), -1.0, ab_set), ConfigError);
}

TEST_CASE("manufactured mixed signs raise SignDisagreement") {
  FunctionalReport r;
  r.dim = 2;
  r.p = 2.5;
  r.mass = ArrayXr::Constant(1, 1.0);
  r.grad = ArrayXr::Constant(1, 1.0);
  r.weighted_interaction = 2.2;  // K_{1,0} < 0 < K_{0,1}
  r.action = 0.5 * (1.0 + 1.0) - 2.2 / 5.0;
  CHECK(constraint_value(r, {1.0, 0.0}) < 0);
  CHECK(constraint_value(r, {0.0, 1.0}) > 0);
  CHECK_THROWS_AS(classify(r, 1.0, default_alpha_beta_set(2)), SignDisagreement);
}

TEST_CASE("sign agreement on a scaled-state corpus") {
  const auto ab_set = default_alpha_beta_set(2);
  const Real m_ref = ground().level;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  int accepted = 0, disagreements = 0;
  while (accepted < 40) {
    const Real lambda = 0.6 + 1.2 * unif(rng);
    const Real t = 0.4 + 1.0 * unif(rng);
    const RadialField u = scaled_state(t, lambda);
    const FunctionalReport r = compute_report(u, prm());
    if (r.action >= m_ref) continue;
    ++accepted;
    try {
      classify(r, m_ref, ab_set);
    } catch (const SignDisagreement&) {
      ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("dichotomy experiment: small data stays global") {
  const CartesianGrid box{2, 256, 16.0};
  const BoxField u0 = embed_radial_profile(scaled_state(0.1, 1.0), box);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.stride = 100;
  const DichotomyReport report =
      dichotomy_experiment(u0, prm(), cfg, ground().level, default_alpha_beta_set(2));
  CHECK(report.initial.verdict == WellVerdict::APlus);
  CHECK(report.trace.verdict == EvolutionVerdict::Completed);
  CHECK(report.verdict_stable);
  CHECK(report.sup_grad <= report.grad_bound * 1.01);
  CHECK(report.consistent);
}

TEST_CASE("dichotomy experiment: dilated ground state blows up") {
  const CartesianGrid box{2, 256, 16.0};
  const BoxField u0 = embed_radial_profile(scaled_state(1.0, 1.2), box);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 6.0;
  cfg.stride = 50;
  const DichotomyReport report =
      dichotomy_experiment(u0, prm(), cfg, ground().level, default_alpha_beta_set(2));
  CHECK(report.initial.verdict == WellVerdict::AMinus);
  CHECK(report.trace.verdict == EvolutionVerdict::BlowupDetected);
  CHECK(report.consistent);
}

TEST_CASE("instability points classify A_minus and blow up, distances shrink") {
  const CartesianGrid box{2, 256, 16.0};
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 8.0;
  cfg.stride = 50;
  const std::vector<Real> lambdas = {1.2, 1.05};
  const auto points =
      instability_experiment(ground().profile, prm(), ground().level, lambdas,
                             box, cfg, default_alpha_beta_set(2));
  REQUIRE(points.size() == 2);
  CHECK(points[0].h1_distance > points[1].h1_distance);
  for (const auto& pt : points) {
    CHECK(pt.classification == WellVerdict::AMinus);
    CHECK(pt.outcome == EvolutionVerdict::BlowupDetected);
    CHECK(pt.h1_distance > 0);
  }
  CHECK_THROWS_AS(instability_experiment(ground().profile, prm(), ground().level,
                                         {0.9}, box, cfg,
                                         default_alpha_beta_set(2)),
                  ConfigError);
}
