#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnls/errors.hpp"
#include "cnls/random_fields.hpp"
#include "cnls/scaling.hpp"
#include "test_helpers.hpp"

using namespace cnls;
using cnls::test::kPi;
using cnls::test::rel_err;

namespace {
const RadialGrid kBall = RadialGrid::make(2, 8192, 16.0);
const CartesianGrid kBox{2, 128, 10.0};
}  // namespace

TEST_CASE("amplitude law with lambda = 1 is the identity") {
  FieldEnsemble gen(3);
  const BoxField u = gen.next(kBox, 2);
  const BoxField v = rescale(u, ScalingLaw::amplitude(1.0));
  for (int j = 0; j < 2; ++j)
    CHECK((v.comps[j] - u.comps[j]).abs().maxCoeff() == 0.0);
}

TEST_CASE("mass-preserving law conserves mass and scales gradients") {
  const SystemParams prm = cnls::test::reference_params();
  const RadialField u = cnls::test::unit_gaussian(kBall);
  const FunctionalReport r0 = compute_report(u, prm);
  for (Real lambda : {0.8, 1.3}) {
    const RadialField v = rescale(u, ScalingLaw::mass_preserving(lambda));
    const FunctionalReport r1 = compute_report(v, prm);
    CHECK(rel_err(r1.mass[0], r0.mass[0]) < 1e-8);
    CHECK(rel_err(r1.grad[0], lambda * lambda * r0.grad[0]) < 1e-6);
  }
}

TEST_CASE("exponential law follows the change-of-variables power laws") {
  const SystemParams prm = cnls::test::reference_params();
  const RadialField u = cnls::test::unit_gaussian(kBall, 1.2);
  const FunctionalReport r0 = compute_report(u, prm);
  for (const AlphaBeta& ab : {AlphaBeta{1.0, 0.4}, AlphaBeta{0.3, 1.0}}) {
    for (Real l : {-0.1, 0.08}) {
      const RadialField v = rescale(u, ScalingLaw::exponential(ab, l));
      const FunctionalReport r1 = compute_report(v, prm);
      CHECK(rel_err(r1.mass[0],
                    std::exp((2 * ab.alpha + 2 * ab.beta) * l) * r0.mass[0]) < 1e-7);
      CHECK(rel_err(r1.grad[0], std::exp(2 * ab.alpha * l) * r0.grad[0]) < 1e-6);
      CHECK(rel_err(r1.weighted_interaction,
                    std::exp((2 * prm.p * ab.alpha + 2 * ab.beta) * l) *
                        r0.weighted_interaction) < 1e-6);
    }
  }
}

TEST_CASE("exponential law on the box matches at interpolation accuracy") {
  const SystemParams prm = cnls::test::reference_params();
  const BoxField u = cnls::test::unit_gaussian(kBox, 1.5);
  const FunctionalReport r0 = compute_report(u, prm);
  const AlphaBeta ab{1.0, 0.5};
  const Real l = 0.05;
  const BoxField v = rescale(u, ScalingLaw::exponential(ab, l));
  const FunctionalReport r1 = compute_report(v, prm);
  CHECK(rel_err(r1.mass[0], std::exp(3 * l) * r0.mass[0]) < 1e-4);
}

TEST_CASE("dilation root of the Q constraint") {
  const SystemParams prm = cnls::test::reference_params();
  const FunctionalReport r =
      compute_report(cnls::test::unit_gaussian(kBall), prm);

  // closed form for the unit Gaussian: (2G/N)/((1-1/p) aP) = 1/0.24
  const Real l0 = nehari_root_dilation(r);
  CHECK(rel_err(l0, 1.0 / 0.24) < 1e-7);
  CHECK(std::abs(sum_q_under_dilation(r, l0)) <
        1e-10 * (r.grad.sum() + r.weighted_interaction));
  CHECK(rel_err(l0, nehari_root_dilation_bisect(r)) < 1e-10);

  // sign dichotomy: sum Q < 0 gives l0 < 1, sum Q > 0 gives l0 > 1
  FunctionalReport big = r;  // amplitude 3 state via exact power laws
  big.mass *= 9;
  big.grad *= 9;
  big.weighted_interaction *= std::pow(3.0, 2 * prm.p);
  big.q = (2.0 / prm.dim) * big.grad - (1 - 1 / prm.p) * big.weighted_interaction;
  CHECK(big.q.sum() < 0);
  CHECK(nehari_root_dilation(big) < 1.0);
  CHECK(r.q.sum() > 0);
  CHECK(l0 > 1.0);

  FunctionalReport zero = r;
  zero.grad.setZero();
  CHECK_THROWS_AS(nehari_root_dilation(zero), DegenerateField);
}

TEST_CASE("amplitude root of K") {
  const SystemParams prm = cnls::test::reference_params();
  const FunctionalReport r =
      compute_report(cnls::test::unit_gaussian(kBall), prm);
  const AlphaBeta ab{0.0, 1.0};

  // closed form for the Gaussian: (M / (P/p))^(1/(2p-2)) = 6.25^(1/3)
  const Real t0 = nehari_root_amplitude(r, ab);
  CHECK(rel_err(t0, std::pow(6.25, 1.0 / 3.0)) < 1e-7);
  CHECK(rel_err(t0, nehari_root_amplitude_bisect(r, ab)) < 1e-10);

  // K(t u) changes sign exactly at t0
  auto k_of_t = [&](Real t) {
    FunctionalReport s = r;
    s.mass *= t * t;
    s.grad *= t * t;
    s.weighted_interaction *= std::pow(t, 2 * prm.p);
    return constraint_value(s, ab);
  };
  CHECK(k_of_t(0.9 * t0) > 0);
  CHECK(k_of_t(1.1 * t0) < 0);
  CHECK(std::abs(k_of_t(t0)) < 1e-10 * r.mass.sum());
}

TEST_CASE("action along the dilation has its maximum at the root") {
  // d/dl S(u_l) = (N / 2l) sum Q_j(u_l), checked by finite differences
  const SystemParams prm = cnls::test::reference_params();
  const FunctionalReport r =
      compute_report(cnls::test::unit_gaussian(kBall), prm);
  for (Real l : {0.7, 1.2, 3.0, 5.0}) {
    const Real h = 1e-5 * l;
    const Real fd =
        (action_under_dilation(r, l + h) - action_under_dilation(r, l - h)) /
        (2 * h);
    const Real expected = prm.dim / (2 * l) * sum_q_under_dilation(r, l);
    CHECK(std::abs(fd - expected) < 1e-5 * std::max(std::abs(expected), Real(1)));
  }
  // concavity of S(u_l) past the root
  const Real l0 = nehari_root_dilation(r);
  for (Real l = l0 * 1.01; l < l0 * 3; l += 0.3) {
    const Real h = 1e-3;
    const Real second = (action_under_dilation(r, l + h) -
                         2 * action_under_dilation(r, l) +
                         action_under_dilation(r, l - h)) / (h * h);
    CHECK(second <= 1e-10);
  }
}

TEST_CASE("support overflow is detected") {
  const CartesianGrid tight{2, 64, 6.0};
  const BoxField u = cnls::test::unit_gaussian(tight, 1.8);
  CHECK_THROWS_AS(rescale(u, ScalingLaw::mass_preserving(0.25)), SupportOverflow);
  const RadialGrid smallball = RadialGrid::make(2, 2048, 6.0);
  const RadialField ur = cnls::test::unit_gaussian(smallball, 1.5);
  CHECK_THROWS_AS(rescale(ur, ScalingLaw::mass_preserving(0.2)), SupportOverflow);
}
