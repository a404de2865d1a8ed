#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cnls/errors.hpp"
#include "cnls/ground_state.hpp"
#include "cnls/operators.hpp"
#include "test_helpers.hpp"

using namespace cnls;
using cnls::test::rel_err;

namespace {

GroundStateConfig fast_config() {
  GroundStateConfig cfg;
  cfg.n_r = 8192;
  cfg.radius = 16.0;
  cfg.tau = 0.5;
  cfg.eps_res = 1e-9;
  cfg.max_iters = 6000;
  return cfg;
}

// Solve once and share across the test cases.
const GroundStateResult& reference_solution() {
  static const GroundStateResult result =
      solve_ground_state(cnls::test::reference_params(), fast_config());
  return result;
}

}  // namespace

TEST_CASE("shooting bracket certificate") {
  const SystemParams prm = cnls::test::reference_params();
  const RadialGrid g = RadialGrid::make(2, 512, 16.0);
  const ShootingResult shot = shooting_oracle(prm, g.r);

  CHECK(shot.bracket_hi - shot.bracket_lo <= 1e-11 * shot.bracket_hi);
  // below the critical height the shot turns back up; above it crosses zero
  CHECK(shooting_probe(prm, shot.center_value * 0.999) == ShotEvent::Turned);
  CHECK(shooting_probe(prm, shot.center_value * 1.001) == ShotEvent::Crossed);
}

TEST_CASE("shooting profile is positive, decreasing, and near-stationary") {
  const SystemParams prm = cnls::test::reference_params();
  const RadialGrid g = RadialGrid::make(2, 16384, 16.0);
  const ShootingResult shot = shooting_oracle(prm, g.r);

  CHECK(shot.values.minCoeff() > 0.0);
  for (Eigen::Index i = 1; i < g.n_r; ++i)
    CHECK(shot.values[i] < shot.values[i - 1] * (1 + 1e-12));

  RadialField psi(g, 1);
  psi.comps[0] = shot.values.cast<Complex>();
  const auto defects =
      pohozaev_defects(compute_report(psi, prm), {{1.0, 0.0}});
  CHECK(defects[0].second <= 1e-6);
}

TEST_CASE("discrete stationary residual of the oracle is second order") {
  const SystemParams prm = cnls::test::reference_params();
  auto residual_at = [&](Eigen::Index n) {
    const RadialGrid g = RadialGrid::make(2, n, 16.0);
    const ShootingResult shot = shooting_oracle(prm, g.r);
    RadialField psi(g, 1);
    psi.comps[0] = shot.values.cast<Complex>();
    const RadialField lap = laplacian(psi);
    ArrayXr res(g.n_r);
    for (Eigen::Index i = 0; i < g.n_r; ++i) {
      const Real v = shot.values[i];
      res[i] = lap.comps[0][i].real() - v + std::pow(v, 2 * prm.p - 1);
    }
    // skip the clipped boundary cell; the profile there is ~1e-7
    return res.head(g.n_r - 1).abs().maxCoeff();
  };
  const Real coarse = residual_at(2048);
  const Real fine = residual_at(4096);
  CHECK(coarse / fine >= 3.0);
}

TEST_CASE("gradient flow cross-validates against the shooting oracle") {
  const GroundStateResult& gs = reference_solution();
  const SystemParams prm = cnls::test::reference_params();

  CHECK(gs.residual <= 1e-9);
  CHECK(gs.level > 0.0);
  CHECK(gs.omega > 0.0);

  // supremum distance to the independently shot profile, on the flow grid
  const ShootingResult shot = shooting_oracle(prm, gs.profile.grid.r);
  const ArrayXr flow = gs.profile.comps[0].real();
  const Real sup = (flow - shot.values).abs().maxCoeff();
  CHECK(sup / shot.values.maxCoeff() <= 1e-4);

  // Pohozaev defects on the default test set
  for (const auto& [ab, defect] : gs.pohozaev_defects) CHECK(defect <= 1e-5);

  // m = 1, N = 2 specialization: p M = ||psi||_{2p}^{2p}
  const FunctionalReport r = compute_report(gs.profile, prm);
  CHECK(rel_err(prm.p * r.mass[0], r.interaction(0, 0)) < 1e-5);

  // |psi|^2 <= 2 T(psi) (normalization-free sanity of the T functional)
  CHECK(r.mass[0] <= 2 * functional_T(r));
}

TEST_CASE("action history descends after the transient") {
  const GroundStateResult& gs = reference_solution();
  REQUIRE(gs.action_history.size() > 12);
  for (std::size_t k = 11; k < gs.action_history.size(); ++k) {
    if (!std::isfinite(gs.action_history[k - 1]) ||
        !std::isfinite(gs.action_history[k]))
      continue;
    CHECK(gs.action_history[k] <= gs.action_history[k - 1] + 1e-10);
  }
}

TEST_CASE("pohozaev defect identities and the perturbation check") {
  const GroundStateResult& gs = reference_solution();
  const SystemParams prm = cnls::test::reference_params();
  const FunctionalReport r = compute_report(gs.profile, prm);

  // the defect of K_(1,-2/N) equals the defect of sum Q_j identically
  CHECK(rel_err(constraint_value(r, AlphaBeta::virial(2)), r.q.sum()) < 1e-13);

  // a deliberately perturbed profile has a large defect (test of the test)
  RadialField bad = gs.profile;
  const RadialGrid& g = bad.grid;
  for (Eigen::Index i = 0; i < g.n_r; ++i)
    bad.comps[0][i] += 0.1 * std::exp(-(g.r[i] - 2) * (g.r[i] - 2));
  const auto defects = pohozaev_defects(compute_report(bad, prm),
                                        default_alpha_beta_set(2));
  Real worst = 0;
  for (const auto& [ab, d] : defects) worst = std::max(worst, d);
  CHECK(worst > 1e-2);
}

TEST_CASE("decoupled semitrivial seed keeps the second component at zero") {
  MatrixXr A(2, 2);
  A << 1.0, 1e-8, 1e-8, 1.0;
  const SystemParams prm = validate_params(2, 2.5, 2, A);
  GroundStateConfig cfg = fast_config();
  cfg.n_r = 4096;
  cfg.semitrivial_seed = true;
  const GroundStateResult gs = solve_ground_state(prm, cfg);
  CHECK(gs.component_masses[1] <= 1e-10);
  CHECK(gs.component_masses[0] > 0.1);
}

TEST_CASE("profile files reload bit-exactly") {
  const GroundStateResult& gs = reference_solution();
  const SystemParams prm = cnls::test::reference_params();
  const std::string path = "test_profile_roundtrip.txt";
  save_profile(path, gs, prm, {"problem.N = 2"});

  const LoadedProfile loaded = load_profile(path);
  CHECK(loaded.params.dim == prm.dim);
  CHECK(loaded.result.level == gs.level);
  CHECK(loaded.result.omega == gs.omega);
  CHECK(loaded.result.profile.grid.radius == gs.profile.grid.radius);
  CHECK((loaded.result.profile.comps[0] - gs.profile.comps[0]).abs().maxCoeff() ==
        0.0);

  const std::string path2 = "test_profile_roundtrip2.txt";
  save_profile(path2, loaded.result, loaded.params, {"problem.N = 2"});
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::stringstream b1, b2;
  b1 << f1.rdbuf();
  b2 << f2.rdbuf();
  CHECK(b1.str() == b2.str());
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("mu sweep selects the vector branch at strong coupling") {
  GroundStateConfig cfg = fast_config();
  cfg.n_r = 4096;
  cfg.radius = 12.0;
  const std::vector<MuSweepPoint> points =
      mu_sweep(2, 2.5, {1.0, 1.0}, {1.0, 10.0}, cfg);

  REQUIRE(points.size() == 2);
  // weak off-diagonal coupling: the semitrivial branch has lower action
  CHECK(points[0].vector_ok);
  CHECK(points[0].semitrivial_ok);
  CHECK_FALSE(points[0].selected_vector);
  // strong coupling: the vector branch wins and both components carry mass
  CHECK(points[1].selected_vector);
  CHECK(points[1].selected_action < points[1].semitrivial_action);
  CHECK(points[1].selected_masses.minCoeff() >
        1e-2 * points[1].selected_masses.sum());
}

TEST_CASE("symmetric setup with identical seeds gives equal masses") {
  MatrixXr A(2, 2);
  A << 1.0, 10.0, 10.0, 1.0;
  const SystemParams prm = validate_params(2, 2.5, 2, A);
  GroundStateConfig cfg = fast_config();
  cfg.n_r = 4096;
  cfg.radius = 12.0;
  cfg.seed_widths = {1.2, 1.2};
  const GroundStateResult gs = solve_ground_state(prm, cfg);
  CHECK(rel_err(gs.component_masses[0], gs.component_masses[1]) < 1e-8);
}
