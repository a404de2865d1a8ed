#ifndef CNLS_GROUND_STATE_HPP_
#define CNLS_GROUND_STATE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "cnls/field.hpp"
#include "cnls/functionals.hpp"
#include "cnls/params.hpp"

namespace cnls {

/**
 * Configuration of the stationary solver for
 *
 *   Lap psi_j - psi_j + sum_k a_jk |psi_k|^p |psi_j|^(p-2) psi_j = 0
 *
 * on a radial grid.  Phase 1 evolves the normalized gradient flow
 * d phi/d tau = Lap phi + N(phi) by semi-implicit steps (linear part
 * implicit, nonlinear part explicit), renormalizing the mass after every
 * step.  A Newton polish then drives the discrete residual of the
 * eigenproblem Lap phi - omega phi + N(phi) = 0 to rounding level, and the
 * final rescaling phi(x) -> omega^(-1/(2p-2)) phi(x/sqrt(omega)) sets the
 * multiplier to one exactly (implemented as a grid rescaling, so the
 * discrete residual survives unchanged).
 */
struct GroundStateConfig {
  Eigen::Index n_r = 4096;
  Real radius = 16.0;
  Real tau = 0.5;           ///< pseudo-time step of the flow
  Real eps_res = 1e-8;      ///< acceptance threshold on the final residual
  int max_iters = 20000;    ///< flow step budget

  enum class MassMode { Total, PerComponent };
  MassMode mass_mode = MassMode::Total;
  Real target_mass = -1.0;  ///< total mass constraint; <= 0 keeps the seed mass

  std::vector<Real> seed_widths;      ///< per component; empty -> staggered defaults
  std::vector<Real> seed_amplitudes;  ///< per component; empty -> all 1
  bool semitrivial_seed = false;      ///< (gaussian, 0, ..., 0) seed

  bool newton_polish = true;
  Real newton_switch_res = 1e-3;  ///< flow residual at which Newton takes over
  int newton_max_iters = 60;
};

struct GroundStateResult {
  RadialField profile;  ///< real nonnegative samples, multiplier = 1
  Real omega = 1.0;     ///< multiplier extracted before the final rescaling
  Real residual = 0.0;  ///< sup-norm of the stationary equation on `profile`
  Real level = 0.0;     ///< m = S(profile)
  std::vector<std::pair<AlphaBeta, Real>> pohozaev_defects;
  ArrayXr component_masses;
  int iterations = 0;
  int newton_iterations = 0;
  std::vector<Real> action_history;  ///< S of the omega-normalized flow iterates
};

/// Throws NoConvergence, CollapseToZero or NegativeOmega.
GroundStateResult solve_ground_state(const SystemParams& params,
                                     const GroundStateConfig& cfg);

/// Relative defect |K_{a,b}(psi)| / sum of |term| magnitudes per test pair.
std::vector<std::pair<AlphaBeta, Real>> verify_pohozaev(
    const GroundStateResult& result, const SystemParams& params,
    const std::vector<AlphaBeta>& test_set);
std::vector<std::pair<AlphaBeta, Real>> pohozaev_defects(
    const FunctionalReport& report, const std::vector<AlphaBeta>& test_set);

// ---------------------------------------------------------------------------
// Shooting oracle (single component)

/// Outcome of integrating one shot psi(0) = s outward.
enum class ShotEvent { Crossed, Turned, Undecided };

struct ShootingResult {
  ArrayXr values;     ///< profile on the radii passed in
  Real center_value;  ///< converged psi(0)
  Real bracket_lo;    ///< largest shot that turned (stayed positive)
  Real bracket_hi;    ///< smallest shot that crossed zero
  Real tail_radius;   ///< start of the matched exponential tail
};

/**
 * Independent m = 1 oracle: bisection on psi(0) for the positive decaying
 * solution of psi'' + (N-1)/r psi' - psi + a psi^(2p-1) = 0, integrated by
 * adaptive Dormand-Prince 4(5) stepping; bisection tolerance 1e-12 on
 * psi(0).  Beyond `tail_radius` the profile continues with the matched
 * asymptotic decay C r^(-(N-1)/2) e^(-r).  Throws BracketFailure.
 */
ShootingResult shooting_oracle(const SystemParams& params, const ArrayXr& radii);

/// Event of a single shot (exposed for bracket-certificate tests).
ShotEvent shooting_probe(const SystemParams& params, Real center_value);

// ---------------------------------------------------------------------------
// Coupling sweep of the vector-versus-semitrivial transition

struct MuSweepPoint {
  Real mu = 0;
  bool vector_ok = false;
  bool semitrivial_ok = false;
  Real vector_action = 0;
  Real semitrivial_action = 0;
  bool selected_vector = false;
  Real selected_action = 0;
  ArrayXr selected_masses;  ///< M_j of the lower-action candidate
  std::string error;        ///< per-point solver failure, if any
};

/**
 * For couplings a_jj = mu_diag[j], a_jk = mu (j != k), solves from a vector
 * seed and from a semitrivial seed at every mu in `mus` and keeps the
 * lower-action converged candidate.
 */
std::vector<MuSweepPoint> mu_sweep(int dim, Real p, const std::vector<Real>& mu_diag,
                                   const std::vector<Real>& mus,
                                   const GroundStateConfig& cfg, int jobs = 1);

// ---------------------------------------------------------------------------
// Profile persistence (documented plain-text columnar format)

void save_profile(const std::string& path, const GroundStateResult& result,
                  const SystemParams& params,
                  const std::vector<std::string>& config_echo = {});

struct LoadedProfile {
  GroundStateResult result;
  SystemParams params;
};
LoadedProfile load_profile(const std::string& path);

}  // namespace cnls

#endif  // CNLS_GROUND_STATE_HPP_
