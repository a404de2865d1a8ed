#ifndef CNLS_EVOLUTION_HPP_
#define CNLS_EVOLUTION_HPP_

#include <string>
#include <vector>

#include "cnls/field.hpp"
#include "cnls/params.hpp"

namespace cnls {

struct EvolutionConfig {
  Real dt = 1e-3;
  Real t_end = 5.0;
  int stride = 10;            ///< steps between diagnostic rows
  Real gamma_blow = 100.0;    ///< blow-up trigger: gradient growth factor
  Real delta_energy = 1e-3;   ///< blow-up trigger: relative energy drift
  Real localization_tol = 1e-6;  ///< row flag: mass fraction beyond |x| > L/2
};

enum class EvolutionVerdict { Completed, BlowupDetected, Poisoned };

struct TraceRow {
  Real t = 0;
  ArrayXr mass;       ///< M_j
  Real energy = 0;    ///< E
  ArrayXr grad;       ///< ||grad u_j||^2
  Real variance = 0;  ///< Q = sum_j int |x|^2 |u_j|^2
  Real k_virial = 0;  ///< K_{1,-2/N}
  int flag = 0;       ///< 1 when localization is lost
};

struct EvolutionTrace {
  std::vector<TraceRow> rows;
  EvolutionVerdict verdict = EvolutionVerdict::Completed;
  Real t_star = 0;  ///< first trigger time when verdict is BlowupDetected
  int components = 1;

  /// sum_jk a_jk P_jk recovered from a row (it is not a separate column).
  static Real row_weighted_interaction(const TraceRow& row, const SystemParams& p);
};

/**
 * One Strang step L(dt/2) N(dt) L(dt/2).  The linear substep multiplies
 * every mode by e^(-i |k|^2 dt); the nonlinear substep multiplies every
 * sample by e^(i V_j dt) with V_j = sum_k a_jk |u_k|^p |u_j|^(p-2), which is
 * exact because all moduli are pointwise invariant under it.
 */
BoxField step(const BoxField& u, const SystemParams& params, Real dt);

/**
 * Repeated stepping with diagnostics every `stride` steps.  Halts early with
 * BlowupDetected when the total squared gradient norm exceeds gamma_blow
 * times its initial value or the relative energy drift exceeds delta_energy
 * (an under-resolution signal); Poisoned on NaN/Inf.
 */
EvolutionTrace evolve(const BoxField& u0, const SystemParams& params,
                      const EvolutionConfig& cfg, BoxField* final_state = nullptr);

struct VirialReport {
  Real max_rel_defect = 0;  ///< over scored interior rows
  int rows_scored = 0;
  int rows_flagged = 0;  ///< rows excluded for lost localization
};

/**
 * Central second difference of Q(t)/8 against the virial right-hand side
 * sum_j ||grad u_j||^2 - N(p-1)/(2p) sum_jk a_jk P_jk  (= (N/2) K_{1,-2/N})
 * at interior rows; defects are relative to the sum of |term| magnitudes.
 * Throws InsufficientRows for fewer than 5 rows or nonuniform spacing.
 */
VirialReport virial_check(const EvolutionTrace& trace, const SystemParams& params);

/// CSV persistence: `# config` comments, one header line, 17-digit values.
void save_trace(const std::string& path, const EvolutionTrace& trace,
                const std::vector<std::string>& config_echo = {});

/// Transplants a radial profile onto a periodic box by radial interpolation.
BoxField embed_radial_profile(const RadialField& psi, const CartesianGrid& box);

/// H^1 distance between two fields on one radial grid.
Real h1_distance(const RadialField& a, const RadialField& b);

}  // namespace cnls

#endif  // CNLS_EVOLUTION_HPP_
