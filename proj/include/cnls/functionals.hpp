#ifndef CNLS_FUNCTIONALS_HPP_
#define CNLS_FUNCTIONALS_HPP_

#include <vector>

#include "cnls/field.hpp"
#include "cnls/operators.hpp"
#include "cnls/params.hpp"

namespace cnls {

/**
 * Scaling-family parameter pair (alpha, beta).
 *
 * Admissible pairs are the nonzero quadrant pairs (alpha, beta) in
 * R+^2 \ {(0,0)} together with the special pair (1, -2/N).
 */
struct AlphaBeta {
  Real alpha = 1.0;
  Real beta = 0.0;

  static AlphaBeta virial(int dim) { return {1.0, -2.0 / dim}; }
};

bool admissible(const AlphaBeta& ab, int dim);

/// Default test set {(1,0), (0,1), (1,1), (1,-2/N)}.
std::vector<AlphaBeta> default_alpha_beta_set(int dim);

/**
 * Every scalar functional of one state, computed in a single quadrature
 * pass: per-component masses M_j and gradient norms G_j, the interaction
 * matrix P_jk = int |u_j u_k|^p dx (coupling weights not included), and the
 * derived scalars
 *
 *   E   = 1/2 sum G_j - 1/(2p) sum a_jk P_jk
 *   S   = 1/2 sum (M_j + G_j) - 1/(2p) sum a_jk P_jk
 *   S_j = 1/2 (M_j + G_j) - 1/(2p) sum_k a_jk P_jk
 *   Q_j = (2/N) G_j - (1 - 1/p) sum_k a_jk P_jk
 *
 * Constraint values K_{a,b}, the auxiliary H_{a,b} and T are evaluated on
 * demand from the stored sums, so all algebraic identities among them hold
 * to rounding accuracy.
 */
struct FunctionalReport {
  int dim = 0;
  Real p = 0;
  ArrayXr mass;          ///< M_j
  ArrayXr grad;          ///< G_j
  MatrixXr interaction;  ///< P_jk (unweighted)
  ArrayXr row_interaction;      ///< sum_k a_jk P_jk
  Real weighted_interaction = 0;  ///< sum_jk a_jk P_jk
  Real plain_interaction = 0;     ///< sum_jk P_jk
  Real energy = 0;
  Real action = 0;
  ArrayXr q;  ///< Q_j
  ArrayXr s;  ///< S_j

  Real total_mass() const { return mass.sum(); }
  Real total_grad() const { return grad.sum(); }
};

template <class Grid>
FunctionalReport compute_report(const Field<Grid>& u, const SystemParams& params);

/// P_jk = int |u_j|^p |u_k|^p dx, exactly symmetric (j <= k computed once).
template <class Grid>
MatrixXr interaction_matrix(const Field<Grid>& u, const SystemParams& params);

Real energy(const FunctionalReport& r);
Real action(const FunctionalReport& r);

/**
 * Constraint K_{a,b}(u) = d/dl S((u^l)^{a,b}) |_{l=0}
 *   = 1/2 sum_j [(2a + (N-2)b) G_j + (2a + Nb) M_j]
 *     - (2pa + Nb)/(2p) sum_jk a_jk P_jk.
 *
 * Throws InadmissibleAlphaBeta for pairs outside the admissible family.
 * `constraint_value` skips the admissibility gate (any real pair).
 */
Real constraint_K(const FunctionalReport& r, const AlphaBeta& ab);
Real constraint_value(const FunctionalReport& r, const AlphaBeta& ab);

/**
 * H_{a,b}(u) = (2a + Nb)^{-1} [sum_j 2b G_j + a (1 - 1/p) sum a_jk P_jk].
 * Throws DegenerateAlphaBeta when 2a + Nb = 0 (use functional_T instead).
 */
Real functional_H(const FunctionalReport& r, const AlphaBeta& ab);

/// T(u) = 1/2 sum_j M_j + (N/8)(1 - 1/p - 2/(Np)) sum a_jk P_jk.
Real functional_T(const FunctionalReport& r);

/**
 * Gagliardo-Nirenberg ratio
 *   J(u) = sum_jk P_jk / [ (sum G_j)^(N(p-1)/2) (sum M_j)^((N-p(N-2))/2) ],
 * invariant under amplitude scaling and dilation.  Throws ZeroField.
 */
Real gn_ratio(const FunctionalReport& r);

/**
 * S((u^l)^{a,b}) by change of variables: masses scale as e^((2a+Nb)l),
 * gradients as e^((2a+(N-2)b)l), interactions as e^((2pa+Nb)l).
 */
Real action_under_scaling(const FunctionalReport& r, const AlphaBeta& ab, Real lambda);

/// S(u_l) and sum_j Q_j(u_l) for the mass-preserving dilation u_l = l^(N/2) u(l .).
Real action_under_dilation(const FunctionalReport& r, Real lambda);
Real sum_q_under_dilation(const FunctionalReport& r, Real lambda);

/// T(l u) for the amplitude scaling.
Real t_under_amplitude(const FunctionalReport& r, Real lambda);

// Field-level conveniences (one report pass behind each).
template <class Grid>
Real energy(const Field<Grid>& u, const SystemParams& params) {
  return energy(compute_report(u, params));
}
template <class Grid>
Real action(const Field<Grid>& u, const SystemParams& params) {
  return action(compute_report(u, params));
}
template <class Grid>
Real constraint_K(const Field<Grid>& u, const SystemParams& params, const AlphaBeta& ab) {
  return constraint_K(compute_report(u, params), ab);
}
template <class Grid>
Real functional_H(const Field<Grid>& u, const SystemParams& params, const AlphaBeta& ab) {
  return functional_H(compute_report(u, params), ab);
}
template <class Grid>
Real functional_T(const Field<Grid>& u, const SystemParams& params) {
  return functional_T(compute_report(u, params));
}
template <class Grid>
Real gn_ratio(const Field<Grid>& u, const SystemParams& params) {
  return gn_ratio(compute_report(u, params));
}

}  // namespace cnls

#endif  // CNLS_FUNCTIONALS_HPP_
