#include "cnls/functionals.hpp"

#include <cmath>

#include "cnls/errors.hpp"

namespace cnls {

namespace {
constexpr Real kDegenerateTol = 1e-14;

Real degeneracy_scale(const AlphaBeta& ab, int dim) {
  return std::abs(2.0 * ab.alpha) + dim * std::abs(ab.beta) + 1.0;
}
}  // namespace

bool admissible(const AlphaBeta& ab, int dim) {
  if (ab.alpha >= 0.0 && ab.beta >= 0.0 && (ab.alpha > 0.0 || ab.beta > 0.0))
    return true;
  // special pair (1, -2/N)
  return std::abs(ab.alpha - 1.0) <= kDegenerateTol &&
         std::abs(ab.beta + 2.0 / dim) <= kDegenerateTol;
}

std::vector<AlphaBeta> default_alpha_beta_set(int dim) {
  return {AlphaBeta{1.0, 0.0}, AlphaBeta{0.0, 1.0}, AlphaBeta{1.0, 1.0},
          AlphaBeta::virial(dim)};
}

template <class Grid>
MatrixXr interaction_matrix(const Field<Grid>& u, const SystemParams& params) {
  require_finite(u, "interaction_matrix");
  const int m = u.components();
  const Real ph = 0.5 * params.p;  // |u|^p = (|u|^2)^(p/2)
  std::vector<ArrayXr> pw(m);
  for (int j = 0; j < m; ++j) pw[j] = u.comps[j].abs2().pow(ph);
  MatrixXr P(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      const Real v = integrate(u.grid, ArrayXr(pw[j] * pw[k]));
      P(j, k) = v;
      P(k, j) = v;
    }
  return P;
}

template MatrixXr interaction_matrix(const BoxField&, const SystemParams&);
template MatrixXr interaction_matrix(const RadialField&, const SystemParams&);

template <class Grid>
FunctionalReport compute_report(const Field<Grid>& u, const SystemParams& params) {
  const int m = u.components();
  FunctionalReport r;
  r.dim = params.dim;
  r.p = params.p;
  const InnerProducts ip = inner_products(u);
  r.mass = ip.mass;
  r.grad = ip.grad;
  r.interaction = interaction_matrix(u, params);
  r.row_interaction = ArrayXr::Zero(m);
  for (int j = 0; j < m; ++j)
    r.row_interaction[j] = (params.coupling.row(j).transpose().array() *
                            r.interaction.row(j).transpose().array())
                               .sum();
  r.weighted_interaction = r.row_interaction.sum();
  r.plain_interaction = r.interaction.sum();

  const Real p = params.p;
  r.energy = 0.5 * r.grad.sum() - r.weighted_interaction / (2.0 * p);
  r.action = r.energy + 0.5 * r.mass.sum();
  r.q = (2.0 / params.dim) * r.grad - (1.0 - 1.0 / p) * r.row_interaction;
  r.s = 0.5 * (r.mass + r.grad) - r.row_interaction / (2.0 * p);
  return r;
}

template FunctionalReport compute_report(const BoxField&, const SystemParams&);
template FunctionalReport compute_report(const RadialField&, const SystemParams&);

Real energy(const FunctionalReport& r) { return r.energy; }
Real action(const FunctionalReport& r) { return r.action; }

Real constraint_value(const FunctionalReport& r, const AlphaBeta& ab) {
  const Real a = ab.alpha, b = ab.beta;
  const int N = r.dim;
  const Real p = r.p;
  return 0.5 * ((2.0 * a + (N - 2) * b) * r.grad.sum() +
                (2.0 * a + N * b) * r.mass.sum()) -
         (2.0 * p * a + N * b) / (2.0 * p) * r.weighted_interaction;
}

Real constraint_K(const FunctionalReport& r, const AlphaBeta& ab) {
  if (!admissible(ab, r.dim))
    throw InadmissibleAlphaBeta("(alpha, beta) outside R+^2 \\ {0} and (1, -2/N)");
  return constraint_value(r, ab);
}

Real functional_H(const FunctionalReport& r, const AlphaBeta& ab) {
  const Real denom = 2.0 * ab.alpha + r.dim * ab.beta;
  if (std::abs(denom) <= kDegenerateTol * degeneracy_scale(ab, r.dim))
    throw DegenerateAlphaBeta("2 alpha + N beta = 0; use functional_T");
  return (2.0 * ab.beta * r.grad.sum() +
          ab.alpha * (1.0 - 1.0 / r.p) * r.weighted_interaction) /
         denom;
}

Real functional_T(const FunctionalReport& r) {
  const int N = r.dim;
  const Real p = r.p;
  const Real coeff = (N / 8.0) * (1.0 - 1.0 / p - 2.0 / (N * p));
  return 0.5 * r.mass.sum() + coeff * r.weighted_interaction;
}

Real gn_ratio(const FunctionalReport& r) {
  const Real g = r.grad.sum();
  const Real mss = r.mass.sum();
  if (!(g > 0.0) || !(mss > 0.0)) throw ZeroField("gn_ratio requires a nonzero field");
  const int N = r.dim;
  const Real p = r.p;
  const Real eg = 0.5 * N * (p - 1.0);
  const Real em = 0.5 * (N - p * (N - 2.0));
  return r.plain_interaction / (std::pow(g, eg) * std::pow(mss, em));
}

Real action_under_scaling(const FunctionalReport& r, const AlphaBeta& ab, Real lambda) {
  const Real a = ab.alpha, b = ab.beta;
  const int N = r.dim;
  const Real p = r.p;
  const Real eg = std::exp((2.0 * a + (N - 2) * b) * lambda);
  const Real em = std::exp((2.0 * a + N * b) * lambda);
  const Real ei = std::exp((2.0 * p * a + N * b) * lambda);
  return 0.5 * (eg * r.grad.sum() + em * r.mass.sum()) -
         ei * r.weighted_interaction / (2.0 * p);
}

Real action_under_dilation(const FunctionalReport& r, Real lambda) {
  const Real p = r.p;
  const Real li = std::pow(lambda, r.dim * (p - 1.0));
  return 0.5 * (lambda * lambda * r.grad.sum() + r.mass.sum()) -
         li * r.weighted_interaction / (2.0 * p);
}

Real sum_q_under_dilation(const FunctionalReport& r, Real lambda) {
  const Real p = r.p;
  const Real li = std::pow(lambda, r.dim * (p - 1.0));
  return (2.0 / r.dim) * lambda * lambda * r.grad.sum() -
         (1.0 - 1.0 / p) * li * r.weighted_interaction;
}

Real t_under_amplitude(const FunctionalReport& r, Real lambda) {
  const int N = r.dim;
  const Real p = r.p;
  const Real coeff = (N / 8.0) * (1.0 - 1.0 / p - 2.0 / (N * p));
  return 0.5 * lambda * lambda * r.mass.sum() +
         coeff * std::pow(lambda, 2.0 * p) * r.weighted_interaction;
}

}  // namespace cnls
