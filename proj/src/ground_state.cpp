#include "cnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>

#include <Eigen/Sparse>

#include "cnls/errors.hpp"
#include "cnls/operators.hpp"

namespace cnls {

namespace {

// sign(s) |s|^(p-1); the nonlinearity applied to component j is
// N_j = (sum_k a_jk |phi_k|^p) g(phi_j) / |phi_j|^? -- see `nonlinearity`.
inline Real signed_power(Real s, Real expo) {
  if (s == 0.0) return 0.0;
  return s > 0 ? std::pow(s, expo) : -std::pow(-s, expo);
}

struct FlowWorkspace {
  const RadialGrid& grid;
  const SystemParams& params;
  RadialLaplacianStencil stencil;
  std::vector<ArrayXr> pw;  // |phi_j|^p per component

  explicit FlowWorkspace(const RadialGrid& g, const SystemParams& prm)
      : grid(g), params(prm), stencil(radial_laplacian_stencil(g)) {
    pw.assign(prm.m, ArrayXr::Zero(g.n_r));
  }

  void update_powers(const std::vector<ArrayXr>& phi) {
    for (int j = 0; j < params.m; ++j) pw[j] = phi[j].abs().pow(params.p);
  }

  // N_j(phi) = (sum_k a_jk |phi_k|^p) sign(phi_j) |phi_j|^(p-1)
  ArrayXr nonlinearity(const std::vector<ArrayXr>& phi, int j) const {
    ArrayXr s = ArrayXr::Zero(grid.n_r);
    for (int k = 0; k < params.m; ++k) s += params.coupling(j, k) * pw[k];
    ArrayXr g(grid.n_r);
    for (Eigen::Index i = 0; i < grid.n_r; ++i)
      g[i] = signed_power(phi[j][i], params.p - 1.0);
    return s * g;
  }

  ArrayXr apply_laplacian(const ArrayXr& phi) const {
    const Eigen::Index n = grid.n_r;
    ArrayXr out(n);
    out[0] = stencil.diag[0] * phi[0] + stencil.upper[0] * phi[1];
    for (Eigen::Index i = 1; i < n - 1; ++i)
      out[i] = stencil.lower[i] * phi[i - 1] + stencil.diag[i] * phi[i] +
               stencil.upper[i] * phi[i + 1];
    out[n - 1] = stencil.lower[n - 1] * phi[n - 2] + stencil.diag[n - 1] * phi[n - 1];
    return out;
  }
};

// Thomas solver for (I - tau Lap), factored once.
struct SemiImplicitSolver {
  ArrayXr sub, diag, sup, cp;  // cp: modified upper coefficients
  Eigen::Index n;

  SemiImplicitSolver(const RadialLaplacianStencil& st, Real tau) {
    n = st.diag.size();
    sub = -tau * st.lower;
    diag = 1.0 - tau * st.diag.array();
    sup = -tau * st.upper;
    cp.resize(n);
    cp[0] = sup[0] / diag[0];
    for (Eigen::Index i = 1; i < n; ++i)
      cp[i] = sup[i] / (diag[i] - sub[i] * cp[i - 1]);
  }

  ArrayXr solve(const ArrayXr& rhs) const {
    ArrayXr d(n);
    d[0] = rhs[0] / diag[0];
    for (Eigen::Index i = 1; i < n; ++i)
      d[i] = (rhs[i] - sub[i] * d[i - 1]) / (diag[i] - sub[i] * cp[i - 1]);
    ArrayXr x(n);
    x[n - 1] = d[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d[i] - cp[i] * x[i + 1];
    return x;
  }
};

struct StationaryResidual {
  Real sup = 0;
  Real omega = 0;  // Rayleigh quotient
};

StationaryResidual stationary_residual(FlowWorkspace& ws,
                                       const std::vector<ArrayXr>& phi) {
  ws.update_powers(phi);
  const int m = ws.params.m;
  Real mass = 0, num = 0;
  std::vector<ArrayXr> lap(m), nl(m);
  for (int j = 0; j < m; ++j) {
    lap[j] = ws.apply_laplacian(phi[j]);
    nl[j] = ws.nonlinearity(phi, j);
    mass += (ws.grid.w * phi[j].square()).sum();
    num += (ws.grid.w * phi[j] * (lap[j] + nl[j])).sum();
  }
  StationaryResidual out;
  out.omega = mass > 0 ? num / mass : 0.0;
  for (int j = 0; j < m; ++j)
    out.sup = std::max(out.sup,
                       (lap[j] - out.omega * phi[j] + nl[j]).abs().maxCoeff());
  return out;
}

// Scalar functionals of the real iterate, used for the per-step action record.
struct FlowScalars {
  Real mass = 0, grad = 0, inter = 0;  // sum M_j, sum G_j, sum a_jk P_jk
};

FlowScalars flow_scalars(const FlowWorkspace& ws, const std::vector<ArrayXr>& phi) {
  FlowScalars f;
  const int m = ws.params.m;
  const Real h = ws.grid.spacing();
  const Eigen::Index n = ws.grid.n_r;
  for (int j = 0; j < m; ++j) {
    f.mass += (ws.grid.w * phi[j].square()).sum();
    ArrayXr d(n);
    d[0] = 0;
    for (Eigen::Index i = 1; i < n - 1; ++i)
      d[i] = (phi[j][i + 1] - phi[j][i - 1]) / (2 * h);
    d[n - 1] = (phi[j][n - 1] - phi[j][n - 2]) / h;
    f.grad += (ws.grid.w * d.square()).sum();
    for (int k = 0; k < m; ++k)
      f.inter +=
          ws.params.coupling(j, k) * (ws.grid.w * ws.pw[j] * ws.pw[k]).sum();
  }
  return f;
}

// S of the iterate rescaled to multiplier one (exact power laws).
Real normalized_action(const FlowScalars& f, const SystemParams& prm, Real omega) {
  if (!(omega > 0)) return std::numeric_limits<Real>::quiet_NaN();
  const Real p = prm.p;
  const int N = prm.dim;
  const Real em = std::pow(omega, 0.5 * N - 1.0 / (p - 1));
  const Real eg = std::pow(omega, 0.5 * N - 1.0 - 1.0 / (p - 1));
  const Real ei = std::pow(omega, 0.5 * N - p / (p - 1));
  return 0.5 * (em * f.mass + eg * f.grad) - ei * f.inter / (2 * p);
}

struct NewtonOutcome {
  Real omega;
  Real residual;
  int iterations;
};

/**
 * Damped Newton iteration on the discrete system
 *   Lap phi_j - omega phi_j + N_j(phi) = 0,   sum_j M_j(phi) = M0,
 * with unknowns (phi, omega).  The Jacobian couples components pointwise
 * through the nonlinearity and radially through the tridiagonal stencil.
 */
NewtonOutcome newton_polish(FlowWorkspace& ws, std::vector<ArrayXr>& phi,
                            Real omega0, int max_iters) {
  using Trip = Eigen::Triplet<Real>;
  const int m = ws.params.m;
  const Eigen::Index n = ws.grid.n_r;
  const Eigen::Index dofs = m * n + 1;
  const Real p = ws.params.p;
  const MatrixXr& A = ws.params.coupling;

  Real mass0 = 0;
  for (int j = 0; j < m; ++j) mass0 += (ws.grid.w * phi[j].square()).sum();

  auto residual_vec = [&](const std::vector<ArrayXr>& f, Real om,
                          Eigen::VectorXd& out) {
    ws.update_powers(f);
    for (int j = 0; j < m; ++j) {
      ArrayXr r = ws.apply_laplacian(f[j]) - om * f[j] + ws.nonlinearity(f, j);
      out.segment(j * n, n) = r.matrix();
    }
    Real mass = 0;
    for (int j = 0; j < m; ++j) mass += (ws.grid.w * f[j].square()).sum();
    out[m * n] = mass - mass0;
  };

  Eigen::VectorXd F(dofs), Fnew(dofs);
  Real omega = omega0;
  residual_vec(phi, omega, F);
  Real fnorm = F.lpNorm<Eigen::Infinity>();
  int iters = 0;

  std::vector<Trip> trips;
  Eigen::SparseMatrix<Real> J(dofs, dofs);
  Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;

  for (; iters < max_iters && fnorm > 1e-13; ++iters) {
    trips.clear();
    ws.update_powers(phi);
    for (int j = 0; j < m; ++j) {
      const Eigen::Index base = j * n;
      // radial stencil
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i > 0) trips.emplace_back(base + i, base + i - 1, ws.stencil.lower[i]);
        if (i < n - 1)
          trips.emplace_back(base + i, base + i + 1, ws.stencil.upper[i]);
      }
      // diagonal and pointwise coupling
      ArrayXr srow = ArrayXr::Zero(n);
      for (int k = 0; k < m; ++k) srow += A(j, k) * ws.pw[k];
      for (Eigen::Index i = 0; i < n; ++i) {
        const Real s = phi[j][i];
        const Real gp = std::abs(s) < 1e-60 ? 0.0
                                            : (p - 1) * std::pow(std::abs(s), p - 2);
        const Real gj = signed_power(s, p - 1);
        Real dNdphi = srow[i] * gp + p * A(j, j) * gj * gj;
        trips.emplace_back(base + i, base + i,
                           ws.stencil.diag[i] - omega + dNdphi);
        for (int k = 0; k < m; ++k) {
          if (k == j) continue;
          const Real gk = signed_power(phi[k][i], p - 1);
          trips.emplace_back(base + i, k * n + i, p * A(j, k) * gk * gj);
        }
        // d/d omega
        trips.emplace_back(base + i, m * n, -s);
        // mass row
        trips.emplace_back(m * n, base + i, 2.0 * ws.grid.w[i] * s);
      }
    }
    trips.emplace_back(m * n, m * n, 0.0);
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw NoConvergence("Newton polish: singular Jacobian");
    Eigen::VectorXd delta = lu.solve(-F);

    // backtracking line search on the sup-norm
    Real step = 1.0;
    std::vector<ArrayXr> cand(m);
    for (int back = 0; back < 12; ++back, step *= 0.5) {
      for (int j = 0; j < m; ++j)
        cand[j] = phi[j] + step * delta.segment(j * n, n).array();
      const Real omega_c = omega + step * delta[m * n];
      residual_vec(cand, omega_c, Fnew);
      if (Fnew.lpNorm<Eigen::Infinity>() < fnorm || step < 1e-3) {
        phi = cand;
        omega = omega_c;
        F = Fnew;
        break;
      }
    }
    const Real fnew = F.lpNorm<Eigen::Infinity>();
    if (fnew >= fnorm * (1 - 1e-12) && fnew > 1e-12) break;  // stall
    fnorm = fnew;
  }
  return {omega, fnorm, iters};
}

std::vector<ArrayXr> build_seed(const RadialGrid& grid, const SystemParams& prm,
                                const GroundStateConfig& cfg) {
  std::vector<ArrayXr> phi(prm.m, ArrayXr::Zero(grid.n_r));
  for (int j = 0; j < prm.m; ++j) {
    if (cfg.semitrivial_seed && j > 0) continue;
    Real width = 1.2 * (1.0 + 0.15 * j);
    if (static_cast<int>(cfg.seed_widths.size()) > j && cfg.seed_widths[j] > 0)
      width = cfg.seed_widths[j];
    Real amp = 1.0;
    if (static_cast<int>(cfg.seed_amplitudes.size()) > j) amp = cfg.seed_amplitudes[j];
    phi[j] = amp * (-grid.r.square() / (2 * width * width)).exp();
  }
  return phi;
}

}  // namespace

GroundStateResult solve_ground_state(const SystemParams& params,
                                     const GroundStateConfig& cfg) {
  const SystemParams prm = validate_params(params);
  const RadialGrid grid = RadialGrid::make(prm.dim, cfg.n_r, cfg.radius);
  FlowWorkspace ws(grid, prm);
  const SemiImplicitSolver implicit_solver(ws.stencil, cfg.tau);

  std::vector<ArrayXr> phi = build_seed(grid, prm, cfg);
  ArrayXr comp_mass(prm.m);
  for (int j = 0; j < prm.m; ++j) comp_mass[j] = (grid.w * phi[j].square()).sum();
  Real target = cfg.target_mass > 0 ? cfg.target_mass : comp_mass.sum();
  ArrayXr target_per = comp_mass;
  if (cfg.target_mass > 0 && cfg.mass_mode == GroundStateConfig::MassMode::Total)
    target_per *= cfg.target_mass / comp_mass.sum();

  if (!(target > 0)) throw CollapseToZero("seed has no mass");

  GroundStateResult out;
  std::deque<Real> omega_window;
  Real omega_smooth = 0;
  Real best_res = std::numeric_limits<Real>::infinity();
  std::vector<ArrayXr> best_phi = phi;
  int since_best = 0;
  int step_count = 0;

  for (; step_count < cfg.max_iters; ++step_count) {
    // semi-implicit flow step
    ws.update_powers(phi);
    std::vector<ArrayXr> next(prm.m);
    for (int j = 0; j < prm.m; ++j)
      next[j] = implicit_solver.solve(phi[j] + cfg.tau * ws.nonlinearity(phi, j));

    // mass renormalization; the factor carries the multiplier estimate
    Real factor = 1.0;
    if (cfg.mass_mode == GroundStateConfig::MassMode::Total) {
      Real mass = 0;
      for (int j = 0; j < prm.m; ++j) mass += (grid.w * next[j].square()).sum();
      if (!std::isfinite(mass) || mass <= 0)
        throw CollapseToZero("mass renormalization diverged");
      factor = target / mass;
      const Real c = std::sqrt(factor);
      for (int j = 0; j < prm.m; ++j) next[j] *= c;
    } else {
      Real fmin = std::numeric_limits<Real>::infinity();
      for (int j = 0; j < prm.m; ++j) {
        const Real mass = (grid.w * next[j].square()).sum();
        if (target_per[j] <= 0) continue;
        if (!std::isfinite(mass) || mass <= 0)
          throw CollapseToZero("mass renormalization diverged");
        const Real fj = target_per[j] / mass;
        next[j] *= std::sqrt(fj);
        fmin = std::min(fmin, fj);
      }
      factor = fmin;
    }
    phi = std::move(next);

    const Real omega_step = -std::log(factor) / (2 * cfg.tau);
    omega_window.push_back(omega_step);
    if (omega_window.size() > 20) omega_window.pop_front();
    omega_smooth = std::accumulate(omega_window.begin(), omega_window.end(), 0.0) /
                   omega_window.size();

    const StationaryResidual res = stationary_residual(ws, phi);
    out.action_history.push_back(
        normalized_action(flow_scalars(ws, phi), prm, omega_smooth));

    if (res.sup < best_res) {
      best_res = res.sup;
      best_phi = phi;
      since_best = 0;
    } else if (++since_best > 200) {
      break;  // stagnation: keep the best iterate
    }
    Real scale = 1;
    for (int j = 0; j < prm.m; ++j) scale = std::max(scale, phi[j].abs().maxCoeff());
    if (res.sup < cfg.newton_switch_res * scale && step_count > 20) break;
  }
  out.iterations = step_count;
  phi = best_phi;

  // Multiplier: the Rayleigh quotient of the best iterate seeds the polish;
  // the smoothed renormalization factor is the flow-level estimate.
  StationaryResidual res = stationary_residual(ws, phi);
  Real omega = res.omega;
  if (cfg.newton_polish) {
    const NewtonOutcome nw = newton_polish(ws, phi, omega, cfg.newton_max_iters);
    omega = nw.omega;
    out.newton_iterations = nw.iterations;
  } else if (omega_smooth != 0) {
    omega = omega_smooth;
  }
  if (!(omega > 0)) throw NegativeOmega("extracted multiplier is not positive");
  out.omega = omega;

  // Multiplier normalization phi(x) -> omega^(-1/(2p-2)) phi(x / sqrt(omega)),
  // realized as a rescaling of the grid itself: the profile samples now live
  // at radii sqrt(omega) r_i, which is again a uniform grid.
  const Real amp = std::pow(omega, -1.0 / (2 * prm.p - 2));
  const RadialGrid out_grid =
      RadialGrid::make(prm.dim, grid.n_r, std::sqrt(omega) * grid.radius);
  out.profile = RadialField(out_grid, prm.m);
  for (int j = 0; j < prm.m; ++j)
    out.profile.comps[j] = (amp * phi[j]).cast<Complex>();

  // Residual of the unit-multiplier equation on the output grid.
  {
    FlowWorkspace ws_out(out.profile.grid, prm);
    std::vector<ArrayXr> psi(prm.m);
    for (int j = 0; j < prm.m; ++j) psi[j] = out.profile.comps[j].real();
    ws_out.update_powers(psi);
    Real sup = 0;
    for (int j = 0; j < prm.m; ++j)
      sup = std::max(sup, (ws_out.apply_laplacian(psi[j]) - psi[j] +
                           ws_out.nonlinearity(psi, j))
                              .abs()
                              .maxCoeff());
    out.residual = sup;
  }
  if (!(out.residual <= cfg.eps_res))
    throw NoConvergence("residual " + std::to_string(out.residual) +
                        " stagnated above eps_res");

  const FunctionalReport report = compute_report(out.profile, prm);
  out.level = report.action;
  out.component_masses = report.mass;
  out.pohozaev_defects =
      pohozaev_defects(report, default_alpha_beta_set(prm.dim));
  return out;
}

std::vector<std::pair<AlphaBeta, Real>> pohozaev_defects(
    const FunctionalReport& report, const std::vector<AlphaBeta>& test_set) {
  std::vector<std::pair<AlphaBeta, Real>> out;
  const int N = report.dim;
  const Real p = report.p;
  for (const AlphaBeta& ab : test_set) {
    const Real a = ab.alpha, b = ab.beta;
    const Real scale =
        0.5 * (std::abs(2 * a + (N - 2) * b) * report.grad.sum() +
               std::abs(2 * a + N * b) * report.mass.sum()) +
        std::abs(2 * p * a + N * b) / (2 * p) * report.weighted_interaction;
    const Real k = constraint_value(report, ab);
    out.emplace_back(ab, scale > 0 ? std::abs(k) / scale : 0.0);
  }
  return out;
}

std::vector<std::pair<AlphaBeta, Real>> verify_pohozaev(
    const GroundStateResult& result, const SystemParams& params,
    const std::vector<AlphaBeta>& test_set) {
  return pohozaev_defects(compute_report(result.profile, params), test_set);
}

std::vector<MuSweepPoint> mu_sweep(int dim, Real p, const std::vector<Real>& mu_diag,
                                   const std::vector<Real>& mus,
                                   const GroundStateConfig& cfg, int jobs) {
  const int m = static_cast<int>(mu_diag.size());
  if (m < 2) throw ConfigError("mu sweep requires at least two components");

  auto run_point = [&](Real mu) {
    MuSweepPoint point;
    point.mu = mu;
    MatrixXr A(m, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) A(j, k) = j == k ? mu_diag[j] : mu;
    const SystemParams params = validate_params(dim, p, m, A);

    GroundStateResult vec, semi;
    try {
      GroundStateConfig c = cfg;
      c.semitrivial_seed = false;
      vec = solve_ground_state(params, c);
      point.vector_ok = true;
      point.vector_action = vec.level;
    } catch (const Error& e) {
      point.error = e.what();
    }
    try {
      GroundStateConfig c = cfg;
      c.semitrivial_seed = true;
      semi = solve_ground_state(params, c);
      point.semitrivial_ok = true;
      point.semitrivial_action = semi.level;
    } catch (const Error& e) {
      point.error = e.what();
    }
    if (!point.vector_ok && !point.semitrivial_ok) return point;
    point.selected_vector =
        point.vector_ok &&
        (!point.semitrivial_ok || point.vector_action <= point.semitrivial_action);
    const GroundStateResult& sel = point.selected_vector ? vec : semi;
    point.selected_action = sel.level;
    point.selected_masses = sel.component_masses;
    return point;
  };

  std::vector<MuSweepPoint> points(mus.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < mus.size(); ++i) points[i] = run_point(mus[i]);
  } else {
    std::vector<std::future<MuSweepPoint>> futs;
    futs.reserve(mus.size());
    for (Real mu : mus)
      futs.push_back(std::async(std::launch::async, run_point, mu));
    for (std::size_t i = 0; i < futs.size(); ++i) points[i] = futs[i].get();
  }
  return points;
}

}  // namespace cnls
