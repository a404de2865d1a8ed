#include "cnls/evolution.hpp"

#include <cmath>
#include <fstream>

#include "cnls/errors.hpp"
#include "cnls/functionals.hpp"
#include "cnls/interp.hpp"
#include "cnls/manifest.hpp"
#include "cnls/operators.hpp"
#include "cnls/spectral.hpp"

namespace cnls {

namespace {

// Phase rates V_j = sum_k a_jk |u_k|^p |u_j|^(p-2); the |u_j|^(p-2) factor
// is taken as zero where u_j vanishes (only relevant for p < 2).
void nonlinear_phase_rates(const BoxField& u, const SystemParams& params,
                           std::vector<ArrayXr>& rho, std::vector<ArrayXr>& rate) {
  const int m = u.components();
  const Real p = params.p;
  for (int j = 0; j < m; ++j) rho[j] = u.comps[j].abs2();
  for (int j = 0; j < m; ++j) {
    ArrayXr coupled = ArrayXr::Zero(u.grid.size());
    for (int k = 0; k < m; ++k)
      coupled += params.coupling(j, k) * rho[k].pow(0.5 * p);
    if (p >= 2.0) {
      rate[j] = coupled * rho[j].pow(0.5 * (p - 2.0));
    } else {
      rate[j] = (rho[j] > 0.0)
                    .select(coupled * rho[j].pow(0.5 * (p - 2.0)),
                            ArrayXr::Zero(u.grid.size()));
    }
  }
}

void apply_nonlinear(BoxField& u, const SystemParams& params, Real dt,
                     std::vector<ArrayXr>& rho, std::vector<ArrayXr>& rate) {
  nonlinear_phase_rates(u, params, rho, rate);
  for (int j = 0; j < u.components(); ++j)
    u.comps[j] *= (Complex(0, dt) * rate[j]).exp();
}

void apply_linear(BoxField& u, const SpectralTransform& fft, const ArrayXc& phase) {
  for (auto& c : u.comps) {
    fft.forward(c);
    c *= phase;
    fft.inverse(c);
  }
}

ArrayXc linear_phase(const ArrayXr& k2, Real dt) {
  return (Complex(0, -dt) * k2).exp();
}

struct RowAccumulator {
  const SystemParams& params;
  const SpectralTransform& fft;
  ArrayXr k2, r2;
  Real cell;
  Real inv_total;
  Real half_box_sq;

  RowAccumulator(const CartesianGrid& grid, const SystemParams& p,
                 const SpectralTransform& f)
      : params(p),
        fft(f),
        k2(grid.squared_wavenumbers()),
        r2(grid.squared_radii()),
        cell(grid.cell_volume()),
        inv_total(1.0 / static_cast<Real>(grid.size())),
        half_box_sq(0.25 * grid.half_extent * grid.half_extent) {}

  TraceRow compute(const BoxField& u, Real t, Real loc_tol) const {
    const int m = u.components();
    TraceRow row;
    row.t = t;
    row.mass = ArrayXr::Zero(m);
    row.grad = ArrayXr::Zero(m);
    Real tail = 0, total = 0, wint = 0;
    std::vector<ArrayXr> rho(m);
    for (int j = 0; j < m; ++j) {
      rho[j] = u.comps[j].abs2();
      row.mass[j] = cell * rho[j].sum();
      row.variance += cell * (r2 * rho[j]).sum();
      tail += (r2 > half_box_sq).select(rho[j], ArrayXr::Zero(rho[j].size())).sum();
      total += rho[j].sum();
      ArrayXc spec = u.comps[j];
      fft.forward(spec);
      row.grad[j] = cell * inv_total * (k2 * spec.abs2()).sum();
    }
    const Real ph = 0.5 * params.p;
    for (int j = 0; j < m; ++j)
      for (int k = j; k < m; ++k) {
        const Real pjk = cell * (rho[j].pow(ph) * rho[k].pow(ph)).sum();
        wint += params.coupling(j, k) * pjk * (j == k ? 1.0 : 2.0);
      }
    row.energy = 0.5 * row.grad.sum() - wint / (2.0 * params.p);
    row.k_virial = (2.0 / params.dim) * row.grad.sum() -
                   (1.0 - 1.0 / params.p) * wint;
    row.flag = (total > 0 && tail / total > loc_tol) ? 1 : 0;
    return row;
  }
};

}  // namespace

Real EvolutionTrace::row_weighted_interaction(const TraceRow& row,
                                              const SystemParams& p) {
  return ((2.0 / p.dim) * row.grad.sum() - row.k_virial) / (1.0 - 1.0 / p.p);
}

BoxField step(const BoxField& u, const SystemParams& params, Real dt) {
  require_finite(u, "step");
  require_dynamics_dimension(params);
  BoxField out = u;
  SpectralTransform fft(u.grid);
  const ArrayXc half = linear_phase(u.grid.squared_wavenumbers(), 0.5 * dt);
  std::vector<ArrayXr> rho(u.components()), rate(u.components());
  apply_linear(out, fft, half);
  apply_nonlinear(out, params, dt, rho, rate);
  apply_linear(out, fft, half);
  if (!all_finite(out)) throw PoisonedState("non-finite sample after step");
  return out;
}

EvolutionTrace evolve(const BoxField& u0, const SystemParams& params,
                      const EvolutionConfig& cfg, BoxField* final_state) {
  require_finite(u0, "evolve");
  require_dynamics_dimension(params);
  if (!(cfg.dt > 0)) throw ConfigError("evolution requires dt > 0");
  if (!(cfg.gamma_blow > 1)) throw ConfigError("gamma_blow must exceed 1");

  const long total_steps = std::lround(cfg.t_end / cfg.dt);
  const int stride = std::max(1, cfg.stride);
  SpectralTransform fft(u0.grid);
  RowAccumulator acc(u0.grid, params, fft);
  const ArrayXc half = linear_phase(acc.k2, 0.5 * cfg.dt);
  const ArrayXc full = linear_phase(acc.k2, cfg.dt);

  EvolutionTrace trace;
  trace.components = u0.components();
  BoxField u = u0;
  std::vector<ArrayXr> rho(u.components()), rate(u.components());

  TraceRow first = acc.compute(u, 0.0, cfg.localization_tol);
  const Real grad0 = first.grad.sum();
  const Real energy0 = first.energy;
  const Real energy_scale = std::max(std::abs(energy0), Real(1e-30));
  trace.rows.push_back(std::move(first));

  long done = 0;
  while (done < total_steps) {
    const long burst = std::min<long>(stride, total_steps - done);
    // fused Strang burst: L(dt/2) [N L]^(burst-1) N L(dt/2)
    apply_linear(u, fft, half);
    for (long s = 0; s < burst; ++s) {
      apply_nonlinear(u, params, cfg.dt, rho, rate);
      if (s + 1 < burst) apply_linear(u, fft, full);
    }
    apply_linear(u, fft, half);
    done += burst;
    const Real t = cfg.dt * static_cast<Real>(done);

    if (!all_finite(u)) {
      trace.verdict = EvolutionVerdict::Poisoned;
      trace.t_star = t;
      break;
    }
    TraceRow row = acc.compute(u, t, cfg.localization_tol);
    const Real grad_total = row.grad.sum();
    const Real drift = std::abs(row.energy - energy0) / energy_scale;
    trace.rows.push_back(std::move(row));
    if (grad_total > cfg.gamma_blow * grad0 || drift > cfg.delta_energy) {
      trace.verdict = EvolutionVerdict::BlowupDetected;
      trace.t_star = t;
      break;
    }
  }
  if (final_state) *final_state = u;
  return trace;
}

VirialReport virial_check(const EvolutionTrace& trace, const SystemParams& params) {
  const auto& rows = trace.rows;
  if (rows.size() < 5)
    throw InsufficientRows("virial check needs at least 5 diagnostic rows");
  const Real dt = rows[1].t - rows[0].t;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::abs(rows[i].t - rows[i - 1].t - dt) > 1e-9 * dt)
      throw InsufficientRows("virial check needs uniformly spaced rows");

  const int N = params.dim;
  const Real p = params.p;
  VirialReport report;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    if (rows[i - 1].flag || rows[i].flag || rows[i + 1].flag) {
      ++report.rows_flagged;
      continue;
    }
    const Real q2 =
        (rows[i + 1].variance - 2 * rows[i].variance + rows[i - 1].variance) /
        (dt * dt);
    const Real grad = rows[i].grad.sum();
    const Real wint = EvolutionTrace::row_weighted_interaction(rows[i], params);
    const Real rhs = grad - N * (p - 1) / (2 * p) * wint;
    const Real scale = grad + std::abs(N * (p - 1) / (2 * p) * wint);
    if (scale <= 0) continue;
    report.max_rel_defect =
        std::max(report.max_rel_defect, std::abs(q2 / 8.0 - rhs) / scale);
    ++report.rows_scored;
  }
  return report;
}

void save_trace(const std::string& path, const EvolutionTrace& trace,
                const std::vector<std::string>& config_echo) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open trace file " + path);
  for (const std::string& line : config_echo) out << "# config: " << line << "\n";
  out << "# verdict: ";
  switch (trace.verdict) {
    case EvolutionVerdict::Completed: out << "completed"; break;
    case EvolutionVerdict::BlowupDetected:
      out << "blowup_detected t_star=" << format_real(trace.t_star);
      break;
    case EvolutionVerdict::Poisoned:
      out << "poisoned t=" << format_real(trace.t_star);
      break;
  }
  out << "\n";
  const int m = trace.components;
  out << "t";
  for (int j = 1; j <= m; ++j) out << ",M_" << j;
  out << ",E";
  for (int j = 1; j <= m; ++j) out << ",G_" << j;
  out << ",Q,K_virial,flag\n";
  for (const TraceRow& row : trace.rows) {
    out << format_real(row.t);
    for (int j = 0; j < m; ++j) out << "," << format_real(row.mass[j]);
    out << "," << format_real(row.energy);
    for (int j = 0; j < m; ++j) out << "," << format_real(row.grad[j]);
    out << "," << format_real(row.variance) << "," << format_real(row.k_virial)
        << "," << row.flag << "\n";
  }
}

BoxField embed_radial_profile(const RadialField& psi, const CartesianGrid& box) {
  if (psi.grid.dim != box.dim)
    throw ConfigError("profile and box dimensions differ");
  BoxField out(box, psi.components());
  const Eigen::Index total = box.size();
  Real x[8];
  for (int j = 0; j < psi.components(); ++j) {
    RadialInterpolant interp(psi.grid, psi.comps[j]);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      box.node_coords(idx, x);
      Real q = 0;
      for (int a = 0; a < box.dim; ++a) q += x[a] * x[a];
      out.comps[j][idx] = interp(std::sqrt(q));
    }
  }
  return out;
}

Real h1_distance(const RadialField& a, const RadialField& b) {
  if (!(a.grid == b.grid) || a.components() != b.components())
    throw ConfigError("h1_distance requires fields on one grid");
  Real acc = 0;
  for (int j = 0; j < a.components(); ++j) {
    const ArrayXc diff = a.comps[j] - b.comps[j];
    const ArrayXc ddiff = radial_derivative(a.grid, diff);
    acc += integrate(a.grid, diff.abs2()) + integrate(a.grid, ddiff.abs2());
  }
  return std::sqrt(acc);
}

}  // namespace cnls
