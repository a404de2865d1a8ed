// Command-line laboratory for the focusing coupled NLS system: ground
// states, split-step evolution, potential-well classification, standing-wave
// instability runs and the identity check suite.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cnls/checks.hpp"
#include "cnls/errors.hpp"
#include "cnls/manifest.hpp"
#include "cnls/potential_well.hpp"
#include "cnls/run_config.hpp"
#include "cnls/scaling.hpp"

namespace fs = std::filesystem;
using namespace cnls;

namespace {

struct CommandContext {
  RunConfig cfg;
  fs::path out_dir;
  int jobs = 1;
};

CommandContext make_context(const std::string& command, const std::string& config_path,
                            const std::string& out_override, int jobs_override) {
  CommandContext ctx{RunConfig::parse_file(config_path), {}, 1};
  ctx.cfg.require_known(allowed_keys(command));
  ctx.out_dir = out_override.empty() ? ctx.cfg.get_string_or("output.dir", ".")
                                     : out_override;
  fs::create_directories(ctx.out_dir);
  ctx.jobs = jobs_override > 0
                 ? jobs_override
                 : static_cast<int>(ctx.cfg.get_int_or("jobs", 1));
  return ctx;
}

void append_config(std::vector<ManifestEntry>& entries, const RunConfig& cfg) {
  for (const std::string& line : cfg.echo()) {
    const auto eq = line.find(" = ");
    entries.emplace_back("config." + line.substr(0, eq), line.substr(eq + 3));
  }
}

void append_alpha_beta(std::vector<ManifestEntry>& entries, const std::string& prefix,
                       const std::vector<std::pair<AlphaBeta, Real>>& values) {
  for (const auto& [ab, value] : values) {
    std::ostringstream key;
    key << prefix << "(" << format_real(ab.alpha) << "," << format_real(ab.beta)
        << ")";
    entries.emplace_back(key.str(), format_real(value));
  }
}

// Loads a persisted ground state and checks it against the problem block.
LoadedProfile load_ground_state(const RunConfig& cfg) {
  if (!cfg.has("ground_state.file"))
    throw MissingDependency("ground_state.file is required");
  const std::string path = cfg.get_string("ground_state.file");
  if (!fs::exists(path))
    throw MissingDependency("ground-state file not found: " + path);
  LoadedProfile loaded = load_profile(path);
  const SystemParams fromcfg = params_from_config(cfg);
  if (fromcfg.dim != loaded.params.dim || fromcfg.m != loaded.params.m ||
      fromcfg.p != loaded.params.p ||
      !(fromcfg.coupling.array() == loaded.params.coupling.array()).all())
    throw ConfigError("problem block does not match the ground-state file");
  return loaded;
}

int cmd_ground(const CommandContext& ctx) {
  const SystemParams params = params_from_config(ctx.cfg);
  const GroundStateConfig sc = solver_from_config(ctx.cfg);
  const GroundStateResult result = solve_ground_state(params, sc);

  const fs::path profile_path =
      ctx.out_dir / ctx.cfg.get_string_or("output.profile", "ground_state.txt");
  save_profile(profile_path.string(), result, params, ctx.cfg.echo());

  std::vector<ManifestEntry> entries;
  entries.emplace_back("command", "ground");
  append_config(entries, ctx.cfg);
  entries.emplace_back("level", format_real(result.level));
  entries.emplace_back("residual", format_real(result.residual));
  entries.emplace_back("omega", format_real(result.omega));
  entries.emplace_back("iterations", std::to_string(result.iterations));
  for (int j = 0; j < params.m; ++j)
    entries.emplace_back("mass_" + std::to_string(j),
                         format_real(result.component_masses[j]));
  append_alpha_beta(entries, "pohozaev_defect", result.pohozaev_defects);
  entries.emplace_back("profile_file", profile_path.string());
  entries.emplace_back("profile_hash", file_hash(profile_path.string()));
  write_manifest((ctx.out_dir / "ground_manifest.txt").string(), entries);

  std::cout << "level m = " << format_real(result.level)
            << "\nresidual = " << format_real(result.residual)
            << "\nomega = " << format_real(result.omega) << "\n";
  for (const auto& [ab, defect] : result.pohozaev_defects)
    std::cout << "pohozaev defect (" << ab.alpha << "," << ab.beta
              << ") = " << format_real(defect) << "\n";
  return 0;
}

int cmd_evolve(const CommandContext& ctx) {
  const SystemParams params = params_from_config(ctx.cfg);
  const CartesianGrid box = box_from_config(ctx.cfg, params.dim);
  const EvolutionConfig ec = evolution_from_config(ctx.cfg);
  const std::string initial = ctx.cfg.get_string_or("evolve.initial", "gaussian");

  BoxField u0;
  if (initial == "gaussian") {
    const std::vector<Real> amp =
        ctx.cfg.has("evolve.amplitude") ? ctx.cfg.get_reals("evolve.amplitude")
                                        : std::vector<Real>{1.0};
    const Real width = ctx.cfg.get_real_or("evolve.width", 1.0);
    u0 = sample_box(box, params.m, [&](int j, const Real* x) {
      Real q = 0;
      for (int a = 0; a < box.dim; ++a) q += x[a] * x[a];
      const Real a = amp[std::min<std::size_t>(j, amp.size() - 1)];
      return Complex(a * std::exp(-q / (2 * width * width)), 0.0);
    });
  } else if (initial == "ground") {
    const LoadedProfile loaded = load_ground_state(ctx.cfg);
    RadialField psi = loaded.result.profile;
    const Real lambda = ctx.cfg.get_real_or("evolve.dilation", 1.0);
    if (lambda != 1.0) psi = rescale(psi, ScalingLaw::mass_preserving(lambda));
    const Real amp = ctx.cfg.get_real_or("evolve.amplitude", 1.0);
    if (amp != 1.0)
      for (auto& c : psi.comps) c *= amp;
    u0 = embed_radial_profile(psi, box);
  } else {
    throw ConfigError("evolve.initial must be gaussian or ground");
  }

  const EvolutionTrace trace = evolve(u0, params, ec);
  const fs::path trace_path =
      ctx.out_dir / ctx.cfg.get_string_or("output.trace", "trace.csv");
  save_trace(trace_path.string(), trace, ctx.cfg.echo());

  std::vector<ManifestEntry> entries;
  entries.emplace_back("command", "evolve");
  append_config(entries, ctx.cfg);
  entries.emplace_back("verdict", trace.verdict == EvolutionVerdict::Completed
                                      ? "completed"
                                      : trace.verdict == EvolutionVerdict::BlowupDetected
                                            ? "blowup_detected"
                                            : "poisoned");
  if (trace.verdict != EvolutionVerdict::Completed)
    entries.emplace_back("t_star", format_real(trace.t_star));
  entries.emplace_back("rows", std::to_string(trace.rows.size()));
  if (!trace.rows.empty()) {
    const TraceRow& first = trace.rows.front();
    const TraceRow& last = trace.rows.back();
    entries.emplace_back("mass_drift",
                         format_real(std::abs(last.mass.sum() - first.mass.sum()) /
                                     first.mass.sum()));
    entries.emplace_back(
        "energy_drift",
        format_real(std::abs(last.energy - first.energy) /
                    std::max(std::abs(first.energy), Real(1e-30))));
  }
  entries.emplace_back("trace_file", trace_path.string());
  entries.emplace_back("trace_hash", file_hash(trace_path.string()));
  write_manifest((ctx.out_dir / "evolve_manifest.txt").string(), entries);

  std::cout << "verdict = "
            << (trace.verdict == EvolutionVerdict::Completed ? "completed"
                : trace.verdict == EvolutionVerdict::BlowupDetected
                    ? "blowup_detected"
                    : "poisoned")
            << "\n";
  return 0;
}

int cmd_classify(const CommandContext& ctx) {
  const LoadedProfile loaded = load_ground_state(ctx.cfg);
  const SystemParams& params = loaded.params;
  const std::vector<AlphaBeta> ab_set = ab_set_from_config(ctx.cfg, params.dim);

  RadialField state = loaded.result.profile;
  const Real lambda = ctx.cfg.get_real_or("classify.dilation", 1.0);
  if (lambda != 1.0) state = rescale(state, ScalingLaw::mass_preserving(lambda));
  const Real amp = ctx.cfg.get_real_or("classify.amplitude", 1.0);
  if (amp != 1.0)
    for (auto& c : state.comps) c *= amp;

  const Classification cls =
      classify(state, params, loaded.result.level, ab_set);

  std::vector<ManifestEntry> entries;
  entries.emplace_back("command", "classify");
  append_config(entries, ctx.cfg);
  entries.emplace_back("verdict", to_string(cls.verdict));
  entries.emplace_back("action", format_real(cls.action_value));
  entries.emplace_back("m_ref", format_real(cls.m_ref));
  append_alpha_beta(entries, "K", cls.constraints);
  entries.emplace_back("ground_state_hash",
                       file_hash(ctx.cfg.get_string("ground_state.file")));
  write_manifest((ctx.out_dir / "classify_manifest.txt").string(), entries);

  std::cout << "verdict = " << to_string(cls.verdict) << "\n";
  return 0;
}

int cmd_instability(const CommandContext& ctx) {
  const LoadedProfile loaded = load_ground_state(ctx.cfg);
  const SystemParams& params = loaded.params;
  const CartesianGrid box = box_from_config(ctx.cfg, params.dim);
  const EvolutionConfig ec = evolution_from_config(ctx.cfg);
  const std::vector<Real> lambdas = ctx.cfg.get_reals("experiment.lambdas");
  const std::vector<AlphaBeta> ab_set = ab_set_from_config(ctx.cfg, params.dim);

  const std::vector<InstabilityPoint> points =
      instability_experiment(loaded.result.profile, params, loaded.result.level,
                             lambdas, box, ec, ab_set, ctx.jobs);

  std::vector<ManifestEntry> entries;
  entries.emplace_back("command", "instability");
  append_config(entries, ctx.cfg);
  entries.emplace_back("ground_state_hash",
                       file_hash(ctx.cfg.get_string("ground_state.file")));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const InstabilityPoint& pt = points[i];
    const std::string prefix = "lambda_" + std::to_string(i) + ".";
    const fs::path trace_path =
        ctx.out_dir / ("trace_lambda_" + std::to_string(i) + ".csv");
    save_trace(trace_path.string(), pt.trace, ctx.cfg.echo());
    entries.emplace_back(prefix + "value", format_real(pt.lambda));
    entries.emplace_back(prefix + "h1_distance", format_real(pt.h1_distance));
    entries.emplace_back(prefix + "classification", to_string(pt.classification));
    entries.emplace_back(prefix + "outcome",
                         pt.outcome == EvolutionVerdict::BlowupDetected
                             ? "blowup_detected"
                             : pt.outcome == EvolutionVerdict::Completed
                                   ? "completed"
                                   : "poisoned");
    entries.emplace_back(prefix + "t_star", format_real(pt.t_star));
    entries.emplace_back(prefix + "trace_file", trace_path.string());
    entries.emplace_back(prefix + "trace_hash", file_hash(trace_path.string()));
    std::cout << "lambda = " << pt.lambda << ": "
              << to_string(pt.classification) << ", "
              << (pt.outcome == EvolutionVerdict::BlowupDetected
                      ? "blowup_detected at t* = " + format_real(pt.t_star)
                      : "completed")
              << ", |psi_l - psi|_H1 = " << format_real(pt.h1_distance) << "\n";
  }
  write_manifest((ctx.out_dir / "instability_manifest.txt").string(), entries);
  return 0;
}

int cmd_sweep_mu(const CommandContext& ctx) {
  const int dim = static_cast<int>(ctx.cfg.get_int("problem.N"));
  const Real p = ctx.cfg.get_real("problem.p");
  const int m = static_cast<int>(ctx.cfg.get_int("problem.m"));
  std::vector<Real> mu_diag(m, 1.0);
  if (ctx.cfg.has("experiment.mu_diag")) {
    mu_diag = ctx.cfg.get_reals("experiment.mu_diag");
    if (static_cast<int>(mu_diag.size()) != m)
      throw ConfigError("experiment.mu_diag must list m entries");
  }
  const std::vector<Real> mus = ctx.cfg.get_reals("experiment.mus");
  const GroundStateConfig sc = solver_from_config(ctx.cfg);

  const std::vector<MuSweepPoint> points =
      mu_sweep(dim, p, mu_diag, mus, sc, ctx.jobs);

  const fs::path table_path = ctx.out_dir / "sweep_mu.csv";
  {
    std::ofstream out(table_path);
    for (const std::string& line : ctx.cfg.echo()) out << "# config: " << line << "\n";
    out << "mu,vector_action,semitrivial_action,selected,selected_action,min_mass";
    for (int j = 0; j < m; ++j) out << ",M_" << j + 1;
    out << "\n";
    for (const MuSweepPoint& pt : points) {
      out << format_real(pt.mu) << ","
          << (pt.vector_ok ? format_real(pt.vector_action) : "nan") << ","
          << (pt.semitrivial_ok ? format_real(pt.semitrivial_action) : "nan")
          << "," << (pt.selected_vector ? "vector" : "semitrivial") << ","
          << format_real(pt.selected_action) << ","
          << format_real(pt.selected_masses.size() ? pt.selected_masses.minCoeff()
                                                   : 0.0);
      for (int j = 0; j < m; ++j)
        out << ","
            << format_real(j < pt.selected_masses.size() ? pt.selected_masses[j]
                                                         : 0.0);
      out << "\n";
    }
  }

  std::vector<ManifestEntry> entries;
  entries.emplace_back("command", "sweep-mu");
  append_config(entries, ctx.cfg);
  bool any_failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const MuSweepPoint& pt = points[i];
    const std::string prefix = "mu_" + std::to_string(i) + ".";
    entries.emplace_back(prefix + "value", format_real(pt.mu));
    entries.emplace_back(prefix + "selected",
                         pt.selected_vector ? "vector" : "semitrivial");
    entries.emplace_back(prefix + "selected_action", format_real(pt.selected_action));
    if (pt.selected_masses.size())
      entries.emplace_back(prefix + "min_mass",
                           format_real(pt.selected_masses.minCoeff()));
    if (!pt.error.empty()) {
      entries.emplace_back(prefix + "error", pt.error);
      if (!pt.vector_ok && !pt.semitrivial_ok) any_failed = true;
    }
    std::cout << "mu = " << pt.mu << ": selected "
              << (pt.selected_vector ? "vector" : "semitrivial") << ", S = "
              << pt.selected_action << ", min mass = "
              << (pt.selected_masses.size() ? pt.selected_masses.minCoeff() : 0.0)
              << "\n";
  }
  entries.emplace_back("table_file", table_path.string());
  entries.emplace_back("table_hash", file_hash(table_path.string()));
  write_manifest((ctx.out_dir / "sweep_mu_manifest.txt").string(), entries);
  if (any_failed) throw NoConvergence("at least one sweep point failed entirely");
  return 0;
}

int cmd_check(const CommandContext& ctx) {
  CheckOptions opts;
  opts.seed = static_cast<std::uint64_t>(ctx.cfg.get_int_or("seed", 1234));
  opts.fields = static_cast<int>(ctx.cfg.get_int_or("check.fields", 100));
  opts.box_n = static_cast<int>(ctx.cfg.get_int_or("grid.box.n", 128));
  opts.box_extent = ctx.cfg.get_real_or("grid.box.L", 12.0);
  opts.radial_n = ctx.cfg.get_int_or("grid.radial.n", 8192);
  opts.radial_extent = ctx.cfg.get_real_or("grid.radial.R", 16.0);
  const int failures = run_check_suites(opts, std::cout);
  if (failures > 0) throw Error(std::to_string(failures) + " check suites failed");
  return 0;
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::string& out_override, int jobs_override) {
  try {
    const CommandContext ctx =
        make_context(command, config_path, out_override, jobs_override);
    if (command == "ground") return cmd_ground(ctx);
    if (command == "evolve") return cmd_evolve(ctx);
    if (command == "classify") return cmd_classify(ctx);
    if (command == "instability") return cmd_instability(ctx);
    if (command == "sweep-mu") return cmd_sweep_mu(ctx);
    if (command == "check") return cmd_check(ctx);
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    std::cout << "error = ConfigError: " << e.what() << "\n";
    return 3;
  } catch (const MissingDependency& e) {
    std::cout << "error = MissingDependency: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << "error = " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the focusing coupled NLS system"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  int jobs = 0;

  for (const std::string name :
       {"ground", "evolve", "classify", "instability", "sweep-mu", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_override, "output directory override");
    sub->add_option("--jobs", jobs, "parallel jobs for sweep points");
  }

  CLI11_PARSE(app, argc, argv);
  return dispatch(app.get_subcommands().front()->get_name(), config_path,
                  out_override, jobs);
}
