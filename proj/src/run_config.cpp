#include "cnls/run_config.hpp"

#include <fstream>
#include <sstream>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not `key = value`: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        " has an empty key or value");
    if (!cfg.kv_.emplace(key, value).second)
      throw ConfigError("duplicate config key: " + key);
    cfg.echo_.push_back(key + " = " + value);
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string RunConfig::get_string_or(const std::string& key,
                                     const std::string& def) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

Real RunConfig::get_real(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t pos = 0;
  Real out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + v);
  }
  if (pos != v.size())
    throw ConfigError("config key " + key + " is not a number: " + v);
  return out;
}

Real RunConfig::get_real_or(const std::string& key, Real def) const {
  return has(key) ? get_real(key) : def;
}

long RunConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t pos = 0;
  long out;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer: " + v);
  }
  if (pos != v.size())
    throw ConfigError("config key " + key + " is not an integer: " + v);
  return out;
}

long RunConfig::get_int_or(const std::string& key, long def) const {
  return has(key) ? get_int(key) : def;
}

bool RunConfig::get_bool_or(const std::string& key, bool def) const {
  if (!has(key)) return def;
  const std::string v = get_string(key);
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + v);
}

std::vector<Real> RunConfig::get_reals(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<Real> out;
  std::string tok;
  while (in >> tok) {
    if (tok == ";") continue;
    if (!tok.empty() && tok.back() == ';') tok.pop_back();
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + " has a non-numeric entry: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("config key " + key + " is empty");
  return out;
}

void RunConfig::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : kv_)
    if (!allowed.count(key)) throw ConfigError("unknown config key: " + key);
}

SystemParams params_from_config(const RunConfig& cfg) {
  const int dim = static_cast<int>(cfg.get_int("problem.N"));
  const Real p = cfg.get_real("problem.p");
  const int m = static_cast<int>(cfg.get_int("problem.m"));
  const std::vector<Real> a = cfg.get_reals("problem.A");
  if (static_cast<int>(a.size()) != m * m)
    throw ConfigError("problem.A must list m*m entries row-major");
  MatrixXr A(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) A(j, k) = a[static_cast<std::size_t>(j) * m + k];
  return validate_params(dim, p, m, A);
}

CartesianGrid box_from_config(const RunConfig& cfg, int dim) {
  CartesianGrid grid;
  grid.dim = dim;
  grid.n = static_cast<int>(cfg.get_int_or("grid.box.n", 256));
  grid.half_extent = cfg.get_real_or("grid.box.L", 16.0);
  if (grid.n < 8 || grid.n % 2 != 0)
    throw ConfigError("grid.box.n must be even and at least 8");
  if (!(grid.half_extent > 0)) throw ConfigError("grid.box.L must be positive");
  return grid;
}

GroundStateConfig solver_from_config(const RunConfig& cfg) {
  GroundStateConfig sc;
  sc.n_r = cfg.get_int_or("grid.radial.n", 4096);
  sc.radius = cfg.get_real_or("grid.radial.R", 16.0);
  sc.tau = cfg.get_real_or("solver.tau", 0.5);
  sc.eps_res = cfg.get_real_or("solver.eps_res", 1e-8);
  sc.max_iters = static_cast<int>(cfg.get_int_or("solver.max_iters", 20000));
  const std::string mode = cfg.get_string_or("solver.normalization", "total");
  if (mode == "total")
    sc.mass_mode = GroundStateConfig::MassMode::Total;
  else if (mode == "per_component")
    sc.mass_mode = GroundStateConfig::MassMode::PerComponent;
  else
    throw ConfigError("solver.normalization must be total or per_component");
  const std::string target = cfg.get_string_or("solver.target_mass", "auto");
  sc.target_mass = target == "auto" ? -1.0 : cfg.get_real("solver.target_mass");
  const std::string seed = cfg.get_string_or("solver.seed", "vector");
  if (seed == "vector")
    sc.semitrivial_seed = false;
  else if (seed == "semitrivial")
    sc.semitrivial_seed = true;
  else
    throw ConfigError("solver.seed must be vector or semitrivial");
  if (cfg.has("solver.seed_widths")) {
    for (Real w : cfg.get_reals("solver.seed_widths")) sc.seed_widths.push_back(w);
  }
  if (cfg.has("solver.seed_amplitudes")) {
    for (Real a : cfg.get_reals("solver.seed_amplitudes"))
      sc.seed_amplitudes.push_back(a);
  }
  sc.newton_polish = cfg.get_bool_or("solver.newton_polish", true);
  sc.newton_switch_res = cfg.get_real_or("solver.newton_switch_res", 1e-3);
  if (!(sc.tau > 0)) throw ConfigError("solver.tau must be positive");
  if (!(sc.eps_res > 0)) throw ConfigError("solver.eps_res must be positive");
  return sc;
}

EvolutionConfig evolution_from_config(const RunConfig& cfg) {
  EvolutionConfig ec;
  ec.dt = cfg.get_real_or("evolution.dt", 1e-3);
  ec.t_end = cfg.get_real_or("evolution.t_end", 5.0);
  ec.stride = static_cast<int>(cfg.get_int_or("evolution.stride", 10));
  ec.gamma_blow = cfg.get_real_or("evolution.gamma_blow", 100.0);
  ec.delta_energy = cfg.get_real_or("evolution.delta_E", 1e-3);
  ec.localization_tol = cfg.get_real_or("evolution.localization_tol", 1e-6);
  return ec;
}

std::vector<AlphaBeta> ab_set_from_config(const RunConfig& cfg, int dim) {
  if (!cfg.has("experiment.ab_set")) return default_alpha_beta_set(dim);
  // entries "alpha beta" separated by ';'; beta may be the token -2/N
  std::istringstream in(cfg.get_string("experiment.ab_set"));
  std::vector<AlphaBeta> out;
  std::string entry;
  while (std::getline(in, entry, ';')) {
    std::istringstream es(entry);
    std::string sa, sb;
    if (!(es >> sa >> sb))
      throw ConfigError("experiment.ab_set entries must be `alpha beta`");
    AlphaBeta ab;
    ab.alpha = std::stod(sa);
    ab.beta = sb == "-2/N" ? -2.0 / dim : std::stod(sb);
    out.push_back(ab);
  }
  if (out.empty()) throw ConfigError("experiment.ab_set is empty");
  return out;
}

const std::set<std::string>& allowed_keys(const std::string& command) {
  static const std::set<std::string> common = {
      "problem.N", "problem.p", "problem.m",
      "output.dir", "seed", "jobs",
  };
  static const std::set<std::string> solver = {
      "grid.radial.n", "grid.radial.R", "solver.tau", "solver.eps_res",
      "solver.max_iters", "solver.normalization", "solver.target_mass",
      "solver.seed", "solver.seed_widths", "solver.seed_amplitudes",
      "solver.newton_polish", "solver.newton_switch_res",
  };
  static const std::set<std::string> evolution = {
      "grid.box.n", "grid.box.L", "evolution.dt", "evolution.t_end",
      "evolution.stride", "evolution.gamma_blow", "evolution.delta_E",
      "evolution.localization_tol",
  };

  static const auto make = [](std::initializer_list<const std::set<std::string>*> parts,
                              std::initializer_list<std::string> extra) {
    std::set<std::string> keys;
    for (const auto* part : parts) keys.insert(part->begin(), part->end());
    keys.insert(extra);
    return keys;
  };

  static const std::map<std::string, std::set<std::string>> table = {
      {"ground", make({&common, &solver}, {"problem.A", "output.profile"})},
      {"evolve", make({&common, &evolution},
                      {"problem.A", "evolve.initial", "evolve.amplitude",
                       "evolve.width", "evolve.dilation", "ground_state.file",
                       "output.trace"})},
      {"classify", make({&common},
                        {"problem.A", "classify.amplitude", "classify.dilation",
                         "experiment.ab_set", "ground_state.file"})},
      {"instability", make({&common, &evolution},
                           {"problem.A", "experiment.lambdas", "experiment.ab_set",
                            "ground_state.file"})},
      {"sweep-mu", make({&common, &solver},
                        {"experiment.mus", "experiment.mu_diag"})},
      {"check", make({&common}, {"problem.A", "check.fields", "grid.box.n",
                                 "grid.box.L", "grid.radial.n", "grid.radial.R"})},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command: " + command);
  return it->second;
}

}  // namespace cnls
