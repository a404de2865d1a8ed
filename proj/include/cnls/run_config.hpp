#ifndef CNLS_RUN_CONFIG_HPP_
#define CNLS_RUN_CONFIG_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cnls/evolution.hpp"
#include "cnls/functionals.hpp"
#include "cnls/ground_state.hpp"
#include "cnls/params.hpp"

namespace cnls {

/**
 * Flat `key = value` run configuration with dotted section prefixes
 * (problem.N = 2).  Lines starting with '#' are comments.  Duplicate or
 * unknown keys are errors; there are no silent typos.
 */
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& def) const;
  Real get_real(const std::string& key) const;
  Real get_real_or(const std::string& key, Real def) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long def) const;
  bool get_bool_or(const std::string& key, bool def) const;
  std::vector<Real> get_reals(const std::string& key) const;

  /// Throws ConfigError when a key is outside the allowed set.
  void require_known(const std::set<std::string>& allowed) const;

  /// `key = value` lines in file order, for embedding into outputs.
  const std::vector<std::string>& echo() const { return echo_; }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> echo_;
};

// Model builders shared by the CLI commands.
SystemParams params_from_config(const RunConfig& cfg);
CartesianGrid box_from_config(const RunConfig& cfg, int dim);
GroundStateConfig solver_from_config(const RunConfig& cfg);
EvolutionConfig evolution_from_config(const RunConfig& cfg);
std::vector<AlphaBeta> ab_set_from_config(const RunConfig& cfg, int dim);

/// Allowed key sets per CLI command (`ground`, `evolve`, ...).
const std::set<std::string>& allowed_keys(const std::string& command);

}  // namespace cnls

#endif  // CNLS_RUN_CONFIG_HPP_
