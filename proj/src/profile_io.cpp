#include <fstream>
#include <sstream>

#include "cnls/errors.hpp"
#include "cnls/ground_state.hpp"
#include "cnls/manifest.hpp"

namespace cnls {

// Profile files are plain text: a `key value` header, an optional verbatim
// echo of the run configuration, then one row per radial node with the
// component samples (real and imaginary parts).  All floating-point values
// carry 17 significant digits, so a reload reproduces the doubles bit for
// bit.

void save_profile(const std::string& path, const GroundStateResult& result,
                  const SystemParams& params,
                  const std::vector<std::string>& config_echo) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open profile file " + path);
  const RadialGrid& g = result.profile.grid;
  out << "# coupled NLS ground-state profile\n";
  out << "format 1\n";
  out << "N " << params.dim << "\n";
  out << "p " << format_real(params.p) << "\n";
  out << "m " << params.m << "\n";
  out << "A";
  for (int j = 0; j < params.m; ++j)
    for (int k = 0; k < params.m; ++k) out << " " << format_real(params.coupling(j, k));
  out << "\n";
  out << "grid radial\n";
  out << "n_r " << g.n_r << "\n";
  out << "R " << format_real(g.radius) << "\n";
  out << "omega " << format_real(result.omega) << "\n";
  out << "level " << format_real(result.level) << "\n";
  out << "residual " << format_real(result.residual) << "\n";
  out << "iterations " << result.iterations << "\n";
  out << "masses";
  for (int j = 0; j < params.m; ++j) out << " " << format_real(result.component_masses[j]);
  out << "\n";
  for (const auto& [ab, defect] : result.pohozaev_defects)
    out << "pohozaev " << format_real(ab.alpha) << " " << format_real(ab.beta)
        << " " << format_real(defect) << "\n";
  if (!config_echo.empty()) {
    out << "config_begin\n";
    for (const std::string& line : config_echo) out << "# " << line << "\n";
    out << "config_end\n";
  }
  out << "data r";
  for (int j = 0; j < params.m; ++j) out << " psi_" << j << "_re psi_" << j << "_im";
  out << "\n";
  for (Eigen::Index i = 0; i < g.n_r; ++i) {
    out << format_real(g.r[i]);
    for (int j = 0; j < params.m; ++j)
      out << " " << format_real(result.profile.comps[j][i].real()) << " "
          << format_real(result.profile.comps[j][i].imag());
    out << "\n";
  }
  out << "end\n";
}

LoadedProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingDependency("cannot open profile file " + path);

  LoadedProfile loaded;
  Eigen::Index n_r = 0;
  Real radius = 0;
  int dim = 0, m = 0;
  Real p = 0;
  std::vector<Real> coupling;
  std::string line;
  bool in_data = false;
  Eigen::Index row = 0;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (in_data) {
      if (line == "end") break;
      Real r;
      ls >> r;
      for (int j = 0; j < m; ++j) {
        Real re, im;
        ls >> re >> im;
        loaded.result.profile.comps[j][row] = Complex(re, im);
      }
      if (!ls) throw Error("malformed profile data row in " + path);
      ++row;
      continue;
    }
    std::string key;
    ls >> key;
    if (key == "format" || key == "grid" || key == "config_begin" ||
        key == "config_end") {
      continue;
    } else if (key == "N") {
      ls >> dim;
    } else if (key == "p") {
      ls >> p;
    } else if (key == "m") {
      ls >> m;
      coupling.assign(static_cast<std::size_t>(m) * m, 0.0);
    } else if (key == "A") {
      for (auto& v : coupling) ls >> v;
    } else if (key == "n_r") {
      ls >> n_r;
    } else if (key == "R") {
      ls >> radius;
    } else if (key == "omega") {
      ls >> loaded.result.omega;
    } else if (key == "level") {
      ls >> loaded.result.level;
    } else if (key == "residual") {
      ls >> loaded.result.residual;
    } else if (key == "iterations") {
      ls >> loaded.result.iterations;
    } else if (key == "masses") {
      loaded.result.component_masses.resize(m);
      for (int j = 0; j < m; ++j) ls >> loaded.result.component_masses[j];
    } else if (key == "pohozaev") {
      AlphaBeta ab;
      Real defect;
      ls >> ab.alpha >> ab.beta >> defect;
      loaded.result.pohozaev_defects.emplace_back(ab, defect);
    } else if (key == "data") {
      if (dim == 0 || m == 0 || n_r == 0)
        throw Error("profile header incomplete in " + path);
      loaded.result.profile =
          RadialField(RadialGrid::make(dim, n_r, radius), m);
      in_data = true;
    } else {
      throw Error("unknown profile key '" + key + "' in " + path);
    }
  }
  if (!in_data || row != n_r) throw Error("profile data truncated in " + path);

  MatrixXr A(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) A(j, k) = coupling[static_cast<std::size_t>(j) * m + k];
  loaded.params = validate_params(dim, p, m, A);
  return loaded;
}

}  // namespace cnls
