#pragma once

// Flat key = value run configuration with dotted sections. Field reference is
// in the README; unknown keys are rejected so typos fail loudly.

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "warpres/metric.hpp"
#include "warpres/warped.hpp"

namespace warpres {

struct ChartSpec {
  std::string kind;  // circle | torus | sphere | custom
  int dim = 0;
  double radius = 1.0;
  std::vector<std::vector<std::string>> entries;  // custom only
  std::vector<CoordRange> ranges;                 // custom only

  MetricField build(DerivMode mode, FdSteps fd) const {
    if (kind == "circle") {
      MetricField m = charts::circle(radius);
      return mode == DerivMode::Analytic ? m : m.with_deriv_mode(mode, fd);
    }
    if (kind == "torus") {
      MetricField m = charts::torus(dim);
      return mode == DerivMode::Analytic ? m : m.with_deriv_mode(mode, fd);
    }
    if (kind == "sphere") return charts::sphere(dim, radius, mode);
    if (kind == "custom") {
      if (entries.empty() || ranges.size() != entries.size())
        throw ConfigError("custom chart needs entries and matching ranges");
      return MetricField::from_expressions(entries, ranges, mode, fd, "custom");
    }
    throw ConfigError("unknown chart kind '" + kind + "'");
  }

  int chart_dim() const { return kind == "circle" ? 1 : dim; }
};

struct RunConfig {
  ChartSpec factor_m, factor_n;
  double epsilon = 1.0;
  std::string warp = "1";
  std::string mode = "verify";  // assembled | closed | verify
  std::vector<int> grid_m, grid_n;
  std::string deriv_mode = "analytic";  // analytic | fd
  double fd_step = 1e-4;
  double verify_tolerance = 1e-4;
  bool quad_check = false;
  double quad_tolerance = 1e-6;
  std::string out_json;
  std::string out_csv;
  bool per_node = false;

  static RunConfig parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str());
  }

  static RunConfig parse_text(const std::string& text);

  DerivMode resolved_deriv_mode() const {
    if (deriv_mode == "analytic") return DerivMode::Analytic;
    if (deriv_mode == "fd" || deriv_mode == "finite-difference")
      return DerivMode::FiniteDifference;
    throw ConfigError("deriv.mode must be 'analytic' or 'fd'");
  }

  FdSteps resolved_fd_steps() const { return FdSteps{fd_step, 10 * fd_step}; }

  void validate() const {
    int m = factor_m.chart_dim(), n = factor_n.chart_dim();
    if (m < 1 || n < 1) throw ConfigError("factor dimensions must be positive");
    if ((m + n) % 2 != 0)
      throw ConfigError("total dimension m+n must be even (integer residue order)");
    if (epsilon == 0.0) throw ConfigError("epsilon must be nonzero");
    if (mode != "assembled" && mode != "closed" && mode != "verify")
      throw ConfigError("mode must be assembled, closed or verify");
    if (fd_step <= 0) throw ConfigError("fd step must be positive");
    auto check_grid = [](const std::vector<int>& g, int dim, const char* which) {
      if (static_cast<int>(g.size()) != dim)
        throw ConfigError(std::string("grid.") + which +
                          " must list one node count per coordinate");
      for (int c : g)
        if (c < 8) throw ConfigError("node counts must be >= 8");
    };
    check_grid(grid_m, m, "M");
    check_grid(grid_n, n, "N");
    expr::AstPtr w = expr::parse(warp);
    expr::Env declared;
    for (int k = 0; k < m; ++k) declared["x" + std::to_string(k + 1)] = 0.0;
    expr::check_vars(w, declared);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline std::vector<int> parse_counts(const std::string& v) {
  std::vector<int> out;
  for (const auto& p : split(v, ',')) out.push_back(std::stoi(p));
  return out;
}

inline void apply_chart_key(ChartSpec& spec, const std::string& key,
                            const std::string& value) {
  if (key == "kind") {
    spec.kind = value;
    if (value == "circle") spec.dim = 1;
  } else if (key == "dim") {
    spec.dim = std::stoi(value);
  } else if (key == "radius") {
    spec.radius = std::stod(value);
  } else if (key.rfind("entry.", 0) == 0) {
    auto idx = split(key.substr(6), '.');
    if (idx.size() != 2) throw ConfigError("entry keys look like entry.<i>.<j>");
    int i = std::stoi(idx[0]) - 1, j = std::stoi(idx[1]) - 1;
    int need = std::max(i, j) + 1;
    if (static_cast<int>(spec.entries.size()) < need) {
      spec.entries.resize(need);
      for (auto& row : spec.entries) row.resize(need, "0");
    }
    spec.entries[i][j] = value;
    spec.entries[j][i] = value;
  } else if (key.rfind("range.", 0) == 0) {
    int i = std::stoi(key.substr(6)) - 1;
    auto parts = split(value, ':');
    if (parts.size() < 2) throw ConfigError("range values look like lo:hi[:periodic]");
    if (static_cast<int>(spec.ranges.size()) <= i) spec.ranges.resize(i + 1);
    spec.ranges[i] = {std::stod(parts[0]), std::stod(parts[1]),
                      parts.size() > 2 && parts[2] == "periodic"};
  } else {
    throw ConfigError("unknown factor key '" + key + "'");
  }
}

}  // namespace detail

inline RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  bool grid_m_set = false, grid_n_set = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    try {
      if (key.rfind("factorM.", 0) == 0)
        detail::apply_chart_key(cfg.factor_m, key.substr(8), value);
      else if (key.rfind("factorN.", 0) == 0)
        detail::apply_chart_key(cfg.factor_n, key.substr(8), value);
      else if (key == "epsilon")
        cfg.epsilon = std::stod(value);
      else if (key == "warp")
        cfg.warp = value;
      else if (key == "mode")
        cfg.mode = value;
      else if (key == "grid.M") {
        cfg.grid_m = detail::parse_counts(value);
        grid_m_set = true;
      } else if (key == "grid.N") {
        cfg.grid_n = detail::parse_counts(value);
        grid_n_set = true;
      } else if (key == "deriv.mode")
        cfg.deriv_mode = value;
      else if (key == "deriv.fd_step")
        cfg.fd_step = std::stod(value);
      else if (key == "tolerance.verify")
        cfg.verify_tolerance = std::stod(value);
      else if (key == "quadrature.check")
        cfg.quad_check = (value == "true" || value == "1");
      else if (key == "quadrature.tolerance")
        cfg.quad_tolerance = std::stod(value);
      else if (key == "output.json")
        cfg.out_json = value;
      else if (key == "output.csv")
        cfg.out_csv = value;
      else if (key == "output.per_node")
        cfg.per_node = (value == "true" || value == "1");
      else
        throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  // Default grid: 48 nodes per coordinate, expand singletons per coordinate.
  auto normalize = [](std::vector<int>& g, int dim, bool was_set) {
    if (!was_set) {
      g.assign(dim, 48);
    } else if (static_cast<int>(g.size()) == 1 && dim > 1) {
      g.assign(dim, g[0]);
    }
  };
  normalize(cfg.grid_m, cfg.factor_m.chart_dim(), grid_m_set);
  normalize(cfg.grid_n, cfg.factor_n.chart_dim(), grid_n_set);
  return cfg;
}

}  // namespace warpres
