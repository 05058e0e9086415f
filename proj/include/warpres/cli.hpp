#pragma once

// Drivers behind the command-line tool: `run` executes a configured residue
// computation and writes reports; `check` runs the self-check suite on the
// configured geometry without computing totals.

#include <iomanip>
#include <iostream>
#include <random>

#include "warpres/config.hpp"
#include "warpres/parametrix.hpp"
#include "warpres/report_io.hpp"
#include "warpres/wres.hpp"

namespace warpres {

inline Point random_interior_point(const MetricField& g, std::mt19937& rng) {
  Point x(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    const CoordRange& r = g.domain()[i];
    double len = r.hi - r.lo;
    std::uniform_real_distribution<double> dist(r.lo + 0.15 * len, r.hi - 0.15 * len);
    x(i) = dist(rng);
  }
  return x;
}

struct RunResult {
  ResidueReport report;
  int exit_code = 0;
};

inline RunResult run_config(const RunConfig& cfg, std::ostream& out, bool quiet = false) {
  cfg.validate();
  DerivMode mode = cfg.resolved_deriv_mode();
  FdSteps fd = cfg.resolved_fd_steps();
  MetricField g_m = cfg.factor_m.build(mode, fd);
  MetricField g_n = cfg.factor_n.build(mode, fd);
  WarpedConfig wc = WarpedConfig::make(cfg.epsilon, cfg.warp, g_m.dim(), g_n.dim());
  QuadratureGrid grid = QuadratureGrid::build(g_m, g_n, cfg.grid_m, cfg.grid_n);

  ResidueMode rmode = cfg.mode == "assembled" ? ResidueMode::Assembled
                      : cfg.mode == "closed"  ? ResidueMode::Closed
                                              : ResidueMode::Verify;
  WresOptions options;
  options.keep_nodes = cfg.per_node || !cfg.out_csv.empty();
  options.verify_tolerance = cfg.verify_tolerance;
  options.quadrature_check = cfg.quad_check;
  options.quadrature_tolerance = cfg.quad_tolerance;

  RunResult result;
  result.report = wres(g_m, g_n, wc, grid, rmode, options);
  const ResidueReport& rep = result.report;

  if (!cfg.out_json.empty())
    write_file(cfg.out_json, report_to_json(rep, cfg.per_node).dump(2) + "\n");
  if (!cfg.out_csv.empty()) write_file(cfg.out_csv, report_to_csv(rep));

  if (!quiet) {
    out << std::setprecision(12);
    out << "factors: " << rep.factor_m << " (m=" << rep.m << ") x " << rep.factor_n
        << " (n=" << rep.n << "), epsilon=" << rep.epsilon << ", warp=" << rep.warp
        << "\n";
    out << "mode: " << rep.mode << ", deriv: " << rep.deriv_mode
        << ", volume: " << rep.volume << "\n";
    if (std::isfinite(rep.total_assembled))
      out << "wres (assembled): " << rep.total_assembled << "\n";
    if (std::isfinite(rep.total_closed))
      out << "wres (closed):    " << rep.total_closed << "\n";
    if (std::isfinite(rep.total_rel_gap))
      out << "rel gap: " << rep.total_rel_gap
          << " (max node: " << rep.max_node_rel_gap << ") -> "
          << (rep.verify_pass ? "PASS" : "FAIL") << "\n";
    if (rep.has_reference_check)
      out << "reference check: quoted " << rep.reference_quoted_total << " vs engine "
          << rep.total_closed << " (ratio " << rep.reference_ratio << ") -- "
          << rep.reference_note << "\n";
  }

  if (rmode == ResidueMode::Verify && !rep.verify_pass) result.exit_code = 1;
  return result;
}

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckLine> lines;
  bool all_pass() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
};

inline CheckReport check_config(const RunConfig& cfg, std::ostream& out,
                                bool quiet = false) {
  cfg.validate();
  DerivMode mode = cfg.resolved_deriv_mode();
  FdSteps fd = cfg.resolved_fd_steps();
  MetricField g_m = cfg.factor_m.build(mode, fd);
  MetricField g_n = cfg.factor_n.build(mode, fd);
  WarpedConfig wc = WarpedConfig::make(cfg.epsilon, cfg.warp, g_m.dim(), g_n.dim());
  MetricField g_prod = build_warped_product(
      g_m, g_n, WarpedConfig::make(1.0, "1", g_m.dim(), g_n.dim()));
  MetricField g_warp = build_warped_product(g_m, g_n, wc);

  const double sym_tol = mode == DerivMode::Analytic ? 1e-8 : 1e-5;
  std::mt19937 rng(20240811);
  CheckReport report;
  char buf[160];

  // Moment identities for the fiber dimension.
  {
    int d = g_m.dim() + g_n.dim();
    MomentTable table(d);
    Rational quad(0), quart(0);
    for (int i = 0; i < d; ++i) {
      quad += table.moment(MultiIndex::unit(d, i).plus(i));
      for (int j = 0; j < d; ++j)
        quart += table.moment(MultiIndex::unit(d, i).plus(i) +
                              MultiIndex::unit(d, j).plus(j));
    }
    bool ok = quad == Rational(1) && quart == Rational(1);
    report.lines.push_back({"moment-identities", ok,
                            "|xi|^2 -> " + quad.str() + ", |xi|^4 -> " + quart.str()});
  }

  // Curvature symmetry residuals on the product metric.
  {
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
      Point x = random_interior_point(g_prod, rng);
      CurvatureTensor r = riemann_orthonormal(g_prod, x);
      int d = r.dim();
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
              worst = std::max(worst, std::abs(r.at(i, j, k, l) + r.at(j, i, k, l)));
              worst = std::max(worst, std::abs(r.at(i, j, k, l) + r.at(i, j, l, k)));
              worst = std::max(worst, std::abs(r.at(i, j, k, l) - r.at(k, l, i, j)));
              worst = std::max(worst, std::abs(r.at(i, j, k, l) + r.at(i, k, l, j) +
                                               r.at(i, l, j, k)));
            }
    }
    std::snprintf(buf, sizeof buf, "max residual %.3e (tol %.1e)", worst, sym_tol);
    report.lines.push_back({"curvature-symmetries", worst <= sym_tol, buf});
  }

  // Known scalar curvature of round-sphere factors.
  for (const auto* spec : {&cfg.factor_m, &cfg.factor_n}) {
    if (spec->kind != "sphere" && spec->kind != "circle") continue;
    MetricField g = spec->build(mode, fd);
    int n = g.dim();
    double expected = n == 1 ? 0.0 : n * (n - 1) / (spec->radius * spec->radius);
    double worst = 0;
    for (int trial = 0; trial < 3; ++trial) {
      Point x = random_interior_point(g, rng);
      worst = std::max(worst, std::abs(scalar_curvature(g, x) - expected));
    }
    double tol = mode == DerivMode::Analytic ? 1e-6 : 1e-4;
    std::snprintf(buf, sizeof buf, "S=%g expected, max dev %.3e", expected, worst);
    report.lines.push_back({spec->kind + "-scalar-curvature", worst <= tol, buf});
  }

  // Closed-form warped connection against the generic one.
  {
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
      Point x = random_interior_point(g_warp, rng);
      ChristoffelTable closed = warped_christoffel_closed_form(g_m, g_n, wc, x);
      ChristoffelTable generic = christoffel(g_warp, x);
      for (int k = 0; k < closed.dim; ++k)
        worst = std::max(worst,
                         (closed.gamma[k] - generic.gamma[k]).cwiseAbs().maxCoeff());
    }
    std::snprintf(buf, sizeof buf, "max abs diff %.3e (tol 1e-6)", worst);
    report.lines.push_back({"warped-christoffel-crosscheck", worst <= 1e-6, buf});
  }

  // Parametrix composition identity through degree -2.
  {
    double tol = mode == DerivMode::Analytic ? 1e-6 : 1e-3;
    LaplaceSymbolField lap(g_prod);
    ParametrixField par(g_prod, 4);
    double worst = 0;
    for (int trial = 0; trial < 3; ++trial) {
      Point x = random_interior_point(g_prod, rng);
      FullSymbol composed = compose(lap, par, x, -2);
      for (const auto& t : composed.component(0))
        worst = std::max(worst, std::abs(t.coeff - (t.mono.degree() == 0 &&
                                                            t.norm_power == 0
                                                        ? Complex(1)
                                                        : Complex(0))));
      worst = std::max(worst, composed.max_abs_coeff(-1));
      worst = std::max(worst, composed.max_abs_coeff(-2));
    }
    std::snprintf(buf, sizeof buf, "max residual %.3e (tol %.1e)", worst, tol);
    report.lines.push_back({"parametrix-composition", worst <= tol, buf});
  }

  if (!quiet) {
    for (const auto& l : report.lines)
      out << (l.pass ? "PASS" : "FAIL") << "  " << l.name << ": " << l.detail << "\n";
    out << (report.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  }
  return report;
}

}  // namespace warpres
