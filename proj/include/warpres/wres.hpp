#pragma once

// Residue totals over the product manifold. For each quadrature node the
// assembled route runs: product-metric curvature in an orthonormal frame ->
// normal-coordinate jets -> warped symbol in the same frame -> six generic
// fiber integrals; the closed route evaluates the factor scalar curvatures in
// the closed-form density. Verify mode runs both and reports gaps.
//
// Normalization: the fiber integral uses the raw sphere measure; no
// (2 pi)^{-2 mbar} factor is applied anywhere. Other conventions in the
// literature differ by exactly such factors.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "warpres/density.hpp"
#include "warpres/quadrature.hpp"
#include "warpres/warped.hpp"

namespace warpres {

enum class ResidueMode { Assembled, Closed, Verify };

inline std::string to_string(ResidueMode m) {
  switch (m) {
    case ResidueMode::Assembled: return "assembled";
    case ResidueMode::Closed: return "closed";
    default: return "verify";
  }
}

struct NodeRecord {
  Point x;
  double weight = 0;  // coordinate weight times sqrt(det g) volume factor
  SixTerms terms;
  double assembled = std::numeric_limits<double>::quiet_NaN();
  double closed = std::numeric_limits<double>::quiet_NaN();
  double abs_gap = std::numeric_limits<double>::quiet_NaN();
  double rel_gap = std::numeric_limits<double>::quiet_NaN();
};

struct ResidueReport {
  // metadata
  int m = 0, n = 0, mbar = 0;
  double epsilon = 1.0;
  std::string warp;
  std::string factor_m, factor_n;
  std::string mode;
  std::vector<int> grid_m, grid_n;
  std::string deriv_mode;
  double verify_tolerance = 1e-4;
  std::string normalization =
      "raw cosphere measure; no (2*pi)^(-2*mbar) factor applied";
  std::string trace = "identity (scalar operator)";
  int threads = 1;

  // totals
  double volume = 0;
  double total_assembled = std::numeric_limits<double>::quiet_NaN();
  double total_closed = std::numeric_limits<double>::quiet_NaN();
  double total_abs_gap = std::numeric_limits<double>::quiet_NaN();
  double total_rel_gap = std::numeric_limits<double>::quiet_NaN();
  double max_node_rel_gap = std::numeric_limits<double>::quiet_NaN();
  bool verify_pass = true;

  // crosscheck against a published closed form for the circle x 3-sphere
  // example (flagged, never reconciled; see README)
  bool has_reference_check = false;
  double reference_quoted_total = std::numeric_limits<double>::quiet_NaN();
  double reference_ratio = std::numeric_limits<double>::quiet_NaN();
  std::string reference_note;

  std::vector<NodeRecord> nodes;  // populated on request
};

struct WresOptions {
  bool keep_nodes = false;
  double verify_tolerance = 1e-4;
  bool quadrature_check = false;
  double quadrature_tolerance = 1e-6;
  int threads = 0;  // 0: WARPRES_THREADS env var, else hardware concurrency
};

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WARPRES_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

inline void run_indexed(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Assembled density at one product point.
inline NodeRecord assembled_node(const MetricField& g_prod, const MetricField& g_m,
                                 const WarpedConfig& cfg, const Point& x,
                                 MomentTable& table) {
  const int m = cfg.m_dim(), n = cfg.n_dim();
  const int mbar = (m + n) / 2;
  Point xm = x.head(m);

  CurvatureTensor curv = riemann_orthonormal(g_prod, x);
  NormalJet jet = normal_jet(curv, mbar);

  double f = cfg.warp_value(xm);
  Eigen::VectorXd grad_frame(m);
  if (cfg.warp_is_constant()) {
    grad_frame.setZero();
  } else {
    Eigen::MatrixXd frame_m = orthonormal_frame(g_m.eval(xm));
    grad_frame = frame_m.transpose() * cfg.warp_grad(xm);
  }
  FullSymbol warped = warped_symbol_normal_frame(cfg.epsilon(), f, grad_frame, m, n);

  NodeRecord rec;
  rec.x = x;
  rec.terms = density_terms(curv, warped, jet, m, n, table);
  rec.assembled = assembled_density(rec.terms);
  return rec;
}

}  // namespace detail

inline ResidueReport wres(const MetricField& g_m, const MetricField& g_n,
                          const WarpedConfig& cfg, const QuadratureGrid& grid,
                          ResidueMode mode, const WresOptions& options = WresOptions{}) {
  const int m = g_m.dim(), n = g_n.dim();
  if (cfg.m_dim() != m || cfg.n_dim() != n)
    throw DimensionMismatch("warped config does not match factor dimensions");
  if ((m + n) % 2 != 0)
    throw OddTotalDimension("total dimension must be even for this residue order");
  if (g_m.signature() != Signature::Riemannian || g_n.signature() != Signature::Riemannian)
    throw NotElliptic("the inverted operator requires Riemannian factor metrics");

  ResidueReport rep;
  rep.m = m;
  rep.n = n;
  rep.mbar = (m + n) / 2;
  rep.epsilon = cfg.epsilon();
  rep.warp = cfg.warp_source();
  rep.factor_m = g_m.name();
  rep.factor_n = g_n.name();
  rep.mode = to_string(mode);
  rep.grid_m = grid.counts_m();
  rep.grid_n = grid.counts_n();
  rep.deriv_mode = (g_m.deriv_mode() == DerivMode::Analytic &&
                    g_n.deriv_mode() == DerivMode::Analytic)
                       ? "analytic"
                       : "finite-difference";
  rep.verify_tolerance = options.verify_tolerance;
  rep.threads = detail::resolve_threads(options.threads);

  const bool want_assembled = mode != ResidueMode::Closed;
  const bool want_closed = mode != ResidueMode::Assembled;

  MetricField g_prod = build_warped_product(g_m, g_n, WarpedConfig::make(1.0, "1", m, n));
  MomentTable table(m + n);
  if (want_assembled) {
    // Warm the moment cache so threaded lookups never write concurrently with
    // quartic-degree misses.
    Point x0;
    double w0;
    grid.node(0, x0, w0);
    detail::assembled_node(g_prod, g_m, cfg, x0, table);
  }

  const std::size_t count = grid.size();
  std::vector<NodeRecord> recs(count);
  detail::run_indexed(count, rep.threads, [&](std::size_t i) {
    Point x;
    double w;
    grid.node(i, x, w);
    Point xm = x.head(m), xn = x.tail(n);
    NodeRecord rec;
    if (want_assembled) {
      rec = detail::assembled_node(g_prod, g_m, cfg, x, table);
    } else {
      rec.x = x;
    }
    rec.weight = w * std::sqrt(g_m.eval(xm).determinant()) *
                 std::sqrt(g_n.eval(xn).determinant());
    if (want_closed) {
      double s_m = scalar_curvature(g_m, xm);
      double s_n = scalar_curvature(g_n, xn);
      rec.closed = closed_form_density(s_m, s_n, cfg.epsilon(), cfg.warp_value(xm), m, n);
    }
    if (want_assembled && want_closed) {
      rec.abs_gap = std::abs(rec.assembled - rec.closed);
      double denom = std::max(std::abs(rec.assembled), std::abs(rec.closed));
      rec.rel_gap = denom > 1e-14 ? rec.abs_gap / denom : rec.abs_gap;
    }
    recs[i] = std::move(rec);
  });

  // Deterministic ordered reduction.
  double vol = 0, tot_a = 0, tot_c = 0, max_rel = 0;
  for (const auto& rec : recs) {
    vol += rec.weight;
    if (want_assembled) tot_a += rec.weight * rec.assembled;
    if (want_closed) tot_c += rec.weight * rec.closed;
    if (want_assembled && want_closed) max_rel = std::max(max_rel, rec.rel_gap);
  }
  rep.volume = vol;
  if (want_assembled) rep.total_assembled = tot_a;
  if (want_closed) rep.total_closed = tot_c;
  if (want_assembled && want_closed) {
    rep.total_abs_gap = std::abs(tot_a - tot_c);
    double denom = std::max(std::abs(tot_a), std::abs(tot_c));
    rep.total_rel_gap = denom > 1e-14 ? rep.total_abs_gap / denom : rep.total_abs_gap;
    rep.max_node_rel_gap = max_rel;
    rep.verify_pass = rep.total_rel_gap <= options.verify_tolerance &&
                      max_rel <= options.verify_tolerance;
  }
  if (options.keep_nodes) rep.nodes = std::move(recs);

  // Published closed form for the circle x 3-sphere example: quoted total
  // 4 pi^4 * integral_{S^1} (1/eps + 1/f^2) dVol. The engine's own closed
  // form integrates to half of that; the gap is flagged, never patched.
  if (want_closed && m == 1 && n == 3 && g_m.name() == "circle" && g_n.name() == "sphere") {
    double circle_integral = 0;
    // 1D trapezoid over the circle chart, matching the grid's M resolution.
    const CoordRange& r = g_m.domain()[0];
    int steps = 512;
    double h = (r.hi - r.lo) / steps;
    for (int i = 0; i < steps; ++i) {
      Point xm(1);
      xm(0) = r.lo + i * h;
      double f = cfg.warp_value(xm);
      circle_integral += h * std::sqrt(g_m.eval(xm).determinant()) *
                         (1.0 / cfg.epsilon() + 1.0 / (f * f));
    }
    rep.has_reference_check = true;
    rep.reference_quoted_total = 4.0 * std::pow(M_PI, 4) * circle_integral;
    rep.reference_ratio = rep.reference_quoted_total / rep.total_closed;
    rep.reference_note =
        "published total for this example uses prefactor 4*pi^4; the engine's "
        "internally consistent closed form gives 2*pi^4, a factor-2 mismatch "
        "that is reported as-is";
  }

  if (options.quadrature_check) {
    // Doubling check on the closed route (cheap and shares the integrand
    // scale with the assembled one).
    std::vector<int> gm2, gn2;
    for (int c : rep.grid_m) gm2.push_back(2 * c);
    for (int c : rep.grid_n) gn2.push_back(2 * c);
    QuadratureGrid fine = QuadratureGrid::build(g_m, g_n, gm2, gn2);
    double tot = 0;
    Point x;
    double w;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      fine.node(i, x, w);
      Point xm = x.head(m), xn = x.tail(n);
      double f = cfg.warp_value(xm);
      tot += w * std::sqrt(g_m.eval(xm).determinant()) *
             std::sqrt(g_n.eval(xn).determinant()) *
             closed_form_density(scalar_curvature(g_m, xm), scalar_curvature(g_n, xn),
                                 cfg.epsilon(), f, m, n);
    }
    double base = want_closed ? rep.total_closed : rep.total_assembled;
    double shift = std::abs(tot - base) / std::max(1.0, std::abs(tot));
    if (shift > options.quadrature_tolerance)
      throw QuadratureUnconverged("doubling quadrature nodes moved the total by " +
                                  std::to_string(shift));
  }
  return rep;
}

// Bimetric spectral Einstein-Hilbert action: the numerator operator comes
// from the warped metric spec (any signature), the inverted one from the
// Riemannian product of the factors. With epsilon = 1 and f = 1 this is the
// spectral Einstein-Hilbert action of the product metric itself.
inline double bimetric_eh(const MetricField& g_m, const MetricField& g_n,
                          const WarpedConfig& cfg, const QuadratureGrid& grid,
                          const WresOptions& options = WresOptions{}) {
  return wres(g_m, g_n, cfg, grid, ResidueMode::Assembled, options).total_assembled;
}

}  // namespace warpres
