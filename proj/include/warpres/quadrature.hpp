#pragma once

// Product quadrature over the two chart factors: uniform trapezoid nodes on
// periodic coordinates (spectrally accurate there), Gauss-Legendre elsewhere.
// Gauss-Legendre nodes keep quadrature points strictly inside open chart
// ranges, which is how chart-boundary singular sets are avoided.

#include <cstdint>
#include <vector>

#include "warpres/metric.hpp"

namespace warpres {

struct Quad1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on (lo, hi), nodes by Newton iteration on the
// Legendre recurrence.
inline Quad1D gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("quadrature rule needs at least one node");
  Quad1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    q.nodes[i] = mid - half * x;
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[i] = q.weights[n - 1 - i] = half * w;
  }
  return q;
}

inline Quad1D trapezoid_periodic(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("quadrature rule needs at least one node");
  Quad1D q;
  double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(lo + i * h);
    q.weights.push_back(h);
  }
  return q;
}

// Tensor-product grid over the coordinates of both factors. Coordinate
// weights only; metric volume factors are applied by the caller per node.
class QuadratureGrid {
 public:
  static QuadratureGrid build(const MetricField& g_m, const MetricField& g_n,
                              const std::vector<int>& nodes_m,
                              const std::vector<int>& nodes_n) {
    QuadratureGrid grid;
    grid.m_coords_ = g_m.dim();
    grid.counts_m_ = nodes_m;
    grid.counts_n_ = nodes_n;
    auto add_factor = [&grid](const MetricField& g, const std::vector<int>& counts) {
      if (static_cast<int>(counts.size()) != g.dim())
        throw ConfigError("per-coordinate node counts do not match chart dimension");
      for (int i = 0; i < g.dim(); ++i) {
        const CoordRange& r = g.domain()[i];
        grid.rules_.push_back(r.periodic ? trapezoid_periodic(counts[i], r.lo, r.hi)
                                         : gauss_legendre(counts[i], r.lo, r.hi));
      }
    };
    add_factor(g_m, nodes_m);
    add_factor(g_n, nodes_n);
    grid.total_ = 1;
    for (const auto& r : grid.rules_) grid.total_ *= r.nodes.size();
    return grid;
  }

  std::size_t size() const { return total_; }
  int coords() const { return static_cast<int>(rules_.size()); }
  int m_coords() const { return m_coords_; }
  const std::vector<int>& counts_m() const { return counts_m_; }
  const std::vector<int>& counts_n() const { return counts_n_; }

  // Decodes flat index -> (point in product coordinates, coordinate weight).
  void node(std::size_t idx, Point& x, double& weight) const {
    int d = coords();
    x.resize(d);
    weight = 1.0;
    for (int c = d - 1; c >= 0; --c) {
      std::size_t n = rules_[c].nodes.size();
      std::size_t i = idx % n;
      idx /= n;
      x(c) = rules_[c].nodes[i];
      weight *= rules_[c].weights[i];
    }
  }

  // Riemannian volume of the product metric: sum of weights times
  // sqrt(det gM) sqrt(det gN).
  double volume(const MetricField& g_m, const MetricField& g_n) const {
    double vol = 0;
    Point x;
    double w;
    int m = m_coords_;
    for (std::size_t i = 0; i < total_; ++i) {
      node(i, x, w);
      Point xm = x.head(m), xn = x.tail(coords() - m);
      vol += w * std::sqrt(g_m.eval(xm).determinant()) *
             std::sqrt(g_n.eval(xn).determinant());
    }
    return vol;
  }

 private:
  std::vector<Quad1D> rules_;
  std::vector<int> counts_m_, counts_n_;
  int m_coords_ = 0;
  std::size_t total_ = 0;
};

}  // namespace warpres
