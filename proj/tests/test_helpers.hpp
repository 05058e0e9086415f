#pragma once

// Shared fixtures: random interior points, randomized smooth expression
// metrics, and a synthetic metric given directly in normal-coordinate form
// (its inverse is the quadratic curvature polynomial), which pins down the
// curvature conventions end to end.

#include <random>
#include <string>

#include "warpres/curvature.hpp"
#include "warpres/metric.hpp"

namespace wrtest {

using namespace warpres;

inline Point pt(std::initializer_list<double> v) {
  Point x(static_cast<int>(v.size()));
  int i = 0;
  for (double c : v) x(i++) = c;
  return x;
}

inline Point random_point(const MetricField& g, std::mt19937& rng, double margin = 0.15) {
  Point x(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    const CoordRange& r = g.domain()[i];
    double len = r.hi - r.lo;
    std::uniform_real_distribution<double> dist(r.lo + margin * len, r.hi - margin * len);
    x(i) = dist(rng);
  }
  return x;
}

inline Eigen::VectorXd random_xi(int dim, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  Eigen::VectorXd xi(dim);
  for (int i = 0; i < dim; ++i) xi(i) = dist(rng);
  if (xi.norm() < 0.3) xi(0) += 1.0;
  return xi;
}

// Algebraic curvature-like tensor in 3 dimensions from a symmetric matrix on
// the antisymmetric index pairs (0,1), (0,2), (1,2). In three dimensions any
// pair-symmetric tensor satisfies the first Bianchi identity.
inline CurvatureTensor make_pair_tensor3(const Eigen::Matrix3d& B) {
  auto pair_of = [](int i, int j, double& sign) -> int {
    sign = i < j ? 1.0 : -1.0;
    int a = std::min(i, j), b = std::max(i, j);
    if (a == 0 && b == 1) return 0;
    if (a == 0 && b == 2) return 1;
    return 2;
  };
  CurvatureTensor r(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (k == l) continue;
          double si, sk;
          int pi = pair_of(i, j, si), pk = pair_of(k, l, sk);
          r.at(i, j, k, l) = si * sk * 0.5 * (B(pi, pk) + B(pk, pi));
        }
    }
  r.finalize_contractions();
  return r;
}

// Metric defined by its inverse g^{ab}(x) = delta_ab + (1/3) R_{aubv} x_u x_v,
// the normal-coordinate expansion at x = 0. Jets are exact (polynomial inverse
// differentiated through the matrix-inverse rule).
inline MetricField normal_form_metric(const CurvatureTensor& curv) {
  const int d = curv.dim();
  auto inv_poly = [curv, d](const Point& x) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0;
        for (int u = 0; u < d; ++u)
          for (int v = 0; v < d; ++v) s += curv.at(a, u, b, v) * x(u) * x(v);
        p(a, b) += s / 3.0;
      }
    return p;
  };
  auto d_inv_poly = [curv, d](const Point& x, int k) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0;
        for (int v = 0; v < d; ++v)
          s += (curv.at(a, k, b, v) + curv.at(a, v, b, k)) * x(v);
        p(a, b) = s / 3.0;
      }
    return p;
  };
  auto dd_inv_poly = [curv, d](int k, int l) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        p(a, b) = (curv.at(a, k, b, l) + curv.at(a, l, b, k)) / 3.0;
    return p;
  };

  auto eval = [inv_poly](const Point& x) { return inv_poly(x).inverse().eval(); };
  auto jets = [inv_poly, d_inv_poly, dd_inv_poly, d](const Point& x, int depth) {
    MetricJets mj;
    mj.dim = d;
    mj.depth = depth;
    Eigen::MatrixXd g = inv_poly(x).inverse();
    mj.value = g;
    if (depth >= 1) {
      mj.d1.resize(d);
      for (int k = 0; k < d; ++k) mj.d1[k] = -g * d_inv_poly(x, k) * g;
    }
    if (depth >= 2) {
      mj.d2.assign(d, std::vector<Eigen::MatrixXd>(d));
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          Eigen::MatrixXd pk = d_inv_poly(x, k), pl = d_inv_poly(x, l);
          mj.d2[k][l] = g * pk * g * pl * g + g * pl * g * pk * g -
                        g * dd_inv_poly(k, l) * g;
        }
    }
    return mj;
  };
  std::vector<CoordRange> dom(d, CoordRange{-0.25, 0.25, false});
  return MetricField::from_callables(d, eval, jets, dom, Signature::Riemannian,
                                     DerivMode::Analytic, "normal-form");
}

// Positive-definite trig-polynomial metric with randomized coefficients,
// periodic chart [0, 2pi)^dim.
inline MetricField random_expression_metric(int dim, unsigned seed,
                                            DerivMode mode = DerivMode::Analytic) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.15, 0.35), base(2.0, 3.0), phase(0.0, 6.0);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> entries(dim, std::vector<std::string>(dim, "0"));
  for (int i = 0; i < dim; ++i) {
    std::string arg = "x" + std::to_string(1 + static_cast<int>(rng() % dim));
    entries[i][i] = num(base(rng)) + " + " + num(amp(rng)) + "*sin(" + arg + " + " +
                    num(phase(rng)) + ")";
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      std::string e = num(0.5 * amp(rng)) + "*cos(x" + std::to_string(i + 1) + " - x" +
                      std::to_string(j + 1) + ")";
      entries[i][j] = e;
      entries[j][i] = e;
    }
  std::vector<CoordRange> dom(dim, CoordRange{0.0, 2 * M_PI, true});
  return MetricField::from_expressions(entries, dom, mode, FdSteps{}, "random-smooth");
}

}  // namespace wrtest
