#pragma once

// Metric fields on single coordinate charts. A MetricField evaluates g_{ij}
// at a point and supplies first/second coordinate derivatives, either
// analytically (expression-backed entries or user callbacks) or by central
// finite differences on the evaluator. Charts carry per-coordinate ranges
// with periodicity flags so quadrature can place nodes correctly.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "warpres/errors.hpp"
#include "warpres/expr.hpp"
#include "warpres/jet.hpp"

namespace warpres {

using Point = Eigen::VectorXd;

enum class Signature { Riemannian, Indefinite };
enum class DerivMode { Analytic, FiniteDifference };

struct CoordRange {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
};

// Central-difference step sizes for derivative fallback.
struct FdSteps {
  double first = 1e-4;
  double second = 1e-3;
};

// Value and coordinate derivatives of g at one point. d1[k](i,j) = d_k g_ij,
// d2[k][l](i,j) = d_k d_l g_ij. `depth` says how many orders are populated.
struct MetricJets {
  int dim = 0;
  int depth = 0;
  Eigen::MatrixXd value;
  std::vector<Eigen::MatrixXd> d1;
  std::vector<std::vector<Eigen::MatrixXd>> d2;

  // Packages one entry as a scalar jet.
  RJet entry(int i, int j) const {
    RJet jet(dim, depth);
    jet.value() = value(i, j);
    if (depth >= 1)
      for (int k = 0; k < dim; ++k) jet.grad()(k) = d1[k](i, j);
    if (depth >= 2)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) jet.hess()(k, l) = d2[k][l](i, j);
    return jet;
  }
};

// Inverse of a symmetric metric matrix with a conditioning guard.
inline Eigen::MatrixXd inverse_metric(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) throw DimensionMismatch("inverse_metric: matrix not square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw Error("inverse_metric: matrix not symmetric");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0 || smax / smin > 1e12)
    throw SingularMetric("metric condition number exceeds 1e12");
  Eigen::MatrixXd inv = g.inverse();
  return 0.5 * (inv + inv.transpose());
}

class MetricField {
 public:
  using EvalFn = std::function<Eigen::MatrixXd(const Point&)>;
  using D1Fn = std::function<Eigen::MatrixXd(const Point&, int)>;
  using D2Fn = std::function<Eigen::MatrixXd(const Point&, int, int)>;
  using JetsFn = std::function<MetricJets(const Point&, int)>;

  MetricField() = default;

  int dim() const { return dim_; }
  Signature signature() const { return signature_; }
  DerivMode deriv_mode() const { return mode_; }
  const FdSteps& fd_steps() const { return fd_; }
  const std::vector<CoordRange>& domain() const { return domain_; }
  const std::string& name() const { return name_; }

  Eigen::MatrixXd eval(const Point& x) const {
    check_point(x);
    Eigen::MatrixXd g = eval_(x);
    if (!g.allFinite()) throw Error("metric evaluation produced non-finite entries");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff()))
      throw Error("metric evaluator returned a non-symmetric matrix");
    return 0.5 * (g + g.transpose());
  }

  // Value plus derivative orders up to `depth` (<= 2).
  MetricJets jets(const Point& x, int depth) const {
    check_point(x);
    if (depth > 2) throw DerivativeUnavailable("metric jets support depth <= 2");
    if (jets_) return jets_(x, depth);
    MetricJets mj;
    mj.dim = dim_;
    mj.depth = depth;
    mj.value = eval(x);
    if (depth >= 1) mj.d1 = first_all(x);
    if (depth >= 2) mj.d2 = second_all(x);
    return mj;
  }

  Eigen::MatrixXd first_deriv(const Point& x, int k) const {
    if (mode_ == DerivMode::Analytic) {
      if (!d1_) throw DerivativeUnavailable("analytic mode without first derivatives");
      return d1_(x, k);
    }
    Point xp = x, xm = x;
    xp(k) += fd_.first;
    xm(k) -= fd_.first;
    return (eval_(xp) - eval_(xm)) / (2 * fd_.first);
  }

  Eigen::MatrixXd second_deriv(const Point& x, int k, int l) const {
    if (mode_ == DerivMode::Analytic) {
      if (!d2_) throw DerivativeUnavailable("analytic mode without second derivatives");
      return d2_(x, k, l);
    }
    double h = fd_.second;
    if (k == l) {
      Point xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      return (eval_(xp) - 2 * eval_(x) + eval_(xm)) / (h * h);
    }
    Point xpp = x, xpm = x, xmp = x, xmm = x;
    xpp(k) += h; xpp(l) += h;
    xpm(k) += h; xpm(l) -= h;
    xmp(k) -= h; xmp(l) += h;
    xmm(k) -= h; xmm(l) -= h;
    return (eval_(xpp) - eval_(xpm) - eval_(xmp) + eval_(xmm)) / (4 * h * h);
  }

  // --- factories ---------------------------------------------------------

  static MetricField constant(const Eigen::MatrixXd& g, std::vector<CoordRange> domain,
                              const std::string& name = "constant") {
    MetricField m;
    m.dim_ = static_cast<int>(g.rows());
    m.domain_ = std::move(domain);
    m.name_ = name;
    m.mode_ = DerivMode::Analytic;
    Eigen::MatrixXd gc = g;
    m.eval_ = [gc](const Point&) { return gc; };
    int d = m.dim_;
    m.d1_ = [d](const Point&, int) { return Eigen::MatrixXd::Zero(d, d); };
    m.d2_ = [d](const Point&, int, int) { return Eigen::MatrixXd::Zero(d, d); };
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gc);
    m.signature_ = es.eigenvalues().minCoeff() > 0 ? Signature::Riemannian
                                                   : Signature::Indefinite;
    return m;
  }

  // Metric whose entries are expression strings over variables x1..xk.
  // Analytic mode differentiates the parsed trees; finite-difference mode
  // keeps the same evaluator but derives by central differences.
  static MetricField from_expressions(const std::vector<std::vector<std::string>>& entries,
                                      std::vector<CoordRange> domain,
                                      DerivMode mode = DerivMode::Analytic,
                                      FdSteps fd = FdSteps{},
                                      const std::string& name = "custom") {
    int d = static_cast<int>(entries.size());
    auto trees = std::make_shared<std::vector<std::vector<expr::AstPtr>>>(d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(entries[i].size()) != d)
        throw DimensionMismatch("metric entry matrix is not square");
      (*trees)[i].resize(d);
      for (int j = 0; j < d; ++j) (*trees)[i][j] = expr::parse(entries[i][j]);
    }
    std::vector<std::string> vars(d);
    for (int k = 0; k < d; ++k) vars[k] = "x" + std::to_string(k + 1);

    auto env_of = [vars, d](const Point& x) {
      expr::Env env;
      for (int k = 0; k < d; ++k) env[vars[k]] = x(k);
      return env;
    };

    MetricField m;
    m.dim_ = d;
    m.domain_ = std::move(domain);
    m.name_ = name;
    m.mode_ = mode;
    m.fd_ = fd;
    m.signature_ = Signature::Riemannian;
    m.eval_ = [trees, env_of, d](const Point& x) {
      auto env = env_of(x);
      Eigen::MatrixXd g(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = expr::eval((*trees)[i][j], env);
      return g;
    };
    if (mode == DerivMode::Analytic) {
      auto dtrees = std::make_shared<std::vector<std::vector<std::vector<expr::AstPtr>>>>(d);
      auto ddtrees =
          std::make_shared<std::vector<std::vector<std::vector<std::vector<expr::AstPtr>>>>>(d);
      for (int k = 0; k < d; ++k) {
        (*dtrees)[k].assign(d, std::vector<expr::AstPtr>(d));
        (*ddtrees)[k].assign(d, std::vector<std::vector<expr::AstPtr>>(d));
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            (*dtrees)[k][i][j] = expr::differentiate((*trees)[i][j], vars[k]);
      }
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
              if ((*ddtrees)[k][i][j].empty())
                (*ddtrees)[k][i][j].resize(d);
              (*ddtrees)[k][i][j][l] = expr::differentiate((*dtrees)[k][i][j], vars[l]);
            }
          }
      m.d1_ = [dtrees, env_of, d](const Point& x, int k) {
        auto env = env_of(x);
        Eigen::MatrixXd g(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) g(i, j) = expr::eval((*dtrees)[k][i][j], env);
        return g;
      };
      m.d2_ = [ddtrees, env_of, d](const Point& x, int k, int l) {
        auto env = env_of(x);
        Eigen::MatrixXd g(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) g(i, j) = expr::eval((*ddtrees)[k][i][j][l], env);
        return g;
      };
    }
    return m;
  }

  // Metric backed by explicit callables (used by warped products and tests).
  static MetricField from_callables(int dim, EvalFn eval, JetsFn jets,
                                    std::vector<CoordRange> domain, Signature sig,
                                    DerivMode mode, const std::string& name) {
    MetricField m;
    m.dim_ = dim;
    m.eval_ = std::move(eval);
    m.jets_ = std::move(jets);
    m.domain_ = std::move(domain);
    m.signature_ = sig;
    m.mode_ = mode;
    m.name_ = name;
    return m;
  }

  MetricField with_deriv_mode(DerivMode mode, FdSteps fd = FdSteps{}) const {
    MetricField m = *this;
    m.mode_ = mode;
    m.fd_ = fd;
    if (mode == DerivMode::FiniteDifference) {
      m.d1_ = nullptr;
      m.d2_ = nullptr;
      m.jets_ = nullptr;  // fall back to differencing the evaluator
    }
    return m;
  }

 private:
  void check_point(const Point& x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw DimensionMismatch("point dimension " + std::to_string(x.size()) +
                              " does not match chart dimension " + std::to_string(dim_));
    if (!x.allFinite()) throw Error("point has non-finite coordinates");
  }

  std::vector<Eigen::MatrixXd> first_all(const Point& x) const {
    std::vector<Eigen::MatrixXd> d1(dim_);
    for (int k = 0; k < dim_; ++k) d1[k] = first_deriv(x, k);
    return d1;
  }

  std::vector<std::vector<Eigen::MatrixXd>> second_all(const Point& x) const {
    std::vector<std::vector<Eigen::MatrixXd>> d2(dim_, std::vector<Eigen::MatrixXd>(dim_));
    for (int k = 0; k < dim_; ++k)
      for (int l = k; l < dim_; ++l) {
        d2[k][l] = second_deriv(x, k, l);
        if (l != k) d2[l][k] = d2[k][l];
      }
    return d2;
  }

  int dim_ = 0;
  Signature signature_ = Signature::Riemannian;
  DerivMode mode_ = DerivMode::FiniteDifference;
  FdSteps fd_;
  std::vector<CoordRange> domain_;
  std::string name_;
  EvalFn eval_;
  D1Fn d1_;
  D2Fn d2_;
  JetsFn jets_;
};

// ---------------------------------------------------------------------------
// Standard chart library
// ---------------------------------------------------------------------------

namespace charts {

// S^1 of radius r as the chart x1 in [0, 2pi), metric r^2 dx^2.
inline MetricField circle(double r, DerivMode mode = DerivMode::Analytic) {
  Eigen::MatrixXd g(1, 1);
  g(0, 0) = r * r;
  auto m = MetricField::constant(g, {{0.0, 2 * M_PI, true}}, "circle");
  return mode == DerivMode::Analytic ? m : m.with_deriv_mode(mode);
}

// Flat k-torus: identity metric, every coordinate periodic on [0, 2pi).
inline MetricField torus(int k, DerivMode mode = DerivMode::Analytic) {
  std::vector<CoordRange> dom(k, CoordRange{0.0, 2 * M_PI, true});
  auto m = MetricField::constant(Eigen::MatrixXd::Identity(k, k), dom, "torus");
  return mode == DerivMode::Analytic ? m : m.with_deriv_mode(mode);
}

// Round S^n of radius r in hyperspherical coordinates:
//   g = r^2 diag(1, sin^2 x1, sin^2 x1 sin^2 x2, ...)
// x1..x_{n-1} in (0, pi), x_n in [0, 2pi) periodic.
inline MetricField sphere(int n, double r, DerivMode mode = DerivMode::Analytic) {
  if (n < 1) throw ConfigError("sphere dimension must be >= 1");
  if (n == 1) return circle(r, mode);
  std::vector<std::vector<std::string>> entries(n, std::vector<std::string>(n, "0"));
  std::string radial = std::to_string(r) + "*" + std::to_string(r);
  std::string acc = radial;
  for (int i = 0; i < n; ++i) {
    entries[i][i] = acc;
    acc += "*sin(x" + std::to_string(i + 1) + ")^2";
  }
  std::vector<CoordRange> dom(n);
  for (int i = 0; i < n - 1; ++i) dom[i] = {0.0, M_PI, false};
  dom[n - 1] = {0.0, 2 * M_PI, true};
  return MetricField::from_expressions(entries, dom, mode, FdSteps{}, "sphere");
}

}  // namespace charts

}  // namespace warpres
