#pragma once

// Warped products eps*M x_f N: block metric eps*gM (+) f(x_M)^2*gN on the
// product chart, plus the closed-form Levi-Civita connection assembled from
// the three structure cases (base, mixed, fiber-fiber).

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "warpres/curvature.hpp"
#include "warpres/expr.hpp"
#include "warpres/metric.hpp"

namespace warpres {

class WarpedConfig {
 public:
  WarpedConfig() = default;

  static WarpedConfig make(double epsilon, const std::string& warp_src, int m_dim,
                           int n_dim) {
    if (epsilon == 0.0) throw ConfigError("epsilon must be nonzero");
    if (m_dim < 1 || n_dim < 1) throw ConfigError("factor dimensions must be positive");
    WarpedConfig c;
    c.epsilon_ = epsilon;
    c.m_dim_ = m_dim;
    c.n_dim_ = n_dim;
    c.warp_src_ = warp_src;
    c.warp_ = expr::parse(warp_src);
    expr::Env declared;
    for (int k = 0; k < m_dim; ++k) declared["x" + std::to_string(k + 1)] = 0.0;
    expr::check_vars(c.warp_, declared);
    c.dwarp_.resize(m_dim);
    c.ddwarp_.assign(m_dim, std::vector<expr::AstPtr>(m_dim));
    for (int k = 0; k < m_dim; ++k)
      c.dwarp_[k] = expr::differentiate(c.warp_, "x" + std::to_string(k + 1));
    for (int k = 0; k < m_dim; ++k)
      for (int l = 0; l < m_dim; ++l)
        c.ddwarp_[k][l] = expr::differentiate(c.dwarp_[k], "x" + std::to_string(l + 1));
    return c;
  }

  double epsilon() const { return epsilon_; }
  int m_dim() const { return m_dim_; }
  int n_dim() const { return n_dim_; }
  const std::string& warp_source() const { return warp_src_; }

  bool warp_is_constant() const { return warp_ && warp_->kind == expr::Ast::Kind::Constant; }

  double warp_value(const Point& x_m) const {
    double f = expr::eval(warp_, env_of(x_m));
    if (f <= 0.0)
      throw NonPositiveWarp("warp function is not positive at a sampled point");
    return f;
  }

  Eigen::VectorXd warp_grad(const Point& x_m) const {
    auto env = env_of(x_m);
    Eigen::VectorXd g(m_dim_);
    for (int k = 0; k < m_dim_; ++k) g(k) = expr::eval(dwarp_[k], env);
    return g;
  }

  Eigen::MatrixXd warp_hess(const Point& x_m) const {
    auto env = env_of(x_m);
    Eigen::MatrixXd h(m_dim_, m_dim_);
    for (int k = 0; k < m_dim_; ++k)
      for (int l = 0; l < m_dim_; ++l) h(k, l) = expr::eval(ddwarp_[k][l], env);
    return h;
  }

  // Warp as a jet in product coordinates (derivatives vanish along N).
  RJet warp_jet_product(const Point& x_m, int total_dim, int depth) const {
    RJet j(total_dim, depth);
    j.value() = warp_value(x_m);
    if (depth >= 1) j.grad().head(m_dim_) = warp_grad(x_m);
    if (depth >= 2) j.hess().topLeftCorner(m_dim_, m_dim_) = warp_hess(x_m);
    return j;
  }

 private:
  expr::Env env_of(const Point& x_m) const {
    if (static_cast<int>(x_m.size()) != m_dim_)
      throw DimensionMismatch("warp argument dimension mismatch");
    expr::Env env;
    for (int k = 0; k < m_dim_; ++k) env["x" + std::to_string(k + 1)] = x_m(k);
    return env;
  }

  double epsilon_ = 1.0;
  int m_dim_ = 0, n_dim_ = 0;
  std::string warp_src_ = "1";
  expr::AstPtr warp_;
  std::vector<expr::AstPtr> dwarp_;
  std::vector<std::vector<expr::AstPtr>> ddwarp_;
};

namespace detail {

// Embeds a factor jet into product coordinates at the given offset.
inline RJet lift_jet(const RJet& j, int total_dim, int offset) {
  RJet out(total_dim, j.depth());
  out.value() = j.value();
  if (j.depth() >= 1) out.grad().segment(offset, j.dim()) = j.grad();
  if (j.depth() >= 2)
    out.hess().block(offset, offset, j.dim(), j.dim()) = j.hess();
  return out;
}

}  // namespace detail

inline MetricField build_warped_product(const MetricField& g_m, const MetricField& g_n,
                                        const WarpedConfig& cfg) {
  if (cfg.m_dim() != g_m.dim() || cfg.n_dim() != g_n.dim())
    throw DimensionMismatch("warped config does not match factor dimensions");
  const int m = g_m.dim(), n = g_n.dim(), d = m + n;
  const double eps = cfg.epsilon();

  auto eval = [g_m, g_n, cfg, m, n, d, eps](const Point& x) {
    Point xm = x.head(m), xn = x.tail(n);
    double f = cfg.warp_value(xm);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    g.topLeftCorner(m, m) = eps * g_m.eval(xm);
    g.bottomRightCorner(n, n) = f * f * g_n.eval(xn);
    return g;
  };

  auto jets = [g_m, g_n, cfg, m, n, d, eps](const Point& x, int depth) {
    Point xm = x.head(m), xn = x.tail(n);
    MetricJets jm = g_m.jets(xm, depth);
    MetricJets jn = g_n.jets(xn, depth);
    RJet f = cfg.warp_jet_product(xm, d, depth);
    RJet f2 = f * f;

    MetricJets out;
    out.dim = d;
    out.depth = depth;
    out.value = Eigen::MatrixXd::Zero(d, d);
    if (depth >= 1) out.d1.assign(d, Eigen::MatrixXd::Zero(d, d));
    if (depth >= 2)
      out.d2.assign(d, std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(d, d)));

    auto store = [&](int i, int j, const RJet& e) {
      out.value(i, j) = e.value();
      out.value(j, i) = e.value();
      if (depth >= 1)
        for (int k = 0; k < d; ++k) {
          out.d1[k](i, j) = e.grad()(k);
          out.d1[k](j, i) = e.grad()(k);
        }
      if (depth >= 2)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            out.d2[k][l](i, j) = e.hess()(k, l);
            out.d2[k][l](j, i) = e.hess()(k, l);
          }
    };

    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        store(i, j, detail::lift_jet(jm.entry(i, j), d, 0) * eps);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        store(m + a, m + b, f2 * detail::lift_jet(jn.entry(a, b), d, m));
    return out;
  };

  std::vector<CoordRange> dom = g_m.domain();
  dom.insert(dom.end(), g_n.domain().begin(), g_n.domain().end());
  Signature sig = (eps < 0 || g_m.signature() == Signature::Indefinite ||
                   g_n.signature() == Signature::Indefinite)
                      ? Signature::Indefinite
                      : Signature::Riemannian;
  DerivMode mode = (g_m.deriv_mode() == DerivMode::Analytic &&
                    g_n.deriv_mode() == DerivMode::Analytic)
                       ? DerivMode::Analytic
                       : DerivMode::FiniteDifference;
  return MetricField::from_callables(d, eval, jets, std::move(dom), sig, mode, "warped");
}

// Connection of the warped product assembled from the closed-form cases:
// base-base from gM, mixed Gamma^c_jb = (d_j f / f) delta^c_b, and
// fiber-fiber M-part -(f/eps) (grad_M f)^k gN_bc, fiber-fiber N-part from gN.
inline ChristoffelTable warped_christoffel_closed_form(const MetricField& g_m,
                                                       const MetricField& g_n,
                                                       const WarpedConfig& cfg,
                                                       const Point& x) {
  const int m = g_m.dim(), n = g_n.dim(), d = m + n;
  Point xm = x.head(m), xn = x.tail(n);

  ChristoffelTable gm = christoffel(g_m, xm);
  ChristoffelTable gn = christoffel(g_n, xn);
  double f = cfg.warp_value(xm);
  Eigen::VectorXd df = cfg.warp_grad(xm);
  Eigen::MatrixXd gm_val = g_m.eval(xm);
  Eigen::MatrixXd gn_val = g_n.eval(xn);
  Eigen::MatrixXd gm_inv = inverse_metric(gm_val);
  Eigen::VectorXd grad_f = gm_inv * df;  // index raised with gM

  ChristoffelTable t;
  t.dim = d;
  t.gamma.assign(d, Eigen::MatrixXd::Zero(d, d));

  for (int k = 0; k < m; ++k)
    t.gamma[k].topLeftCorner(m, m) = gm.gamma[k];
  for (int c = 0; c < n; ++c)
    t.gamma[m + c].bottomRightCorner(n, n) = gn.gamma[c];
  for (int j = 0; j < m; ++j)
    for (int b = 0; b < n; ++b) {
      t.gamma[m + b](j, m + b) = df(j) / f;
      t.gamma[m + b](m + b, j) = df(j) / f;
    }
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < m; ++k)
        t.gamma[k](m + b, m + c) = -(f / cfg.epsilon()) * grad_f(k) * gn_val(b, c);

  // Contraction against the warped inverse metric.
  Eigen::MatrixXd ginv = Eigen::MatrixXd::Zero(d, d);
  ginv.topLeftCorner(m, m) = gm_inv / cfg.epsilon();
  ginv.bottomRightCorner(n, n) = inverse_metric(gn_val) / (f * f);
  t.contracted = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < d; ++k) {
    double s = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += ginv(i, j) * t.gamma[k](i, j);
    t.contracted(k) = s;
  }
  return t;
}

}  // namespace warpres
