#pragma once

// Symbols of Laplace-type operators. For a metric g the operator
//   -g^{jl} (d_j d_l - Gamma^a_jl d_a)
// has full symbol
//   sigma_2 = |xi|_g^2,
//   sigma_1 = i sum_a Gamma^a xi_a   (Gamma^a the contracted Christoffel),
//   sigma_0 = 0.
// The warped-product variant splits into factor blocks with the 1/eps and
// 1/f^2 scalings and picks up the warp-gradient contribution in sigma_1.

#include <memory>

#include "warpres/curvature.hpp"
#include "warpres/symbol.hpp"
#include "warpres/warped.hpp"

namespace warpres {

namespace detail {

// Contracted Christoffel Gamma^t = g^{jl} Gamma^t_jl as coefficient jets
// (value and first derivatives; second metric derivatives feed the gradient).
inline std::vector<CJet> contracted_christoffel_jets(const MetricJets& mj,
                                                     const NormContext& ctx) {
  int d = mj.dim;
  std::vector<CJet> out(d, CJet(d, std::min(ctx.depth, mj.depth) - 1 >= 0
                                       ? std::min(ctx.depth, mj.depth) - 1
                                       : 0));
  for (int t = 0; t < d; ++t) {
    CJet acc(d, 2);
    bool first = true;
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        CJet gjl = ctx.entry(j, l);
        if (jet_is_zero(gjl)) continue;
        for (int s = 0; s < d; ++s) {
          CJet gts = ctx.entry(t, s);
          if (jet_is_zero(gts)) continue;
          CJet dterm = (mj.entry(j, s).derivative(l) + mj.entry(l, s).derivative(j) -
                        mj.entry(j, l).derivative(s))
                           .cast<Complex>();
          CJet contrib = gjl * gts * dterm * Complex(0.5);
          acc = first ? contrib : acc + contrib;
          first = false;
        }
      }
    out[t] = first ? CJet(d, std::max(ctx.depth - 1, 0)) : acc;
  }
  return out;
}

}  // namespace detail

// A symbol as a function of position: evaluation produces graded jet
// coefficients. `norm_metric` is the metric whose norm the |xi|^{2q} factors
// refer to and whose jets supply the derivative context.
class SymbolField {
 public:
  virtual ~SymbolField() = default;
  virtual int dim() const = 0;
  virtual const MetricField& norm_metric() const = 0;
  virtual JetSymbol jet_at(const Point& x) const = 0;

  FullSymbol at(const Point& x) const { return jet_at(x).values(); }
};

enum class LeadingRep {
  NormPower,   // sigma_2 carried as |xi|_g^2 (one term, canonical for the parametrix)
  Polynomial,  // sigma_2 expanded as g^{jl} xi_j xi_l
};

class LaplaceSymbolField : public SymbolField {
 public:
  LaplaceSymbolField(MetricField metric, LeadingRep rep = LeadingRep::NormPower)
      : metric_(std::move(metric)), rep_(rep) {}

  int dim() const override { return metric_.dim(); }
  const MetricField& norm_metric() const override { return metric_; }

  JetSymbol jet_at(const Point& x) const override {
    int d = metric_.dim();
    MetricJets mj = metric_.jets(x, 2);
    NormContext ctx = NormContext::from_jets(mj);

    JetSymbol sym(d, -100);
    JetTermMap p2;
    if (rep_ == LeadingRep::NormPower) {
      jadd(p2, TermKey{MultiIndex(d), 1}, CJet::constant(d, 1.0));
    } else {
      for (int j = 0; j < d; ++j)
        for (int l = j; l < d; ++l) {
          CJet g = ctx.entry(j, l);
          if (jet_is_zero(g)) continue;
          jadd(p2, TermKey{MultiIndex::unit(d, j) + MultiIndex::unit(d, l), 0},
               j == l ? g : g * Complex(2.0));
        }
    }
    sym.set_component(2, std::move(p2));

    JetTermMap p1;
    auto gamma = detail::contracted_christoffel_jets(mj, ctx);
    for (int a = 0; a < d; ++a)
      jadd(p1, TermKey{MultiIndex::unit(d, a), 0}, gamma[a] * kImag);
    sym.set_component(1, std::move(p1));
    return sym;
  }

 private:
  MetricField metric_;
  LeadingRep rep_;
};

// sigma(Delta_g) evaluated at x, polynomial leading form.
inline FullSymbol laplace_symbol(const MetricField& metric, const Point& x,
                                 LeadingRep rep = LeadingRep::Polynomial) {
  return LaplaceSymbolField(metric, rep).at(x);
}

// The warped operator's symbol assembled blockwise from the factor data:
//   sigma_2 = (1/eps)|xi^M|^2_{gM} + (1/f^2)|xi^N|^2_{gN}
//   sigma_1 = (i/eps) gM^{jl} Gamma^{k;M}_{jl} xi_k
//             - (i n/(eps f)) d_j f gM^{jk} xi_k
//             + (i/f^2) gN^{ab} Gamma^{c;N}_{ab} xi_c
//   sigma_0 = 0
// Coefficients are plain polynomials in xi (no norm powers); the field agrees
// with laplace_symbol of the assembled warped metric.
inline FullSymbol warped_laplace_symbol(const MetricField& g_m, const MetricField& g_n,
                                        const WarpedConfig& cfg, const Point& x) {
  const int m = g_m.dim(), n = g_n.dim(), d = m + n;
  if (cfg.m_dim() != m || cfg.n_dim() != n)
    throw DimensionMismatch("warped config does not match factor dimensions");
  Point xm = x.head(m), xn = x.tail(n);
  const double eps = cfg.epsilon();
  const double f = cfg.warp_value(xm);

  MetricJets jm = g_m.jets(xm, 2);
  MetricJets jn = g_n.jets(xn, 2);
  NormContext cm = NormContext::from_jets(jm);
  NormContext cn = NormContext::from_jets(jn);

  FullSymbol sym(d, -100);
  for (int j = 0; j < m; ++j)
    for (int l = j; l < m; ++l) {
      double g = cm.ginv(j, l);
      if (g == 0.0) continue;
      sym.add_term({Complex((j == l ? 1.0 : 2.0) * g / eps),
                    MultiIndex::unit(d, j) + MultiIndex::unit(d, l), 0});
    }
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double g = cn.ginv(a, b);
      if (g == 0.0) continue;
      sym.add_term({Complex((a == b ? 1.0 : 2.0) * g / (f * f)),
                    MultiIndex::unit(d, m + a) + MultiIndex::unit(d, m + b), 0});
    }

  auto gamma_m = detail::contracted_christoffel_jets(jm, cm);
  auto gamma_n = detail::contracted_christoffel_jets(jn, cn);
  Eigen::VectorXd df = cfg.warp_grad(xm);
  for (int k = 0; k < m; ++k) {
    Complex c = kImag * gamma_m[k].value() / eps;
    for (int j = 0; j < m; ++j) c -= kImag * (n / (eps * f)) * df(j) * cm.ginv(j, k);
    if (c != Complex(0)) sym.add_term({c, MultiIndex::unit(d, k), 0});
  }
  for (int c = 0; c < n; ++c) {
    Complex v = kImag * gamma_n[c].value() / (f * f);
    if (v != Complex(0)) sym.add_term({v, MultiIndex::unit(d, m + c), 0});
  }
  return sym;
}

}  // namespace warpres
