#pragma once

// Symbol-by-symbol approximate inverse of a Laplace-type symbol p2 + p1 + p0
// and the graded composition product. The recursion
//   q_{-2} = p2^{-1}
//   q_{-3} = -p2^{-1} [ p1 q_{-2} + sum_j (d_{xi_j} p2) D_{x_j} q_{-2} ]
//   q_{-4} = -p2^{-1} [ p1 q_{-3} + p0 q_{-2}
//                       + sum_j (d_{xi_j} p1) D_{x_j} q_{-2}
//                       + sum_j (d_{xi_j} p2) D_{x_j} q_{-3}
//                       + (1/2) sum_{ij} (d_{xi_i} d_{xi_j} p2) D_{x_i} D_{x_j} q_{-2} ]
// is carried out in the term algebra, so p2^{-1} is exactly the norm power
// |xi|_g^{-2} and cancellations in the composition identity happen at the
// coefficient level.

#include "warpres/laplace.hpp"

namespace warpres {

class ParametrixField : public SymbolField {
 public:
  ParametrixField(MetricField metric, int depth)
      : base_(std::move(metric)), depth_(depth) {
    if (depth < 2 || depth > 4)
      throw TruncationTooDeep("parametrix depth must be 2, 3 or 4");
  }

  int dim() const override { return base_.norm_metric().dim(); }
  const MetricField& norm_metric() const override { return base_.norm_metric(); }

  JetSymbol jet_at(const Point& x) const override {
    const MetricField& g = base_.norm_metric();
    int d = g.dim();
    if (g.signature() == Signature::Indefinite)
      throw NotElliptic("leading symbol is not elliptic: indefinite metric");
    MetricJets mj = g.jets(x, 2);
    {
      Eigen::LLT<Eigen::MatrixXd> llt(mj.value);
      if (llt.info() != Eigen::Success)
        throw NotElliptic("leading symbol is not positive definite at this point");
    }
    NormContext ctx = NormContext::from_jets(mj);
    JetSymbol lap = base_.jet_at(x);
    JetTermMap p2 = lap.component(2);
    JetTermMap p1 = lap.component(1);

    // p2^{-1} = |xi|^{-2} as a single term.
    JetTermMap inv2;
    jadd(inv2, TermKey{MultiIndex(d), -1}, CJet::constant(d, 1.0));

    JetSymbol out(d, -2 - depth_);
    out.set_component(-2, inv2);
    if (depth_ >= 3) {
      JetTermMap rhs = jmul(p1, inv2);
      for (int j = 0; j < d; ++j)
        rhs = jsum(rhs, jmul(jxi_deriv(p2, j, ctx), jDx(inv2, j, ctx)));
      out.set_component(-3, jscale(jmul(inv2, rhs), -1.0));
    }
    if (depth_ >= 4) {
      JetTermMap q3 = out.component(-3);
      JetTermMap rhs = jmul(p1, q3);
      for (int j = 0; j < d; ++j) {
        rhs = jsum(rhs, jmul(jxi_deriv(p1, j, ctx), jDx(inv2, j, ctx)));
        rhs = jsum(rhs, jmul(jxi_deriv(p2, j, ctx), jDx(q3, j, ctx)));
      }
      for (int i = 0; i < d; ++i) {
        JetTermMap dxi = jDx(inv2, i, ctx);
        for (int j = 0; j < d; ++j)
          rhs = jsum(rhs, jscale(jmul(jxi_deriv(jxi_deriv(p2, i, ctx), j, ctx),
                                      jDx(dxi, j, ctx)),
                                 0.5));
      }
      out.set_component(-4, jscale(jmul(inv2, rhs), -1.0));
    }
    return out;
  }

 private:
  LaplaceSymbolField base_;
  int depth_;
};

// q_{-2}..q_{-(depth)} of the metric's Laplacian at x.
inline FullSymbol parametrix(const MetricField& metric, const Point& x, int depth) {
  return ParametrixField(metric, depth).at(x);
}

// Graded composition sum_{|alpha| <= 2} (1/alpha!) d_xi^alpha[sigma(A)]
// D_x^alpha[sigma(B)], truncated below `floor`. Contributions that would need
// |alpha| > 2 to reach the floor raise TruncationTooDeep.
inline FullSymbol compose(const SymbolField& A, const SymbolField& B, const Point& x,
                          int floor) {
  if (A.dim() != B.dim()) throw DimensionMismatch("composed fields over different charts");
  int d = A.dim();
  NormContext ctx = NormContext::from_jets(B.norm_metric().jets(x, 2));
  JetSymbol ja = A.jet_at(x);
  JetSymbol jb = B.jet_at(x);

  int amin = 0, bmin = 0;
  for (const auto& [deg, terms] : ja.components()) amin = std::min(amin, deg);
  for (const auto& [deg, terms] : jb.components()) bmin = std::min(bmin, deg);

  FullSymbol out(d, floor);
  std::map<int, JetTermMap> acc;
  for (const auto& [da, ta] : ja.components()) {
    // Highest-degree surviving pairing for this component; deeper ones would
    // need |alpha| beyond the supported order.
    if (da + bmin - 3 >= floor)
      throw TruncationTooDeep(
          "requested floor needs xi-derivative order above 2 in the composition");
    for (const auto& [db, tb] : jb.components()) {
      if (da + db >= floor) {
        for (const auto& [k, c] : ta)
          for (const auto& [kb, cb] : tb)
            jadd(acc[da + db], TermKey{k.mono + kb.mono, k.norm_power + kb.norm_power},
                 c * cb);
      }
      if (da - 1 + db >= floor) {
        for (int j = 0; j < d; ++j) {
          JetTermMap prod = jmul(jxi_deriv(ta, j, ctx), jDx(tb, j, ctx));
          for (const auto& [k, c] : prod) jadd(acc[da + db - 1], k, c);
        }
      }
      if (da - 2 + db >= floor) {
        for (int i = 0; i < d; ++i) {
          JetTermMap dxi_b = jDx(tb, i, ctx);
          for (int j = 0; j < d; ++j) {
            JetTermMap prod = jmul(jxi_deriv(jxi_deriv(ta, i, ctx), j, ctx),
                                   jDx(dxi_b, j, ctx));
            for (const auto& [k, c] : prod) jadd(acc[da + db - 2], k, c * Complex(0.5));
          }
        }
      }
    }
  }
  for (const auto& [deg, terms] : acc)
    for (const auto& [k, c] : terms)
      out.add_term(SymbolTerm{c.value(), k.mono, k.norm_power});
  return out;
}

}  // namespace warpres
