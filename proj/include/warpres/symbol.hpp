#pragma once

// Graded pseudodifferential symbol algebra. A symbol is a finite sum of
// terms c(x) * xi^mono * |xi|_g^{2q} where |xi|_g is the norm of the
// distinguished (Riemannian) metric supplying the derivative context. The
// homogeneity degree of a term is |mono| + 2q and every graded component
// holds terms of exactly its degree.
//
// Coefficients at a point are carried as jets so that the x-derivatives the
// composition formula needs are exact given exact metric jets. Differentiating
// in x acts on the coefficient jet and, through the chain rule, on the
// position dependence of |xi|_g^{2q} itself:
//   d_l (|xi|^{2q}) = q |xi|^{2(q-1)} * (d_l g^{ab}) xi_a xi_b.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "warpres/jet.hpp"
#include "warpres/metric.hpp"
#include "warpres/moments.hpp"
#include "warpres/multiindex.hpp"

namespace warpres {

using Complex = std::complex<double>;
inline constexpr Complex kImag{0.0, 1.0};

struct TermKey {
  MultiIndex mono;
  int norm_power = 0;

  int degree() const { return mono.degree() + 2 * norm_power; }
  bool operator<(const TermKey& o) const {
    if (norm_power != o.norm_power) return norm_power < o.norm_power;
    return mono < o.mono;
  }
  bool operator==(const TermKey& o) const {
    return norm_power == o.norm_power && mono == o.mono;
  }
};

struct SymbolTerm {
  Complex coeff;
  MultiIndex mono;
  int norm_power = 0;

  int degree() const { return mono.degree() + 2 * norm_power; }
};

// A symbol evaluated at one point: graded components of numeric terms.
class FullSymbol {
 public:
  FullSymbol() = default;
  FullSymbol(int dim, int floor) : dim_(dim), floor_(floor) {}

  int dim() const { return dim_; }
  int floor() const { return floor_; }

  const std::map<int, std::vector<SymbolTerm>, std::greater<int>>& components() const {
    return comps_;
  }

  std::vector<SymbolTerm> component(int degree) const {
    auto it = comps_.find(degree);
    return it == comps_.end() ? std::vector<SymbolTerm>{} : it->second;
  }

  void add_term(const SymbolTerm& t) {
    if (t.mono.size() != dim_) throw DimensionMismatch("term over wrong fiber dimension");
    int d = t.degree();
    if (d < floor_) return;
    auto& list = comps_[d];
    for (auto& u : list) {
      if (u.mono == t.mono && u.norm_power == t.norm_power) {
        u.coeff += t.coeff;
        return;
      }
    }
    list.push_back(t);
  }

  // sigma(x, xi) with |xi|_g^2 = xi^T ginv xi.
  Complex eval(const Eigen::VectorXd& xi, const Eigen::MatrixXd& ginv) const {
    Complex s = 0.0;
    for (const auto& [deg, terms] : comps_) s += eval_terms(terms, xi, ginv);
    return s;
  }

  Complex eval_component(int degree, const Eigen::VectorXd& xi,
                         const Eigen::MatrixXd& ginv) const {
    return eval_terms(component(degree), xi, ginv);
  }

  double max_abs_coeff(int degree) const {
    double m = 0;
    for (const auto& t : component(degree)) m = std::max(m, std::abs(t.coeff));
    return m;
  }

  // Restriction to the unit sphere of the norm metric's orthonormal frame:
  // |xi| = 1, norm powers drop.
  XiPolynomial restrict_component(int degree) const {
    XiPolynomial p;
    for (const auto& t : component(degree)) p.push_back({t.coeff, t.mono});
    return p;
  }

  // Rewrites positive norm powers through the quadratic form xi^T ginv xi,
  // leaving a plain polynomial part; negative powers are untouched. Used to
  // compare symbols built in different representations.
  FullSymbol expanded(const Eigen::MatrixXd& ginv) const {
    FullSymbol out(dim_, floor_);
    for (const auto& [deg, terms] : comps_) {
      for (const auto& t : terms) {
        if (t.norm_power <= 0) {
          out.add_term(t);
          continue;
        }
        std::vector<SymbolTerm> acc{{t.coeff, t.mono, 0}};
        for (int rep = 0; rep < t.norm_power; ++rep) {
          std::vector<SymbolTerm> next;
          for (const auto& a : acc)
            for (int j = 0; j < dim_; ++j)
              for (int l = 0; l < dim_; ++l) {
                if (ginv(j, l) == 0.0) continue;
                next.push_back({a.coeff * ginv(j, l), a.mono.plus(j).plus(l), 0});
              }
          acc = std::move(next);
        }
        for (const auto& a : acc) out.add_term(a);
      }
    }
    return out;
  }

  static Complex eval_terms(const std::vector<SymbolTerm>& terms, const Eigen::VectorXd& xi,
                            const Eigen::MatrixXd& ginv) {
    Complex s = 0.0;
    double norm2 = xi.dot(ginv * xi);
    for (const auto& t : terms) {
      double mono = 1.0;
      for (int k = 0; k < t.mono.size(); ++k) mono *= std::pow(xi(k), t.mono[k]);
      s += t.coeff * mono * std::pow(norm2, t.norm_power);
    }
    return s;
  }

 private:
  int dim_ = 0;
  int floor_ = -100;
  std::map<int, std::vector<SymbolTerm>, std::greater<int>> comps_;
};

// ---------------------------------------------------------------------------
// Jet-coefficient layer
// ---------------------------------------------------------------------------

// Inverse metric of the norm-owning metric together with its first and second
// coordinate derivatives, packaged for the chain rules above.
struct NormContext {
  int dim = 0;
  int depth = 0;
  Eigen::MatrixXd ginv;
  std::vector<Eigen::MatrixXd> dginv;
  std::vector<std::vector<Eigen::MatrixXd>> ddginv;

  static NormContext from_jets(const MetricJets& mj) {
    NormContext c;
    c.dim = mj.dim;
    c.depth = mj.depth;
    c.ginv = inverse_metric(mj.value);
    if (mj.depth >= 1) {
      c.dginv.resize(c.dim);
      for (int l = 0; l < c.dim; ++l) c.dginv[l] = -c.ginv * mj.d1[l] * c.ginv;
    }
    if (mj.depth >= 2) {
      c.ddginv.assign(c.dim, std::vector<Eigen::MatrixXd>(c.dim));
      for (int l = 0; l < c.dim; ++l)
        for (int v = 0; v < c.dim; ++v)
          c.ddginv[l][v] = -c.dginv[v] * mj.d1[l] * c.ginv - c.ginv * mj.d2[l][v] * c.ginv -
                           c.ginv * mj.d1[l] * c.dginv[v];
    }
    return c;
  }

  // g^{kl} packaged as a jet.
  CJet entry(int k, int l) const {
    CJet j(dim, depth);
    j.value() = ginv(k, l);
    if (depth >= 1)
      for (int a = 0; a < dim; ++a) j.grad()(a) = dginv[a](k, l);
    if (depth >= 2)
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) j.hess()(a, b) = ddginv[a][b](k, l);
    return j;
  }

  // d_lambda g^{kl} packaged as a jet (one depth level down).
  CJet entry_deriv(int lambda, int k, int l) const {
    if (depth < 1) throw DerivativeUnavailable("norm context lacks first derivatives");
    CJet j(dim, depth - 1);
    j.value() = dginv[lambda](k, l);
    if (depth >= 2)
      for (int a = 0; a < dim; ++a) j.grad()(a) = ddginv[a][lambda](k, l);
    return j;
  }
};

using JetTermMap = std::map<TermKey, CJet>;

inline bool jet_is_zero(const CJet& j) {
  if (j.value() != Complex(0)) return false;
  if (j.depth() >= 1 && j.grad().cwiseAbs().maxCoeff() != 0) return false;
  if (j.depth() >= 2 && j.hess().cwiseAbs().maxCoeff() != 0) return false;
  return true;
}

inline void jadd(JetTermMap& into, const TermKey& key, const CJet& c) {
  if (jet_is_zero(c)) return;
  auto it = into.find(key);
  if (it == into.end())
    into.emplace(key, c);
  else
    it->second = it->second + c;
}

inline JetTermMap jmul(const JetTermMap& a, const JetTermMap& b) {
  JetTermMap out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b)
      jadd(out, TermKey{ka.mono + kb.mono, ka.norm_power + kb.norm_power}, ca * cb);
  return out;
}

inline JetTermMap jscale(const JetTermMap& a, Complex s) {
  JetTermMap out;
  for (const auto& [k, c] : a) jadd(out, k, c * s);
  return out;
}

inline JetTermMap jsum(const JetTermMap& a, const JetTermMap& b) {
  JetTermMap out = a;
  for (const auto& [k, c] : b) jadd(out, k, c);
  return out;
}

// d/d xi_k. The monomial rule plus the norm-power chain rule
// d_{xi_k} |xi|^{2q} = 2q (g^{kl} xi_l) |xi|^{2(q-1)}.
inline JetTermMap jxi_deriv(const JetTermMap& a, int k, const NormContext& ctx) {
  JetTermMap out;
  for (const auto& [key, c] : a) {
    if (key.mono[k] > 0)
      jadd(out, TermKey{key.mono.plus(k, -1), key.norm_power},
           c * Complex(key.mono[k]));
    if (key.norm_power != 0) {
      for (int l = 0; l < ctx.dim; ++l) {
        CJet g = ctx.entry(k, l);
        if (jet_is_zero(g)) continue;
        jadd(out, TermKey{key.mono.plus(l), key.norm_power - 1},
             c * g * Complex(2.0 * key.norm_power));
      }
    }
  }
  return out;
}

// d/d x_lambda: differentiates coefficient jets and applies the norm-power
// chain rule in x.
inline JetTermMap jx_deriv(const JetTermMap& a, int lambda, const NormContext& ctx) {
  JetTermMap out;
  for (const auto& [key, c] : a) {
    jadd(out, key, c.derivative(lambda));
    if (key.norm_power != 0) {
      for (int al = 0; al < ctx.dim; ++al)
        for (int be = 0; be < ctx.dim; ++be) {
          CJet dg = ctx.entry_deriv(lambda, al, be);
          if (jet_is_zero(dg)) continue;
          jadd(out, TermKey{key.mono.plus(al).plus(be), key.norm_power - 1},
               c * dg * Complex(key.norm_power));
        }
    }
  }
  return out;
}

// D_x = -i d_x, the convention of the composition expansion.
inline JetTermMap jDx(const JetTermMap& a, int lambda, const NormContext& ctx) {
  return jscale(jx_deriv(a, lambda, ctx), -kImag);
}

// Graded symbol with jet coefficients, the evaluation of a symbol field at a
// point.
class JetSymbol {
 public:
  JetSymbol() = default;
  JetSymbol(int dim, int floor) : dim_(dim), floor_(floor) {}

  int dim() const { return dim_; }
  int floor() const { return floor_; }
  const std::map<int, JetTermMap, std::greater<int>>& components() const { return comps_; }

  JetTermMap component(int degree) const {
    auto it = comps_.find(degree);
    return it == comps_.end() ? JetTermMap{} : it->second;
  }

  void set_component(int degree, JetTermMap terms) {
    for (const auto& [key, c] : terms)
      if (key.degree() != degree)
        throw Error("graded component received a term of wrong homogeneity");
    if (degree < floor_ || terms.empty()) return;
    comps_[degree] = std::move(terms);
  }

  FullSymbol values() const {
    FullSymbol out(dim_, floor_);
    for (const auto& [deg, terms] : comps_)
      for (const auto& [key, c] : terms)
        out.add_term(SymbolTerm{c.value(), key.mono, key.norm_power});
    return out;
  }

 private:
  int dim_ = 0;
  int floor_ = -100;
  std::map<int, JetTermMap, std::greater<int>> comps_;
};

}  // namespace warpres
