#pragma once

// Residue density at a point: the six summands of the degree -2mbar component
// of sigma(warped Laplacian o (product Laplacian)^{-mbar}), each formed by
// generic term algebra (multiply, xi-differentiate, restrict to |xi| = 1,
// integrate monomials over the sphere) and the closed-form density they must
// add up to. The closed per-term contractions are deliberately NOT used here;
// they live in the tests as oracles.

#include <vector>

#include "warpres/moments.hpp"
#include "warpres/normal_jet.hpp"

namespace warpres {

struct SixTerms {
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0, t6 = 0;
  double sum() const { return t1 + t2 + t3 + t4 + t5 + t6; }
};

namespace detail {

using TermList = std::vector<SymbolTerm>;

inline TermList pmul(const TermList& a, const TermList& b) {
  TermList out;
  for (const auto& ta : a)
    for (const auto& tb : b)
      out.push_back({ta.coeff * tb.coeff, ta.mono + tb.mono,
                     ta.norm_power + tb.norm_power});
  return out;
}

// d/d xi_k in the orthonormal frame, where |xi|_g is the Euclidean norm:
// d_{xi_k} |xi|^{2q} = 2q xi_k |xi|^{2(q-1)}.
inline TermList pxi_deriv(const TermList& a, int k) {
  TermList out;
  for (const auto& t : a) {
    if (t.mono[k] > 0)
      out.push_back({t.coeff * Complex(t.mono[k]), t.mono.plus(k, -1), t.norm_power});
    if (t.norm_power != 0)
      out.push_back({t.coeff * Complex(2.0 * t.norm_power), t.mono.plus(k),
                     t.norm_power - 1});
  }
  return out;
}

inline TermList pscale(const TermList& a, Complex s) {
  TermList out = a;
  for (auto& t : out) t.coeff *= s;
  return out;
}

// Restricts to |xi| = 1 (norm powers drop) and integrates over the sphere.
inline Complex fiber_integral(const TermList& a, int dim, MomentTable& table) {
  XiPolynomial p;
  for (const auto& t : a) p.push_back({t.coeff, t.mono});
  return integrate_polynomial_over_sphere(p, dim, table);
}

inline double realized(Complex v, const char* what) {
  if (std::abs(v.imag()) > 1e-9)
    throw ImaginaryResidue(std::string(what) + " has non-negligible imaginary part");
  return v.real();
}

}  // namespace detail

// The warped operator's symbol at the point, expressed in the orthonormal
// frame of the product metric at the center of its normal coordinates: the
// factor blocks are Euclidean there and the factor Christoffels vanish, so
// only the warp gradient survives in sigma_1.
inline FullSymbol warped_symbol_normal_frame(double epsilon, double f,
                                             const Eigen::VectorXd& grad_f_frame, int m,
                                             int n) {
  if (epsilon == 0.0) throw ConfigError("epsilon must be nonzero");
  if (f <= 0.0) throw NonPositiveWarp("warp value must be positive");
  if (grad_f_frame.size() != m)
    throw FrameMismatch("warp gradient must have base-factor dimension");
  const int d = m + n;
  FullSymbol sym(d, -100);
  for (int a = 0; a < m; ++a)
    sym.add_term({Complex(1.0 / epsilon), MultiIndex::unit(d, a).plus(a), 0});
  for (int c = m; c < d; ++c)
    sym.add_term({Complex(1.0 / (f * f)), MultiIndex::unit(d, c).plus(c), 0});
  for (int k = 0; k < m; ++k) {
    if (grad_f_frame(k) == 0.0) continue;
    sym.add_term({-kImag * (n / (epsilon * f)) * grad_f_frame(k),
                  MultiIndex::unit(d, k), 0});
  }
  return sym;
}

// Fiber integrals of the six summands:
//   1) sigma_0 * s0              2) sigma_1 * s1
//   3) sigma_2 * s2              4) -i sum_l d_{xi_l} sigma_2 * d_s1[l]
//   5) -i sum_l d_{xi_l} sigma_1 * d_s0[l]
//   6) -(1/2) sum_{l,v} d_{xi_l} d_{xi_v} sigma_2 * dd_s0[l][v]
inline SixTerms density_terms(const CurvatureTensor& curv, const FullSymbol& warped_symbol,
                              const NormalJet& jet, int m, int n, MomentTable& table) {
  const int d = m + n;
  if (curv.dim() != d || jet.dim != d || warped_symbol.dim() != d)
    throw FrameMismatch("curvature, jet and symbol must share the product dimension");
  if (table.ambient_dim() != d)
    throw DimensionMismatch("moment table dimension does not match the fiber");

  using namespace detail;
  TermList sig2 = warped_symbol.component(2);
  TermList sig1 = warped_symbol.component(1);
  TermList sig0 = warped_symbol.component(0);

  SixTerms out;
  out.t1 = realized(fiber_integral(pmul(sig0, jet.s0), d, table), "term 1");
  out.t2 = realized(fiber_integral(pmul(sig1, jet.s1), d, table), "term 2");
  out.t3 = realized(fiber_integral(pmul(sig2, jet.s2), d, table), "term 3");

  Complex t4 = 0, t5 = 0, t6 = 0;
  for (int l = 0; l < d; ++l) {
    t4 += fiber_integral(pscale(pmul(pxi_deriv(sig2, l), jet.d_s1[l]), -kImag), d, table);
    t5 += fiber_integral(pscale(pmul(pxi_deriv(sig1, l), jet.d_s0[l]), -kImag), d, table);
    for (int v = 0; v < d; ++v)
      t6 += fiber_integral(
          pscale(pmul(pxi_deriv(pxi_deriv(sig2, l), v), jet.dd_s0[l][v]), -0.5), d,
          table);
  }
  out.t4 = realized(t4, "term 4");
  out.t5 = realized(t5, "term 5");
  out.t6 = realized(t6, "term 6");
  return out;
}

inline double assembled_density(const SixTerms& terms) { return terms.sum(); }

// area(S_{2mbar}) * [ ((m-2)/(12 eps) + n/(12 f^2)) S_M
//                   + (m/(12 eps) + (n-2)/(12 f^2)) S_N ]
inline double closed_form_density(double s_m, double s_n, double epsilon, double f_val,
                                  int m, int n) {
  if (m < 1 || n < 1) throw DimensionMismatch("factor dimensions must be positive");
  if ((m + n) % 2 != 0)
    throw OddTotalDimension("total dimension must be even for this residue order");
  if (epsilon == 0.0) throw ConfigError("epsilon must be nonzero");
  if (f_val <= 0.0) throw NonPositiveWarp("warp value must be positive");
  double area = sphere_area(m + n);
  double cm = (m - 2) / (12.0 * epsilon) + n / (12.0 * f_val * f_val);
  double cn = m / (12.0 * epsilon) + (n - 2) / (12.0 * f_val * f_val);
  return area * (cm * s_m + cn * s_n);
}

}  // namespace warpres
