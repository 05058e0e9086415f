#pragma once

// Exact monomial integrals over the unit sphere S^{n-1} in R^n. The pairing
// recursion reduces a degree-d moment to a degree-(d-2) one:
//   I(alpha) = (alpha_i - 1) * I(alpha - 2 e_i) / (n + d - 2),
// any variable i with alpha_i > 0; odd exponents integrate to zero. Results
// are exact rationals, understood as multiples of area(S_n).

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "warpres/multiindex.hpp"
#include "warpres/rational.hpp"

namespace warpres {

// area(S_n) = 2 pi^{n/2} / Gamma(n/2), the total measure of S^{n-1} in R^n.
inline double sphere_area(int n) {
  if (n < 1) throw DimensionMismatch("sphere_area requires n >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

class MomentTable {
 public:
  explicit MomentTable(int n) : n_(n) {
    if (n < 1) throw DimensionMismatch("moment table requires ambient dimension >= 1");
  }

  int ambient_dim() const { return n_; }

  // Exact coefficient of area(S_n) in the integral of xi^alpha over |xi| = 1.
  Rational moment(const MultiIndex& alpha) {
    if (alpha.size() != n_)
      throw DimensionMismatch("multi-index length does not match ambient dimension");
    if (alpha.any_odd()) return Rational(0);
    std::lock_guard<std::mutex> lock(mu_);
    return moment_rec(alpha);
  }

  // Same value computed by reducing the chosen variable first; exposed so the
  // order-independence of the recursion is testable.
  Rational moment_reducing(const MultiIndex& alpha, int var) {
    if (alpha.any_odd()) return Rational(0);
    if (alpha.degree() == 0) return Rational(1);
    if (alpha[var] < 2) throw DomainError("chosen variable has exponent < 2");
    std::lock_guard<std::mutex> lock(mu_);
    Rational reduced = moment_rec(alpha.plus(var, -2));
    return Rational(alpha[var] - 1, n_ + alpha.degree() - 2) * reduced;
  }

  double moment_value(const MultiIndex& alpha) {
    return moment(alpha).to_double() * sphere_area(n_);
  }

 private:
  Rational moment_rec(const MultiIndex& alpha) {
    int d = alpha.degree();
    if (d == 0) return Rational(1);
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    int i = 0;
    while (alpha[i] == 0) ++i;
    Rational r = Rational(alpha[i] - 1, n_ + d - 2) * moment_rec(alpha.plus(i, -2));
    cache_.emplace(alpha, r);
    return r;
  }

  int n_;
  std::mutex mu_;
  std::map<MultiIndex, Rational> cache_;
};

// A finite xi-polynomial: list of (coefficient, monomial) pairs.
struct XiMonomial {
  std::complex<double> coeff;
  MultiIndex mono;
};
using XiPolynomial = std::vector<XiMonomial>;

inline std::complex<double> integrate_polynomial_over_sphere(const XiPolynomial& p, int n,
                                                             MomentTable& table) {
  if (table.ambient_dim() != n)
    throw DimensionMismatch("moment table dimension does not match polynomial");
  std::complex<double> total = 0.0;
  double area = sphere_area(n);
  for (const auto& t : p) {
    if (t.mono.size() != n)
      throw DimensionMismatch("polynomial term over wrong number of variables");
    if (t.mono.any_odd()) continue;
    total += t.coeff * (table.moment(t.mono).to_double() * area);
  }
  return total;
}

}  // namespace warpres
