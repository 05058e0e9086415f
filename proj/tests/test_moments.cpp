#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "warpres/moments.hpp"

using namespace warpres;

TEST(Moments, SphereAreas) {
  EXPECT_NEAR(sphere_area(2), 2 * M_PI, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * M_PI, 1e-13);
  EXPECT_NEAR(sphere_area(4), 2 * M_PI * M_PI, 1e-13);
}

TEST(Moments, QuadraticAndQuarticValues) {
  MomentTable t(4);
  EXPECT_EQ(t.moment({2, 0, 0, 0}), Rational(1, 4));
  EXPECT_EQ(t.moment({2, 2, 0, 0}), Rational(1, 24));
  EXPECT_EQ(t.moment({4, 0, 0, 0}), Rational(1, 8));
  EXPECT_EQ(t.moment({1, 1, 0, 0}), Rational(0));
  EXPECT_EQ(t.moment({1, 2, 1, 0}), Rational(0));
  EXPECT_EQ(t.moment({3, 1, 0, 0}), Rational(0));
}

TEST(Moments, QuarticPairingFormula) {
  // I^{abcd} = area/(n(n+2)) [d_ab d_cd + d_ac d_bd + d_ad d_bc]
  for (int n = 2; n <= 6; ++n) {
    MomentTable t(n);
    MultiIndex four(n), twotwo(n);
    four[0] = 4;
    twotwo[0] = 2;
    if (n > 1) twotwo[1] = 2;
    EXPECT_EQ(t.moment(four), Rational(3, n * (n + 2))) << n;
    if (n > 1) EXPECT_EQ(t.moment(twotwo), Rational(1, n * (n + 2))) << n;
  }
}

// (sum_i xi_i^2)^k integrates to exactly area(S_n) for k <= 4: the multinomial
// expansion summed against the table must give the rational 1.
TEST(Moments, NormPowersIntegrateToArea) {
  for (int n = 2; n <= 6; ++n) {
    MomentTable t(n);
    for (int k = 0; k <= 4; ++k) {
      Rational total(0);
      // enumerate beta with |beta| = k; coefficient k!/(prod beta_i!)
      std::vector<int> beta(n, 0);
      std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
          beta[pos] = left;
          std::int64_t coeff = 1, acc = 0;
          // multinomial k! / prod(beta!)
          std::int64_t fact = 1;
          for (int i = 2; i <= k; ++i) fact *= i;
          std::int64_t denom = 1;
          for (int b : beta)
            for (int i = 2; i <= b; ++i) denom *= i;
          coeff = fact / denom;
          (void)acc;
          MultiIndex alpha(n);
          for (int i = 0; i < n; ++i) alpha[i] = 2 * beta[i];
          total += Rational(coeff) * t.moment(alpha);
          return;
        }
        for (int b = 0; b <= left; ++b) {
          beta[pos] = b;
          rec(pos + 1, left - b);
        }
      };
      rec(0, k);
      EXPECT_EQ(total, Rational(1)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Moments, RecursionOrderIndependent) {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    MultiIndex alpha(n);
    int degree_half = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < degree_half; ++j) alpha[rng() % n] += 2;
    MomentTable t(n);
    Rational base = t.moment(alpha);
    for (int v = 0; v < n; ++v) {
      if (alpha[v] < 2) continue;
      EXPECT_EQ(t.moment_reducing(alpha, v), base)
          << "n=" << n << " alpha=" << alpha.str() << " v=" << v;
    }
  }
}

TEST(Moments, IntegratePolynomial) {
  MomentTable t(4);
  XiPolynomial sum_sq;
  for (int i = 0; i < 4; ++i) {
    MultiIndex m(4);
    m[i] = 2;
    sum_sq.push_back({1.0, m});
  }
  EXPECT_NEAR(integrate_polynomial_over_sphere(sum_sq, 4, t).real(), 2 * M_PI * M_PI,
              1e-12);

  XiPolynomial odd{{1.0, MultiIndex{1, 1, 0, 0}}};
  EXPECT_EQ(integrate_polynomial_over_sphere(odd, 4, t), std::complex<double>(0.0));

  XiPolynomial quart{{1.0, MultiIndex{2, 2, 0, 0}}};
  EXPECT_NEAR(integrate_polynomial_over_sphere(quart, 4, t).real(), M_PI * M_PI / 12.0,
              1e-13);
}

TEST(Moments, DimensionMismatch) {
  MomentTable t(4);
  XiPolynomial p{{1.0, MultiIndex{2, 0}}};
  EXPECT_THROW(integrate_polynomial_over_sphere(p, 4, t), DimensionMismatch);
  EXPECT_THROW(integrate_polynomial_over_sphere(p, 2, t), DimensionMismatch);
  EXPECT_THROW(t.moment(MultiIndex{2, 0}), DimensionMismatch);
}

TEST(Moments, HighDegreeHeadroom) {
  MomentTable t(4);
  // degree 8: I(8,0,0,0) = 7!!/(4*6*8*10) = 105/1920 = 7/128
  MultiIndex eight(4);
  eight[0] = 8;
  EXPECT_EQ(t.moment(eight), Rational(7, 128));
}
