#include <gtest/gtest.h>

#include <random>

#include "warpres/wres.hpp"
#include "test_helpers.hpp"

using namespace warpres;
using wrtest::pt;

namespace {

struct DensityResult {
  SixTerms terms;
  double value;
};

DensityResult density_from(const CurvatureTensor& curv, double eps, double f,
                           const Eigen::VectorXd& grad_frame, int m, int n) {
  MomentTable table(m + n);
  NormalJet jet = normal_jet(curv, (m + n) / 2);
  FullSymbol warped = warped_symbol_normal_frame(eps, f, grad_frame, m, n);
  SixTerms terms = density_terms(curv, warped, jet, m, n, table);
  return {terms, assembled_density(terms)};
}

// Closed displays of the three nonvanishing fiber integrals for product
// metrics (mixed curvature blocks vanish, so the base/fiber partial traces
// are the factor scalars):
//   t3 = area [ (m/(12 eps) + n/(12 f^2)) (S_M + S_N)
//               + S_M/(6 eps) + S_N/(6 f^2) ]
//   t4 = -area [ 2 S_M/(3 eps) + 2 S_N/(3 f^2) ]
//   t6 =  area [ S_M/(3 eps) + S_N/(3 f^2) ]
struct TermOracles {
  double t3, t4, t6;
};

TermOracles term_oracles(double s_m, double s_n, double eps, double f, int m, int n) {
  double area = sphere_area(m + n);
  double s = s_m + s_n;
  TermOracles o;
  o.t3 = area * ((m / (12 * eps) + n / (12 * f * f)) * s + s_m / (6 * eps) +
                 s_n / (6 * f * f));
  o.t4 = -area * (2 * s_m / (3 * eps) + 2 * s_n / (3 * f * f));
  o.t6 = area * (s_m / (3 * eps) + s_n / (3 * f * f));
  return o;
}

}  // namespace

TEST(NormalJet, FlatIsPureLeadingTerm) {
  CurvatureTensor flat(4);
  flat.finalize_contractions();
  NormalJet jet = normal_jet(flat, 2);
  ASSERT_EQ(jet.s0.size(), 1u);
  EXPECT_EQ(jet.s0[0].norm_power, -2);
  EXPECT_TRUE(jet.s1.empty());
  EXPECT_TRUE(jet.s2.empty());
  for (int l = 0; l < 4; ++l) {
    EXPECT_TRUE(jet.d_s0[l].empty());
    EXPECT_TRUE(jet.d_s1[l].empty());
    for (int v = 0; v < 4; ++v) EXPECT_TRUE(jet.dd_s0[l][v].empty());
  }
}

TEST(Density, FlatProductAllTermsVanish) {
  MetricField t1 = charts::torus(1);
  MetricField t3 = charts::torus(3);
  MetricField g = build_warped_product(t1, t3, WarpedConfig::make(1.0, "1", 1, 3));
  CurvatureTensor curv = riemann_orthonormal(g, pt({0.4, 1.0, 2.0, 3.0}));
  DensityResult r = density_from(curv, 1.0, 1.0, Eigen::VectorXd::Zero(1), 1, 3);
  EXPECT_EQ(r.terms.t1, 0.0);
  EXPECT_EQ(r.terms.t2, 0.0);
  EXPECT_LE(std::abs(r.terms.t3), 1e-12);
  EXPECT_LE(std::abs(r.terms.t4), 1e-12);
  EXPECT_EQ(r.terms.t5, 0.0);
  EXPECT_LE(std::abs(r.terms.t6), 1e-12);
  EXPECT_LE(std::abs(r.value), 1e-12);
  EXPECT_EQ(closed_form_density(0.0, 0.0, 1.0, 1.0, 1, 3), 0.0);
}

TEST(Density, SixTermsOnUnitS1xS3) {
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField g = build_warped_product(s1, s3, WarpedConfig::make(1.0, "1", 1, 3));
  std::mt19937 rng(41);
  const double cases[][2] = {{1.0, 1.0}, {2.0, 3.0}, {-1.0, 2.0}};
  for (const auto& c : cases) {
    double eps = c[0], f = c[1];
    for (int trial = 0; trial < 6; ++trial) {
      Point x = wrtest::random_point(g, rng);
      CurvatureTensor curv = riemann_orthonormal(g, x);
      DensityResult r = density_from(curv, eps, f, Eigen::VectorXd::Zero(1), 1, 3);

      EXPECT_LE(std::abs(r.terms.t1), 1e-10);
      EXPECT_LE(std::abs(r.terms.t2), 1e-10);
      EXPECT_LE(std::abs(r.terms.t5), 1e-10);

      double s_m = scalar_curvature(s1, x.head(1));
      double s_n = scalar_curvature(s3, x.tail(3));
      TermOracles oracle = term_oracles(s_m, s_n, eps, f, 1, 3);
      EXPECT_NEAR(r.terms.t3, oracle.t3, 1e-6 * std::abs(oracle.t3));
      EXPECT_NEAR(r.terms.t4, oracle.t4, 1e-6 * std::abs(oracle.t4));
      EXPECT_NEAR(r.terms.t6, oracle.t6, 1e-6 * std::abs(oracle.t6));

      double closed = closed_form_density(s_m, s_n, eps, f, 1, 3);
      EXPECT_NEAR(r.value, closed, 1e-6 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST(Density, SpecValuesOnUnitS1xS3) {
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField g = build_warped_product(s1, s3, WarpedConfig::make(1.0, "1", 1, 3));
  Point x = pt({1.0, 1.2, 0.9, 2.2});
  CurvatureTensor curv = riemann_orthonormal(g, x);
  DensityResult r = density_from(curv, 1.0, 1.0, Eigen::VectorXd::Zero(1), 1, 3);
  double pi2 = M_PI * M_PI;
  EXPECT_NEAR(r.terms.t6, 4 * pi2, 1e-6 * 4 * pi2);
  EXPECT_NEAR(r.terms.t4, -8 * pi2, 1e-6 * 8 * pi2);
  EXPECT_NEAR(r.value, 2 * pi2, 1e-6 * 2 * pi2);
  EXPECT_NEAR(closed_form_density(0.0, 6.0, 1.0, 1.0, 1, 3), 2 * pi2, 1e-12);

  // general (eps, f): density = 12 pi^2 (1/(12 eps) + 1/(12 f^2))
  for (double eps : {1.0, 2.0, -1.0}) {
    for (double f : {1.0, 2.0, 3.0}) {
      double expect = 12 * pi2 * (1 / (12 * eps) + 1 / (12 * f * f));
      DensityResult rr = density_from(curv, eps, f, Eigen::VectorXd::Zero(1), 1, 3);
      EXPECT_NEAR(rr.value, expect, 1e-6 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(Density, SixTermsOnT2xS2) {
  MetricField t2 = charts::torus(2);
  MetricField s2 = charts::sphere(2, 1.0);
  MetricField g = build_warped_product(t2, s2, WarpedConfig::make(1.0, "1", 2, 2));
  std::mt19937 rng(43);
  const double cases[][2] = {{1.0, 1.0}, {2.0, 3.0}, {-1.0, 2.0}};
  for (const auto& c : cases) {
    double eps = c[0], f = c[1];
    for (int trial = 0; trial < 6; ++trial) {
      Point x = wrtest::random_point(g, rng);
      CurvatureTensor curv = riemann_orthonormal(g, x);
      DensityResult r = density_from(curv, eps, f, Eigen::VectorXd::Zero(2), 2, 2);
      double s_m = 0.0, s_n = scalar_curvature(s2, x.tail(2));
      TermOracles oracle = term_oracles(s_m, s_n, eps, f, 2, 2);
      EXPECT_NEAR(r.terms.t3, oracle.t3, 1e-6 * std::abs(oracle.t3));
      EXPECT_NEAR(r.terms.t4, oracle.t4, 1e-6 * std::abs(oracle.t4));
      EXPECT_NEAR(r.terms.t6, oracle.t6, 1e-6 * std::abs(oracle.t6));
      double closed = closed_form_density(s_m, s_n, eps, f, 2, 2);
      EXPECT_NEAR(r.value, closed, 1e-6 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST(Density, CurvatureLinearity) {
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField g = build_warped_product(s1, s3, WarpedConfig::make(1.0, "1", 1, 3));
  CurvatureTensor curv = riemann_orthonormal(g, pt({0.7, 1.1, 1.3, 2.0}));
  for (double eps : {1.0, -1.0}) {
    DensityResult base = density_from(curv, eps, 2.0, Eigen::VectorXd::Zero(1), 1, 3);
    DensityResult twice =
        density_from(curv.scaled(2.0), eps, 2.0, Eigen::VectorXd::Zero(1), 1, 3);
    EXPECT_NEAR(twice.value, 2.0 * base.value, 1e-9 * std::max(1.0, std::abs(base.value)));
  }
}

TEST(Density, EpsilonScalingStructure) {
  // density(eps) = A/eps + B with A, B read off the closed form; checked
  // against the assembled route at several eps.
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField g = build_warped_product(s1, s3, WarpedConfig::make(1.0, "1", 1, 3));
  Point x = pt({0.5, 1.0, 1.5, 2.5});
  CurvatureTensor curv = riemann_orthonormal(g, x);
  double s_m = scalar_curvature(s1, x.head(1));
  double s_n = scalar_curvature(s3, x.tail(3));
  double f = 2.0, area = sphere_area(4);
  double a_coeff = area * ((1 - 2) * s_m + 1 * s_n) / 12.0;
  double b_coeff = area * (3 * s_m + (3 - 2) * s_n) / (12.0 * f * f);
  for (double eps : {1.0, 2.0, 10.0, -1.0, -3.0}) {
    DensityResult r = density_from(curv, eps, f, Eigen::VectorXd::Zero(1), 1, 3);
    EXPECT_NEAR(r.value, a_coeff / eps + b_coeff, 1e-9 * std::max(1.0, std::abs(r.value)))
        << eps;
  }
}

TEST(Density, WarpGradientTermsVanishInDensity) {
  // grad f only enters sigma_1, whose summands integrate to zero; the
  // assembled density must not depend on it.
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField g = build_warped_product(s1, s3, WarpedConfig::make(1.0, "1", 1, 3));
  CurvatureTensor curv = riemann_orthonormal(g, pt({0.7, 1.1, 1.3, 2.0}));
  Eigen::VectorXd no_grad = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd grad(1);
  grad << 0.37;
  DensityResult without = density_from(curv, 1.5, 2.0, no_grad, 1, 3);
  DensityResult with = density_from(curv, 1.5, 2.0, grad, 1, 3);
  EXPECT_EQ(without.terms.t2, with.terms.t2);
  EXPECT_EQ(without.terms.t5, with.terms.t5);
  EXPECT_NEAR(with.value, without.value, 1e-12);
}

TEST(Density, ImaginaryResidueGuard) {
  CurvatureTensor curv(2);
  curv.at(0, 1, 0, 1) = 1.0;
  curv.at(1, 0, 1, 0) = 1.0;
  curv.at(0, 1, 1, 0) = -1.0;
  curv.at(1, 0, 0, 1) = -1.0;
  curv.finalize_contractions();
  NormalJet jet = normal_jet(curv, 1);
  MomentTable table(2);
  // a symbol with an imaginary quadratic part makes term 3 imaginary
  FullSymbol bad(2, -100);
  bad.add_term({kImag, MultiIndex{2, 0}, 0});
  bad.add_term({Complex(1.0), MultiIndex{0, 2}, 0});
  EXPECT_THROW(density_terms(curv, bad, jet, 1, 1, table), ImaginaryResidue);
}

TEST(Density, DimensionGuards) {
  CurvatureTensor curv(4);
  curv.finalize_contractions();
  NormalJet jet = normal_jet(curv, 2);
  MomentTable table(4);
  FullSymbol sym = warped_symbol_normal_frame(1.0, 1.0, Eigen::VectorXd::Zero(1), 1, 3);
  EXPECT_THROW(density_terms(curv, sym, jet, 1, 1, table), FrameMismatch);
  EXPECT_THROW(warped_symbol_normal_frame(0.0, 1.0, Eigen::VectorXd::Zero(1), 1, 3),
               ConfigError);
  EXPECT_THROW(warped_symbol_normal_frame(1.0, -1.0, Eigen::VectorXd::Zero(1), 1, 3),
               NonPositiveWarp);
  EXPECT_THROW(warped_symbol_normal_frame(1.0, 1.0, Eigen::VectorXd::Zero(2), 1, 3),
               FrameMismatch);
  EXPECT_THROW(closed_form_density(0.0, 2.0, 1.0, 1.0, 1, 2), OddTotalDimension);
  EXPECT_THROW(normal_jet(curv, 1), FrameMismatch);
}

TEST(Density, ClosedFormReduction) {
  // eps = 1, f = 1: density reduces to area(S_{2mbar}) ((m+n-2)/12)(S_M + S_N)
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> sdist(-4.0, 8.0);
  const int dims[][2] = {{1, 3}, {2, 2}, {3, 1}, {2, 4}, {4, 4}};
  for (const auto& d : dims) {
    int m = d[0], n = d[1];
    for (int trial = 0; trial < 10; ++trial) {
      double s_m = sdist(rng), s_n = sdist(rng);
      double expect = sphere_area(m + n) * ((m + n - 2) / 12.0) * (s_m + s_n);
      EXPECT_NEAR(closed_form_density(s_m, s_n, 1.0, 1.0, m, n), expect,
                  1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}
