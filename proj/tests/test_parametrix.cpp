#include <gtest/gtest.h>

#include <random>

#include "warpres/normal_jet.hpp"
#include "warpres/parametrix.hpp"
#include "test_helpers.hpp"

using namespace warpres;
using wrtest::pt;

namespace {

// Independent closed-form oracle for q_{-3}:
//   -i |xi|^{-4} Gamma^k xi_k - 2 i |xi|^{-6} xi^j xi_a xi_b d_j g^{ab}
// built from the metric's own derivative evaluators, not the term algebra.
Complex q3_oracle(const MetricField& g, const Point& x, const Eigen::VectorXd& xi) {
  int d = g.dim();
  Eigen::MatrixXd gval = g.eval(x);
  Eigen::MatrixXd ginv = gval.inverse();
  ChristoffelTable gam = christoffel(g, x);
  double n2 = xi.dot(ginv * xi);

  Complex first = 0.0;
  for (int k = 0; k < d; ++k) first += gam.contracted(k) * xi(k);
  first *= -kImag * std::pow(n2, -2);

  Complex second = 0.0;
  Eigen::VectorXd xi_up = ginv * xi;
  for (int j = 0; j < d; ++j) {
    Eigen::MatrixXd dginv = -ginv * g.first_deriv(x, j) * ginv;
    second += xi_up(j) * xi.dot(dginv * xi);
  }
  second *= -2.0 * kImag * std::pow(n2, -3);
  return first + second;
}

FullSymbol from_jet_map(const JetTermMap& m, int dim) {
  FullSymbol out(dim, -100);
  for (const auto& [k, c] : m) out.add_term({c.value(), k.mono, k.norm_power});
  return out;
}

}  // namespace

TEST(Parametrix, FlatIsExactInverse) {
  MetricField flat = charts::torus(2);
  FullSymbol q = parametrix(flat, pt({0.3, 0.7}), 4);
  auto q2 = q.component(-2);
  ASSERT_EQ(q2.size(), 1u);
  EXPECT_EQ(q2[0].norm_power, -1);
  EXPECT_EQ(q2[0].mono.degree(), 0);
  EXPECT_NEAR(std::abs(q2[0].coeff - Complex(1.0)), 0.0, 1e-15);
  EXPECT_TRUE(q.component(-3).empty());
  EXPECT_TRUE(q.component(-4).empty());
}

TEST(Parametrix, QMinus3MatchesClosedForm) {
  std::mt19937 rng(101);
  MetricField metrics[] = {charts::sphere(2, 1.0), charts::sphere(3, 1.0),
                           wrtest::random_expression_metric(2, 42)};
  for (const MetricField& g : metrics) {
    for (int trial = 0; trial < 8; ++trial) {
      Point x = wrtest::random_point(g, rng);
      FullSymbol q = parametrix(g, x, 3);
      Eigen::MatrixXd ginv = inverse_metric(g.eval(x));
      Eigen::VectorXd xi = wrtest::random_xi(g.dim(), rng);
      Complex engine = q.eval_component(-3, xi, ginv);
      Complex oracle = q3_oracle(g, x, xi);
      EXPECT_NEAR(std::abs(engine - oracle), 0.0, 1e-6 * std::max(1.0, std::abs(oracle)))
          << g.name();
    }
  }
}

TEST(Parametrix, QMinus4AtNormalCenter) {
  // at the center of normal coordinates: q_{-4} = (2/3)|xi|^{-6} Ric_jl xi_j xi_l
  Eigen::Matrix3d B;
  B << 0.9, 0.25, -0.15, 0.25, 1.1, 0.05, -0.15, 0.05, 0.6;
  CurvatureTensor curv = wrtest::make_pair_tensor3(B);
  MetricField g = wrtest::normal_form_metric(curv);
  Point x0 = pt({0.0, 0.0, 0.0});
  FullSymbol q = parametrix(g, x0, 4);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    Eigen::VectorXd xi = wrtest::random_xi(3, rng);
    double n2 = xi.squaredNorm();
    double expect = (2.0 / 3.0) * xi.dot(curv.ricci() * xi) * std::pow(n2, -3);
    Complex engine = q.eval_component(-4, xi, id);
    EXPECT_NEAR(std::abs(engine - Complex(expect)), 0.0,
                1e-12 * std::max(1.0, std::abs(expect)));
  }
  // q_{-3} vanishes at the center (Christoffels and d(g^{-1}) are zero there)
  EXPECT_LE(q.max_abs_coeff(-3), 1e-13);
}

TEST(Parametrix, ChristoffelGradientFactAtNormalCenter) {
  // d_k Gamma^mu (0) = (2/3) Ric_{k mu} for the normal-form metric
  Eigen::Matrix3d B;
  B << 1.2, -0.2, 0.1, -0.2, 0.8, 0.3, 0.1, 0.3, 1.0;
  CurvatureTensor curv = wrtest::make_pair_tensor3(B);
  MetricField g = wrtest::normal_form_metric(curv);
  MetricJets mj = g.jets(pt({0.0, 0.0, 0.0}), 2);
  NormContext ctx = NormContext::from_jets(mj);
  auto gamma = detail::contracted_christoffel_jets(mj, ctx);
  for (int mu = 0; mu < 3; ++mu) {
    EXPECT_NEAR(std::abs(gamma[mu].value()), 0.0, 1e-14);
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(gamma[mu].grad()(k).real(), (2.0 / 3.0) * curv.ricci()(k, mu), 1e-12)
          << "mu=" << mu << " k=" << k;
  }
}

TEST(Parametrix, CurvatureRecoveredFromNormalForm) {
  // riemann_orthonormal at the center must return exactly the tensor the
  // metric was built from; this pins the sign conventions end to end.
  Eigen::Matrix3d B;
  B << 0.7, 0.1, 0.2, 0.1, 1.4, -0.3, 0.2, -0.3, 0.9;
  CurvatureTensor curv = wrtest::make_pair_tensor3(B);
  MetricField g = wrtest::normal_form_metric(curv);
  CurvatureTensor computed = riemann_orthonormal(g, pt({0.0, 0.0, 0.0}));
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          worst = std::max(worst,
                           std::abs(computed.at(i, j, k, l) - curv.at(i, j, k, l)));
  EXPECT_LE(worst, 1e-12);
}

TEST(Parametrix, NormalJetConsistencyAtDepthOne) {
  // For mbar = 1 (a 2-dimensional product) the jet entries coincide with
  // x-derivatives of the parametrix term maps at the center of normal
  // coordinates, computed here by the generic machinery.
  CurvatureTensor curv(2);
  const double c = 0.85;
  curv.at(0, 1, 0, 1) = c;
  curv.at(1, 0, 1, 0) = c;
  curv.at(0, 1, 1, 0) = -c;
  curv.at(1, 0, 0, 1) = -c;
  curv.finalize_contractions();
  MetricField g = wrtest::normal_form_metric(curv);
  Point x0 = pt({0.0, 0.0});
  NormalJet jet = normal_jet(curv, 1);

  NormContext ctx = NormContext::from_jets(g.jets(x0, 2));
  JetSymbol par = ParametrixField(g, 4).jet_at(x0);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  std::mt19937 rng(23);

  // d_s1[l] == d_{x_l} q_{-3} at the center
  JetTermMap q3 = par.component(-3);
  for (int l = 0; l < 2; ++l) {
    FullSymbol engine = from_jet_map(jx_deriv(q3, l, ctx), 2);
    FullSymbol stated(2, -100);
    for (const auto& t : jet.d_s1[l]) stated.add_term(t);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::VectorXd xi = wrtest::random_xi(2, rng);
      EXPECT_NEAR(std::abs(engine.eval(xi, id) - stated.eval(xi, id)), 0.0, 1e-11)
          << "l=" << l;
    }
  }

  // dd_s0[l][v] == d_{x_l} d_{x_v} q_{-2} at the center
  JetTermMap q2 = par.component(-2);
  for (int l = 0; l < 2; ++l)
    for (int v = 0; v < 2; ++v) {
      FullSymbol engine = from_jet_map(jx_deriv(jx_deriv(q2, v, ctx), l, ctx), 2);
      FullSymbol stated(2, -100);
      for (const auto& t : jet.dd_s0[l][v]) stated.add_term(t);
      for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd xi = wrtest::random_xi(2, rng);
        EXPECT_NEAR(std::abs(engine.eval(xi, id) - stated.eval(xi, id)), 0.0, 1e-11)
            << "l=" << l << " v=" << v;
      }
    }

  // s2 == q_{-4} at the center
  FullSymbol q4 = from_jet_map(par.component(-4), 2);
  FullSymbol s2(2, -100);
  for (const auto& t : jet.s2) s2.add_term(t);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::VectorXd xi = wrtest::random_xi(2, rng);
    EXPECT_NEAR(std::abs(q4.eval(xi, id) - s2.eval(xi, id)), 0.0, 1e-11);
  }
}

TEST(Compose, IdentityThroughDegreeMinus2) {
  std::mt19937 rng(301);
  MetricField metrics[] = {charts::sphere(2, 1.0),
                           wrtest::random_expression_metric(2, 77),
                           wrtest::random_expression_metric(3, 78)};
  for (const MetricField& g : metrics) {
    LaplaceSymbolField lap(g);
    ParametrixField par(g, 4);
    for (int trial = 0; trial < 20; ++trial) {
      Point x = wrtest::random_point(g, rng);
      FullSymbol c = compose(lap, par, x, -2);
      auto deg0 = c.component(0);
      ASSERT_EQ(deg0.size(), 1u) << g.name();
      EXPECT_EQ(deg0[0].mono.degree(), 0);
      EXPECT_EQ(deg0[0].norm_power, 0);
      EXPECT_NEAR(std::abs(deg0[0].coeff - Complex(1.0)), 0.0, 1e-6) << g.name();
      EXPECT_LE(c.max_abs_coeff(-1), 1e-6) << g.name();
      EXPECT_LE(c.max_abs_coeff(-2), 1e-6) << g.name();
    }
  }
}

TEST(Compose, IdentityFiniteDifferenceMode) {
  MetricField g = wrtest::random_expression_metric(2, 79, DerivMode::FiniteDifference);
  LaplaceSymbolField lap(g);
  ParametrixField par(g, 4);
  std::mt19937 rng(303);
  for (int trial = 0; trial < 5; ++trial) {
    Point x = wrtest::random_point(g, rng);
    FullSymbol c = compose(lap, par, x, -2);
    auto deg0 = c.component(0);
    ASSERT_EQ(deg0.size(), 1u);
    EXPECT_NEAR(std::abs(deg0[0].coeff - Complex(1.0)), 0.0, 1e-3);
    EXPECT_LE(c.max_abs_coeff(-1), 1e-3);
    EXPECT_LE(c.max_abs_coeff(-2), 1e-3);
  }
}

TEST(Parametrix, LorentzRejected) {
  MetricField s1 = charts::circle(1.0);
  MetricField s3 = charts::sphere(3, 1.0);
  MetricField lorentz =
      build_warped_product(s1, s3, WarpedConfig::make(-1.0, "1", 1, 3));
  EXPECT_THROW(ParametrixField(lorentz, 4).jet_at(pt({1.0, 1.0, 1.0, 1.0})), NotElliptic);
  EXPECT_THROW(parametrix(lorentz, pt({1.0, 1.0, 1.0, 1.0}), 2), NotElliptic);
}
