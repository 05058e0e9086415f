#pragma once

// Levi-Civita connection and curvature at a point.
//
// Index convention, used everywhere in this library:
//   Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
//   R^r_smn    = d_m Gamma^r_ns - d_n Gamma^r_ms
//                + Gamma^r_ml Gamma^l_ns - Gamma^r_nl Gamma^l_ms
//   R_rsmn     = g_rt R^t_smn
// Stored in that lowered order. Under this convention the orthonormal
// contraction sum_{g,j} R_{gjgj} equals the scalar curvature, which is
// n(n-1) on the unit round S^n (positive on spheres).

#include <vector>

#include <Eigen/Dense>

#include "warpres/metric.hpp"

namespace warpres {

struct ChristoffelTable {
  int dim = 0;
  std::vector<Eigen::MatrixXd> gamma;  // gamma[k](i,j) = Gamma^k_ij
  Eigen::VectorXd contracted;          // Gamma^t = sum_{j,l} g^{jl} Gamma^t_jl

  double max_abs() const {
    double m = 0;
    for (const auto& gk : gamma) m = std::max(m, gk.cwiseAbs().maxCoeff());
    return m;
  }
};

namespace detail {

inline ChristoffelTable christoffel_from_jets(const MetricJets& mj,
                                              const Eigen::MatrixXd& ginv) {
  int d = mj.dim;
  ChristoffelTable t;
  t.dim = d;
  t.gamma.assign(d, Eigen::MatrixXd::Zero(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double s = 0;
        for (int l = 0; l < d; ++l)
          s += ginv(k, l) * (mj.d1[i](j, l) + mj.d1[j](i, l) - mj.d1[l](i, j));
        t.gamma[k](i, j) = 0.5 * s;
        t.gamma[k](j, i) = t.gamma[k](i, j);
      }
  t.contracted = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < d; ++k) {
    double s = 0;
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) s += ginv(j, l) * t.gamma[k](j, l);
    t.contracted(k) = s;
  }
  return t;
}

// d_mu Gamma^k_ij, needing second metric derivatives.
inline std::vector<ChristoffelTable> christoffel_grad_from_jets(const MetricJets& mj,
                                                                const Eigen::MatrixXd& ginv) {
  int d = mj.dim;
  std::vector<ChristoffelTable> grad(d);
  for (int mu = 0; mu < d; ++mu) {
    Eigen::MatrixXd dginv = -ginv * mj.d1[mu] * ginv;
    grad[mu].dim = d;
    grad[mu].gamma.assign(d, Eigen::MatrixXd::Zero(d, d));
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          double s = 0;
          for (int l = 0; l < d; ++l) {
            s += dginv(k, l) * (mj.d1[i](j, l) + mj.d1[j](i, l) - mj.d1[l](i, j));
            s += ginv(k, l) *
                 (mj.d2[mu][i](j, l) + mj.d2[mu][j](i, l) - mj.d2[mu][l](i, j));
          }
          grad[mu].gamma[k](i, j) = 0.5 * s;
          grad[mu].gamma[k](j, i) = grad[mu].gamma[k](i, j);
        }
  }
  return grad;
}

}  // namespace detail

inline ChristoffelTable christoffel(const MetricField& metric, const Point& x) {
  MetricJets mj = metric.jets(x, 1);
  Eigen::MatrixXd ginv = inverse_metric(mj.value);
  return detail::christoffel_from_jets(mj, ginv);
}

// Riemann tensor in an orthonormal frame, with Ricci and scalar contractions.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int dim)
      : dim_(dim), r_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0),
        ricci_(Eigen::MatrixXd::Zero(dim, dim)) {}

  int dim() const { return dim_; }
  double at(int i, int j, int k, int l) const {
    return r_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double& at(int i, int j, int k, int l) {
    return r_[((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l];
  }
  const Eigen::MatrixXd& ricci() const { return ricci_; }
  double scalar() const { return scalar_; }

  void finalize_contractions() {
    ricci_ = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) {
        double s = 0;
        for (int g = 0; g < dim_; ++g) s += at(g, j, g, l);
        ricci_(j, l) = s;
      }
    scalar_ = ricci_.trace();
  }

  CurvatureTensor scaled(double c) const {
    CurvatureTensor s(*this);
    for (auto& v : s.r_) v *= c;
    s.finalize_contractions();
    return s;
  }

 private:
  int dim_ = 0;
  std::vector<double> r_;
  Eigen::MatrixXd ricci_;
  double scalar_ = 0.0;
};

// Frame matrix E with E^T g E = I; columns are the frame vectors. Cholesky
// keeps block structure for block-diagonal metrics, so factor blocks map to
// factor blocks.
inline Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("metric is not positive definite at this point");
  Eigen::MatrixXd L = llt.matrixL();
  return L.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

inline CurvatureTensor riemann_orthonormal(const MetricField& metric, const Point& x) {
  if (metric.signature() == Signature::Indefinite)
    throw NotPositiveDefinite("curvature requires a Riemannian metric");
  int d = metric.dim();
  MetricJets mj = metric.jets(x, 2);
  Eigen::MatrixXd ginv = inverse_metric(mj.value);
  ChristoffelTable gam = detail::christoffel_from_jets(mj, ginv);
  std::vector<ChristoffelTable> dgam = detail::christoffel_grad_from_jets(mj, ginv);

  // Coordinate components, lowered first index.
  CurvatureTensor coord(d);
  for (int s = 0; s < d; ++s)
    for (int m = 0; m < d; ++m)
      for (int n = m + 1; n < d; ++n)
        for (int rho = 0; rho < d; ++rho) {
          double up = dgam[m].gamma[rho](n, s) - dgam[n].gamma[rho](m, s);
          for (int lam = 0; lam < d; ++lam)
            up += gam.gamma[rho](m, lam) * gam.gamma[lam](n, s) -
                  gam.gamma[rho](n, lam) * gam.gamma[lam](m, s);
          for (int r = 0; r < d; ++r) {
            coord.at(r, s, m, n) += mj.value(r, rho) * up;
            coord.at(r, s, n, m) -= mj.value(r, rho) * up;
          }
        }

  Eigen::MatrixXd E = orthonormal_frame(mj.value);

  // Successive single-slot contractions into the frame.
  auto transform_slot = [d](const CurvatureTensor& in, const Eigen::MatrixXd& E,
                            int slot) {
    CurvatureTensor out(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) {
            double s = 0;
            for (int i = 0; i < d; ++i) {
              switch (slot) {
                case 0: s += in.at(i, b, c, e) * E(i, a); break;
                case 1: s += in.at(a, i, c, e) * E(i, b); break;
                case 2: s += in.at(a, b, i, e) * E(i, c); break;
                default: s += in.at(a, b, c, i) * E(i, e); break;
              }
            }
            out.at(a, b, c, e) = s;
          }
    return out;
  };

  CurvatureTensor frame = coord;
  for (int slot = 0; slot < 4; ++slot) frame = transform_slot(frame, E, slot);
  frame.finalize_contractions();
  return frame;
}

inline double scalar_curvature(const MetricField& metric, const Point& x) {
  return riemann_orthonormal(metric, x).scalar();
}

}  // namespace warpres
