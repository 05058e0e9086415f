#pragma once

// Truncated Taylor coefficients (value, gradient, Hessian) of a scalar
// quantity with respect to the chart coordinates. Arithmetic propagates
// derivatives exactly; `depth` records how many derivative orders are
// trustworthy (0, 1 or 2). Operations return the minimum depth of their
// operands, so a jet can never claim derivatives it does not have.

#include <complex>

#include <Eigen/Dense>

#include "warpres/errors.hpp"

namespace warpres {

template <typename Scalar>
class Jet {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Jet() : dim_(0), depth_(0), val_(Scalar(0)) {}
  Jet(int dim, int depth)
      : dim_(dim), depth_(depth), val_(Scalar(0)), grad_(Vector::Zero(dim)),
        hess_(Matrix::Zero(dim, dim)) {}

  static Jet constant(int dim, Scalar v, int depth = 2) {
    Jet j(dim, depth);
    j.val_ = v;
    return j;
  }

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  Scalar value() const { return val_; }
  Scalar& value() { return val_; }
  const Vector& grad() const { return grad_; }
  Vector& grad() { return grad_; }
  const Matrix& hess() const { return hess_; }
  Matrix& hess() { return hess_; }

  // The jet of the partial derivative along coordinate `lambda`; one depth
  // level is consumed.
  Jet derivative(int lambda) const {
    if (depth_ < 1)
      throw DerivativeUnavailable("jet depth exhausted taking an x-derivative");
    Jet d(dim_, depth_ - 1);
    d.val_ = grad_(lambda);
    if (depth_ >= 2) d.grad_ = hess_.row(lambda).transpose();
    return d;
  }

  Jet operator+(const Jet& o) const {
    Jet r(dim_, std::min(depth_, o.depth_));
    r.val_ = val_ + o.val_;
    if (r.depth_ >= 1) r.grad_ = grad_ + o.grad_;
    if (r.depth_ >= 2) r.hess_ = hess_ + o.hess_;
    return r;
  }

  Jet operator-(const Jet& o) const {
    Jet r(dim_, std::min(depth_, o.depth_));
    r.val_ = val_ - o.val_;
    if (r.depth_ >= 1) r.grad_ = grad_ - o.grad_;
    if (r.depth_ >= 2) r.hess_ = hess_ - o.hess_;
    return r;
  }

  Jet operator*(const Jet& o) const {
    Jet r(dim_, std::min(depth_, o.depth_));
    r.val_ = val_ * o.val_;
    if (r.depth_ >= 1) r.grad_ = grad_ * o.val_ + o.grad_ * val_;
    if (r.depth_ >= 2)
      r.hess_ = hess_ * o.val_ + o.hess_ * val_ + grad_ * o.grad_.transpose() +
                o.grad_ * grad_.transpose();
    return r;
  }

  Jet operator*(Scalar s) const {
    Jet r = *this;
    r.val_ *= s;
    r.grad_ *= s;
    r.hess_ *= s;
    return r;
  }

  Jet operator-() const { return *this * Scalar(-1); }

  // 1/this (value must be nonzero).
  Jet inverse() const {
    Jet r(dim_, depth_);
    Scalar iv = Scalar(1) / val_;
    r.val_ = iv;
    if (depth_ >= 1) r.grad_ = -grad_ * (iv * iv);
    if (depth_ >= 2)
      r.hess_ = -hess_ * (iv * iv) +
                Scalar(2) * (grad_ * grad_.transpose()) * (iv * iv * iv);
    return r;
  }

  template <typename T>
  Jet<T> cast() const {
    Jet<T> r(dim_, depth_);
    r.value() = T(val_);
    r.grad() = grad_.template cast<T>();
    r.hess() = hess_.template cast<T>();
    return r;
  }

 private:
  int dim_;
  int depth_;
  Scalar val_;
  Vector grad_;
  Matrix hess_;
};

template <typename Scalar>
Jet<Scalar> operator*(Scalar s, const Jet<Scalar>& j) {
  return j * s;
}

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

}  // namespace warpres
