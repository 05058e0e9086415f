#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "warpres/errors.hpp"

namespace warpres {

// Exponent vector of a monomial xi_1^{a_1} ... xi_n^{a_n}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : exp_(n, 0) {}
  MultiIndex(std::initializer_list<int> e) : exp_(e) {}

  static MultiIndex unit(int n, int k) {
    MultiIndex m(n);
    m.exp_[k] = 1;
    return m;
  }

  int size() const { return static_cast<int>(exp_.size()); }
  int degree() const { return std::accumulate(exp_.begin(), exp_.end(), 0); }
  int operator[](int i) const { return exp_[i]; }
  int& operator[](int i) { return exp_[i]; }

  MultiIndex plus(int k, int delta = 1) const {
    MultiIndex m = *this;
    m.exp_[k] += delta;
    if (m.exp_[k] < 0) throw DomainError("negative exponent in multi-index");
    return m;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    if (size() != o.size()) throw DimensionMismatch("multi-index size mismatch");
    MultiIndex m = *this;
    for (int i = 0; i < size(); ++i) m.exp_[i] += o.exp_[i];
    return m;
  }

  bool any_odd() const {
    for (int e : exp_)
      if (e % 2 != 0) return true;
    return false;
  }

  bool operator==(const MultiIndex& o) const { return exp_ == o.exp_; }
  bool operator<(const MultiIndex& o) const { return exp_ < o.exp_; }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < size(); ++i) s += (i ? "," : "") + std::to_string(exp_[i]);
    return s + ")";
  }

 private:
  std::vector<int> exp_;
};

}  // namespace warpres
