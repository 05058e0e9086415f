#pragma once

// Normal-coordinate jets of sigma((Delta_g)^{-mbar}) at the center point,
// populated from curvature contractions. At the center of normal coordinates
// of the product metric the coordinate frame is orthonormal, first metric
// derivatives and contracted Christoffels vanish, and second derivatives are
// curvature, which forces:
//   sigma_{-2mbar}                 = |xi|^{-2mbar}
//   sigma_{-2mbar-1}               = 0
//   sigma_{-2mbar-2}               = (mbar(mbar+1)/3) |xi|^{-2mbar-4}
//                                      sum_{j,l} Ric_{jl} xi_j xi_l
//   d_x sigma_{-2mbar}             = 0
//   d_{x_l} sigma_{-2mbar-1}       = -(2 mbar i/3) |xi|^{-2mbar-2}
//                                      sum_t Ric_{lt} xi_t
//   d_{x_l} d_{x_v} sigma_{-2mbar} = -(mbar/3) |xi|^{-2mbar-2}
//                                      sum_{a,b} (R_{albv} + R_{avbl}) xi_a xi_b
// where Ric_{lt} = sum_a R_{alat} in the orthonormal frame.

#include <vector>

#include "warpres/curvature.hpp"
#include "warpres/symbol.hpp"

namespace warpres {

struct NormalJet {
  int mbar = 0;
  int dim = 0;  // 2*mbar

  std::vector<SymbolTerm> s0;                            // sigma_{-2mbar}
  std::vector<SymbolTerm> s1;                            // sigma_{-2mbar-1}, empty
  std::vector<SymbolTerm> s2;                            // sigma_{-2mbar-2}
  std::vector<std::vector<SymbolTerm>> d_s0;             // [l], empty
  std::vector<std::vector<SymbolTerm>> d_s1;             // [l]
  std::vector<std::vector<std::vector<SymbolTerm>>> dd_s0;  // [l][v]
};

inline NormalJet normal_jet(const CurvatureTensor& curv, int mbar) {
  if (mbar < 1) throw DimensionMismatch("normal_jet requires mbar >= 1");
  const int d = curv.dim();
  if (d != 2 * mbar)
    throw FrameMismatch("curvature dimension does not equal 2*mbar");

  NormalJet jet;
  jet.mbar = mbar;
  jet.dim = d;

  jet.s0.push_back({Complex(1.0), MultiIndex(d), -mbar});

  const auto& ric = curv.ricci();
  double c2 = mbar * (mbar + 1) / 3.0;
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) {
      if (ric(j, l) == 0.0) continue;
      jet.s2.push_back({Complex(c2 * ric(j, l)),
                        MultiIndex::unit(d, j) + MultiIndex::unit(d, l), -mbar - 2});
    }

  jet.d_s0.assign(d, {});
  jet.d_s1.assign(d, {});
  for (int l = 0; l < d; ++l)
    for (int t = 0; t < d; ++t) {
      if (ric(l, t) == 0.0) continue;
      jet.d_s1[l].push_back(
          {-kImag * (2.0 * mbar / 3.0) * ric(l, t), MultiIndex::unit(d, t), -mbar - 1});
    }

  jet.dd_s0.assign(d, std::vector<std::vector<SymbolTerm>>(d));
  for (int l = 0; l < d; ++l)
    for (int v = 0; v < d; ++v)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double r = curv.at(a, l, b, v) + curv.at(a, v, b, l);
          if (r == 0.0) continue;
          jet.dd_s0[l][v].push_back({Complex(-(mbar / 3.0) * r),
                                     MultiIndex::unit(d, a) + MultiIndex::unit(d, b),
                                     -mbar - 1});
        }
  return jet;
}

}  // namespace warpres
