#pragma once

// Independent numeric oracles shared by the test binaries. Deliberately
// written against the definitions (interval unions, quadrature) rather than
// reusing library internals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "invabc/geometry.hpp"

namespace testutil {

// Total length of the union of [lo_i - r, hi_i + r] at spread radius r.
inline double union_cross_length(const invabc::TransectLayout& layout,
                                 double r) {
  std::vector<std::pair<double, double>> iv;
  for (int i = 0; i < layout.quadrat_count; ++i)
    iv.emplace_back(layout.quadrat_lo(i) - r, layout.quadrat_hi(i) + r);
  std::sort(iv.begin(), iv.end());
  double total = 0.0, cur_lo = iv[0].first, cur_hi = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= cur_hi) {
      cur_hi = std::max(cur_hi, iv[i].second);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = iv[i].first;
      cur_hi = iv[i].second;
    }
  }
  return total + (cur_hi - cur_lo);
}

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0,
                              depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb),
                              tol, 48);
}

// Quadrature reference for the horizon area: integrate the cross-section
// union length over introduction times.
inline double numeric_horizon_area(const invabc::TransectLayout& layout,
                                   double nu, double T) {
  if (nu == 0.0) return layout.quadrat_count * layout.quadrat_width * T;
  auto f = [&](double t) { return union_cross_length(layout, nu * (T - t)); };
  return adaptive_simpson(f, 0.0, T, 1e-13 * layout.quadrat_count *
                                         (layout.quadrat_width + nu * T) * T);
}

// Bit order reversal across the low `n` bits.
inline invabc::Pattern6 reverse_bits(invabc::Pattern6 p, int n) {
  invabc::Pattern6 out = 0;
  for (int i = 0; i < n; ++i)
    if (p & (1u << i)) out |= static_cast<invabc::Pattern6>(1u << (n - 1 - i));
  return out;
}

}  // namespace testutil
