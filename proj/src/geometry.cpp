#include "invabc/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace invabc {

void TransectLayout::validate() const {
  if (quadrat_count < 1 || quadrat_count > 8)
    throw std::invalid_argument("TransectLayout: quadrat_count must be in [1, 8]");
  if (!(quadrat_width > 0.0))
    throw std::invalid_argument("TransectLayout: quadrat_width must be > 0");
  if (!(pitch > quadrat_width))
    throw std::invalid_argument("TransectLayout: pitch must exceed quadrat_width");
}

Pattern6 footprint(const TransectLayout& layout, double nu, double T,
                   double s, double t) {
  layout.validate();
  if (!(nu >= 0.0)) throw std::invalid_argument("footprint: nu must be >= 0");
  if (!(t >= 0.0) || !(t <= T))
    throw std::invalid_argument("footprint: t must lie in [0, T]");
  const double r = nu * (T - t);
  Pattern6 p = 0;
  for (int i = 0; i < layout.quadrat_count; ++i) {
    // closed-interval overlap: boundary contact counts as presence
    if (s - r <= layout.quadrat_hi(i) && s + r >= layout.quadrat_lo(i))
      p |= static_cast<Pattern6>(1u << (layout.quadrat_count - 1 - i));
  }
  return p;
}

namespace {

// Radii at which the expanding quadrat intervals change their overlap order;
// between consecutive critical radii every interval-arithmetic quantity below
// is affine in r, so trapezoid integration over each segment is exact.
std::vector<double> critical_radii(const TransectLayout& layout, double r_max) {
  std::vector<double> rs{0.0};
  for (int d = 1; d <= layout.quadrat_count; ++d) {
    const double r = 0.5 * (layout.pitch * d - layout.quadrat_width);
    if (r > 0.0 && r < r_max) rs.push_back(r);
  }
  rs.push_back(r_max);
  std::sort(rs.begin(), rs.end());
  return rs;
}

// Total length of the union of the dilated quadrat intervals
// [lo_i - r, hi_i + r]; they are already sorted by construction.
double union_length(const TransectLayout& layout, double r) {
  double total = 0.0;
  double cur_lo = layout.quadrat_lo(0) - r;
  double cur_hi = layout.quadrat_hi(0) + r;
  for (int i = 1; i < layout.quadrat_count; ++i) {
    const double lo = layout.quadrat_lo(i) - r;
    const double hi = layout.quadrat_hi(i) + r;
    if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  return total + (cur_hi - cur_lo);
}

void check_horizon_args(const TransectLayout& layout, double nu, double T,
                        const char* who) {
  layout.validate();
  if (!(T > 0.0))
    throw std::invalid_argument(std::string(who) + ": T must be > 0");
  if (!(nu >= 0.0))
    throw std::invalid_argument(std::string(who) + ": nu must be >= 0");
}

}  // namespace

double horizon_area(const TransectLayout& layout, double nu, double T) {
  check_horizon_args(layout, nu, T, "horizon_area");
  if (nu == 0.0) return layout.quadrat_count * layout.quadrat_width * T;
  // substitute r = nu (T - t): area = (1/nu) * integral_0^{nu T} L(r) dr
  const auto rs = critical_radii(layout, nu * T);
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < rs.size(); ++j)
    integral += 0.5 * (union_length(layout, rs[j]) + union_length(layout, rs[j + 1])) *
                (rs[j + 1] - rs[j]);
  return integral / nu;
}

std::vector<PartitionCell> horizon_partition(const TransectLayout& layout,
                                             double nu, double T) {
  check_horizon_args(layout, nu, T, "horizon_partition");
  const int n = layout.quadrat_count;
  std::vector<double> area(256, 0.0);

  if (nu == 0.0) {
    for (int i = 0; i < n; ++i)
      area[1u << (n - 1 - i)] = layout.quadrat_width * T;
  } else {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // s-measure of points at dilation radius r reaching exactly quadrats a..b:
    // reach both ends of the run while missing the neighbours on either side
    auto run_measure = [&](int a, int b, double r) {
      const double need_lo = layout.quadrat_lo(b) - r;
      const double need_hi = layout.quadrat_hi(a) + r;
      const double excl_lo = (a > 0) ? layout.quadrat_hi(a - 1) + r : -kInf;
      const double excl_hi = (b + 1 < n) ? layout.quadrat_lo(b + 1) - r : kInf;
      return std::min(need_hi, excl_hi) - std::max(need_lo, excl_lo);
    };
    const auto rs = critical_radii(layout, nu * T);
    for (std::size_t j = 0; j + 1 < rs.size(); ++j) {
      const double h = rs[j + 1] - rs[j];
      for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
          // sign changes of run_measure occur only at critical radii, so the
          // clamp below never hides a mid-segment zero crossing
          const double m0 = std::max(0.0, run_measure(a, b, rs[j]));
          const double m1 = std::max(0.0, run_measure(a, b, rs[j + 1]));
          if (m0 <= 0.0 && m1 <= 0.0) continue;
          Pattern6 p = 0;
          for (int i = a; i <= b; ++i) p |= static_cast<Pattern6>(1u << (n - 1 - i));
          area[p] += 0.5 * (m0 + m1) * h;
        }
      }
    }
    for (auto& v : area) v /= nu;
  }

  std::vector<PartitionCell> cells;
  for (int p = 1; p < 256; ++p)
    if (area[p] > 0.0) cells.push_back({static_cast<Pattern6>(p), area[p]});
  return cells;
}

Introduction sample_uniform_horizon(Rng& rng, const TransectLayout& layout,
                                    double nu, double T) {
  check_horizon_args(layout, nu, T, "sample_uniform_horizon");
  const int n = layout.quadrat_count;
  const double w = layout.quadrat_width;
  // each quadrat's reachable set is a trapezoid of this area in (s, t)
  const double tau = w * T + nu * T * T;
  for (;;) {
    const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    // u = T - t has density proportional to the cross-section width w + 2 nu u
    const double xi = rng.uniform();
    const double u = (nu == 0.0)
                         ? xi * T
                         : (-w + std::sqrt(w * w + 4.0 * nu * xi * tau)) / (2.0 * nu);
    const double t = std::clamp(T - u, 0.0, T);
    const double r = nu * u;
    const double s = rng.uniform(layout.quadrat_lo(i) - r, layout.quadrat_hi(i) + r);
    const int m = pattern_ones(footprint(layout, nu, T, s, t), n);
    if (m == 0) continue;  // rounding pushed the point just outside; redraw
    // a point reaching m quadrats was proposable from m trapezoids: thin by 1/m
    if (m == 1 || rng.uniform() * m < 1.0) return {s, t};
  }
}

int pattern_ones(Pattern6 p, int quadrat_count) {
  const unsigned mask = (quadrat_count >= 8) ? 0xffu : ((1u << quadrat_count) - 1u);
  return std::popcount(static_cast<unsigned>(p) & mask);
}

int pattern_runs(Pattern6 p, int quadrat_count) {
  int runs = 0;
  bool prev = false;
  for (int i = 0; i < quadrat_count; ++i) {
    const bool cur = (p >> (quadrat_count - 1 - i)) & 1u;
    if (cur && !prev) ++runs;
    prev = cur;
  }
  return runs;
}

std::string pattern_string(Pattern6 p, int quadrat_count) {
  std::string out(static_cast<std::size_t>(quadrat_count), '0');
  for (int i = 0; i < quadrat_count; ++i)
    if ((p >> (quadrat_count - 1 - i)) & 1u) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

Pattern6 pattern_parse(const std::string& text, int quadrat_count) {
  if (static_cast<int>(text.size()) != quadrat_count)
    throw std::invalid_argument("pattern_parse: expected " +
                                std::to_string(quadrat_count) + " characters");
  Pattern6 p = 0;
  for (int i = 0; i < quadrat_count; ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '1')
      p |= static_cast<Pattern6>(1u << (quadrat_count - 1 - i));
    else if (c != '0')
      throw std::invalid_argument("pattern_parse: invalid character '" +
                                  std::string(1, c) + "'");
  }
  return p;
}

}  // namespace invabc
