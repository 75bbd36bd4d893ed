#include "invabc/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace invabc {

Summary summarize(Pattern6 p, int quadrat_count) {
  return {pattern_runs(p, quadrat_count), pattern_ones(p, quadrat_count)};
}

double kernel_eval(const Summary& a, const Summary& b, double epsilon,
                   KernelType kind) {
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("kernel_eval: epsilon must be >= 0");
  const int dr = std::abs(a.runs - b.runs);
  const int dn = std::abs(a.ones - b.ones);
  switch (kind) {
    case KernelType::indicator:
      return (std::max(dr, dn) <= epsilon) ? 1.0 : 0.0;
    case KernelType::gaussian: {
      if (epsilon == 0.0)
        throw std::invalid_argument("kernel_eval: gaussian kernel needs epsilon > 0");
      const double d2 = static_cast<double>(dr * dr + dn * dn);
      return std::exp(-d2 / (2.0 * epsilon * epsilon));
    }
  }
  throw std::invalid_argument("kernel_eval: unknown kernel kind");
}

std::vector<Pattern6> summary_fiber(const Summary& s, int quadrat_count) {
  std::vector<Pattern6> out;
  const int n_patterns = 1 << quadrat_count;
  for (int p = 0; p < n_patterns; ++p) {
    const auto pat = static_cast<Pattern6>(p);
    if (summarize(pat, quadrat_count) == s) out.push_back(pat);
  }
  return out;
}

}  // namespace invabc
