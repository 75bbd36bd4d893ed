#pragma once

#include <vector>

#include "invabc/geometry.hpp"

namespace invabc {

/// Low-dimensional statistic of an occupancy pattern: number of maximal blocks
/// of consecutive ones, and total number of ones.
struct Summary {
  int runs = 0;
  int ones = 0;

  bool operator==(const Summary&) const = default;
};

enum class KernelType { indicator, gaussian };

Summary summarize(Pattern6 p, int quadrat_count = 6);

/// Discrepancy weight in [0, 1]. indicator: 1 iff max-norm distance <= epsilon
/// (exact match at epsilon = 0). gaussian: exp(-||a-b||^2 / (2 epsilon^2)),
/// epsilon > 0 required.
double kernel_eval(const Summary& a, const Summary& b, double epsilon,
                   KernelType kind);

/// All patterns whose summary equals s, in increasing pattern order.
std::vector<Pattern6> summary_fiber(const Summary& s, int quadrat_count = 6);

}  // namespace invabc
