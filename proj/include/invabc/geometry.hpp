#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invabc/random.hpp"

namespace invabc {

/// Survey layout along a road transect: `quadrat_count` sampling quadrats of
/// `quadrat_width` metres placed with starts `pitch` metres apart, the first
/// starting at s = 0, so quadrat i spans [pitch*i, pitch*i + quadrat_width].
struct TransectLayout {
  int quadrat_count = 6;
  double quadrat_width = 0.25;
  double pitch = 10.0;

  void validate() const;
  double quadrat_lo(int i) const { return pitch * i; }
  double quadrat_hi(int i) const { return pitch * i + quadrat_width; }
  /// Distance from the start of the first quadrat to the end of the last.
  double length() const { return pitch * (quadrat_count - 1) + quadrat_width; }
};

/// Occupancy pattern across the quadrats, quadrat 0 in the most significant of
/// the low `quadrat_count` bits ("110010" -> 0b110010).
using Pattern6 = std::uint8_t;

/// One introduction event: position s along the transect (metres) and time t
/// since road construction (years).
struct Introduction {
  double s = 0.0;
  double t = 0.0;
};

/// Maximal run of consecutive quadrats reachable from a single introduction,
/// together with the measure of the set of introductions realising exactly it.
struct PartitionCell {
  Pattern6 footprint = 0;
  double area = 0.0;
};

/// Which quadrats a colony founded at (s, t) has reached by survey time T,
/// spreading at nu metres/year in both directions.
Pattern6 footprint(const TransectLayout& layout, double nu, double T,
                   double s, double t);

/// Area (m * yr) of the introduction region that reaches at least one quadrat.
double horizon_area(const TransectLayout& layout, double nu, double T);

/// Decomposition of the reachable region into constant-footprint cells,
/// ordered by footprint value. Cell areas sum to horizon_area.
std::vector<PartitionCell> horizon_partition(const TransectLayout& layout,
                                             double nu, double T);

/// Uniform draw from the reachable region.
Introduction sample_uniform_horizon(Rng& rng, const TransectLayout& layout,
                                    double nu, double T);

/// Number of set bits among the low quadrat_count bits.
int pattern_ones(Pattern6 p, int quadrat_count);

/// Number of maximal runs of ones.
int pattern_runs(Pattern6 p, int quadrat_count);

/// Render as a 0/1 string, quadrat 0 first.
std::string pattern_string(Pattern6 p, int quadrat_count);

/// Parse a 0/1 string, quadrat 0 first. Throws std::invalid_argument on any
/// other character or wrong length.
Pattern6 pattern_parse(const std::string& text, int quadrat_count);

}  // namespace invabc
