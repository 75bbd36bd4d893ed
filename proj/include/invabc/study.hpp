#pragma once

#include <string>
#include <vector>

#include "invabc/model.hpp"
#include "invabc/random.hpp"
#include "invabc/samplers.hpp"

namespace invabc {

/// Credible summary of one scalar chain column.
struct ParamSummary {
  std::string name;
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;
};

/// Empirical quantile with linear interpolation between order statistics
/// (position 1 + (n-1) q, one-based). `sorted` must be ascending and nonempty.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Per-parameter (median, lower, upper, mean) at the given pair of interval
/// quantiles. Columns: lambda_g per group, nu, sigma2, then per-road k.
std::vector<ParamSummary> summarize_trace(
    const ChainTrace& trace, const std::vector<double>& quantiles = {0.025,
                                                                     0.975});

struct CoverageRow {
  std::string parameter;
  double coverage = 0.0;
  double std_error = 0.0;
  long long n_effective = 0;  // replicates that completed
};

struct StudyConfig {
  long long replicates = 50;
  double lower_q = 0.025;
  double upper_q = 0.975;
  int n_z = 26;
  int threads = 1;
};

/// Draw a road table with integer ages uniform on [age_min, age_max].
std::vector<RoadPlan> default_road_plan(Rng& rng, int n_groups,
                                        int roads_per_group, int age_min = 6,
                                        int age_max = 56);

/// Simulate-and-refit coverage study: for each replicate, generate a dataset
/// at `truth`, run the chain, and record whether each parameter's credible
/// interval covers its true value. Replicates use independent derived rng
/// streams, so results do not depend on the thread count. Failed replicates
/// are excluded from the denominator but still counted in the report.
std::vector<CoverageRow> coverage_study(const Rng& rng, const ModelParams& truth,
                                        const std::vector<RoadPlan>& plan,
                                        const StudyConfig& study,
                                        const ChainConfig& chain_config,
                                        const TransectLayout& layout = {});

}  // namespace invabc
