#pragma once

#include <vector>

#include "invabc/geometry.hpp"

namespace invabc {

/// Full parameter vector of the hierarchical model: one introduction rate per
/// group (introductions per m*yr), a shared spread rate (m/yr), and the
/// variance of the temporal spread observations ((m/yr)^2).
struct ModelParams {
  std::vector<double> lambdas;
  double nu = 10.0;
  double sigma2 = 1.0;
};

/// One surveyed road: group membership, identifier, age since construction,
/// and the observed occupancy pattern.
struct RoadRecord {
  int group = 1;
  int road_index = 0;
  double age_T = 0.0;
  Pattern6 observed = 0;

  void validate(double max_age = 200.0) const;
};

/// Latent configuration for one road: introduction count, the introductions
/// themselves (ordered storage; the target is exchangeable), and the pattern
/// they generate.
struct RoadState {
  long long k = 0;
  std::vector<Introduction> introductions;
  Pattern6 simulated = 0;
};

/// Direct observations of spread rate (m/yr), informing nu and sigma2.
struct TemporalData {
  std::vector<double> z;
};

/// Requested composition of a simulated survey: group and age per road.
struct RoadPlan {
  int group = 1;
  double age = 0.0;
};

/// A complete dataset: road patterns plus temporal observations. `latent` is
/// populated only for simulated data (ground truth for study diagnostics).
struct Dataset {
  std::vector<RoadRecord> roads;
  TemporalData temporal;
  std::vector<RoadState> latent;
  int n_groups = 0;
};

/// Log prior density: Exponential(1) per group rate, Normal(10, 10^2) on nu,
/// improper 1/sigma2 on the variance. Returns -infinity (not an error) for
/// non-positive rates or variance.
double log_prior(const ModelParams& params);

/// log Poisson(k; mu) via log-gamma.
double log_poisson_pmf(long long k, double mu);

}  // namespace invabc
