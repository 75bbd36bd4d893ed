#pragma once

#include <vector>

#include "invabc/model.hpp"
#include "invabc/random.hpp"

namespace invabc {

/// Deterministic data-generating mechanism: OR of introduction footprints.
Pattern6 data_from_introductions(const std::vector<Introduction>& introductions,
                                 const TransectLayout& layout, double nu,
                                 double T);

/// Draw one road's latent configuration: k ~ Poisson(lambda_g * area), then k
/// i.i.d. uniform introductions on the horizon.
RoadState simulate_road(Rng& rng, double lambda_g, const TransectLayout& layout,
                        double nu, double T);

/// Generate a full synthetic dataset at the given truth: every planned road
/// independently, then n_z temporal observations ~ Normal(nu, sigma2).
/// Latent road states are retained in the result.
Dataset simulate_dataset(Rng& rng, const ModelParams& params,
                         const std::vector<RoadPlan>& plan, int n_z,
                         const TransectLayout& layout = {});

}  // namespace invabc
