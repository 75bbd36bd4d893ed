#include "invabc/simulate.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace invabc {

Pattern6 data_from_introductions(const std::vector<Introduction>& introductions,
                                 const TransectLayout& layout, double nu,
                                 double T) {
  Pattern6 p = 0;
  for (const auto& x : introductions) p |= footprint(layout, nu, T, x.s, x.t);
  return p;
}

RoadState simulate_road(Rng& rng, double lambda_g, const TransectLayout& layout,
                        double nu, double T) {
  if (!(lambda_g > 0.0))
    throw std::invalid_argument("simulate_road: lambda must be > 0");
  const double area = horizon_area(layout, nu, T);
  RoadState state;
  state.k = rng.poisson(lambda_g * area);
  state.introductions.reserve(static_cast<std::size_t>(state.k));
  for (long long j = 0; j < state.k; ++j)
    state.introductions.push_back(sample_uniform_horizon(rng, layout, nu, T));
  state.simulated = data_from_introductions(state.introductions, layout, nu, T);
  return state;
}

Dataset simulate_dataset(Rng& rng, const ModelParams& params,
                         const std::vector<RoadPlan>& plan, int n_z,
                         const TransectLayout& layout) {
  if (!(params.sigma2 > 0.0))
    throw std::invalid_argument("simulate_dataset: sigma2 must be > 0");
  if (!(params.nu >= 0.0))
    throw std::invalid_argument("simulate_dataset: nu must be >= 0");
  if (params.lambdas.empty())
    throw std::invalid_argument("simulate_dataset: at least one group rate required");
  if (n_z < 2)
    throw std::invalid_argument("simulate_dataset: n_z must be >= 2");
  if (plan.empty())
    throw std::invalid_argument("simulate_dataset: empty road plan");

  const int n_groups = static_cast<int>(params.lambdas.size());
  Dataset ds;
  ds.n_groups = n_groups;
  std::map<int, int> next_index;
  for (const auto& road : plan) {
    if (road.group < 1 || road.group > n_groups)
      throw std::invalid_argument("simulate_dataset: road group " +
                                  std::to_string(road.group) +
                                  " has no rate in params");
    RoadState st = simulate_road(rng, params.lambdas[road.group - 1], layout,
                                 params.nu, road.age);
    RoadRecord rec;
    rec.group = road.group;
    rec.road_index = ++next_index[road.group];
    rec.age_T = road.age;
    rec.observed = st.simulated;
    rec.validate();
    ds.roads.push_back(rec);
    ds.latent.push_back(std::move(st));
  }
  const double sd = std::sqrt(params.sigma2);
  ds.temporal.z.reserve(static_cast<std::size_t>(n_z));
  for (int i = 0; i < n_z; ++i)
    ds.temporal.z.push_back(rng.normal(params.nu, sd));
  return ds;
}

}  // namespace invabc
