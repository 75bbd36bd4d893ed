#include "invabc/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "invabc/simulate.hpp"

namespace invabc {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty())
    throw std::invalid_argument("quantile_sorted: empty sample");
  if (!(q >= 0.0) || !(q <= 1.0))
    throw std::invalid_argument("quantile_sorted: q must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

ParamSummary column_summary(std::string name, std::vector<double> col,
                            double lower_q, double upper_q) {
  ParamSummary s;
  s.name = std::move(name);
  s.mean = std::accumulate(col.begin(), col.end(), 0.0) /
           static_cast<double>(col.size());
  std::sort(col.begin(), col.end());
  s.median = quantile_sorted(col, 0.5);
  s.lower = quantile_sorted(col, lower_q);
  s.upper = quantile_sorted(col, upper_q);
  return s;
}

}  // namespace

std::vector<ParamSummary> summarize_trace(const ChainTrace& trace,
                                          const std::vector<double>& quantiles) {
  if (trace.rows() == 0)
    throw std::invalid_argument("summarize_trace: empty trace");
  if (quantiles.size() != 2)
    throw std::invalid_argument(
        "summarize_trace: expected exactly two interval quantiles");
  if (!(quantiles[0] <= quantiles[1]))
    throw std::invalid_argument("summarize_trace: quantiles must be sorted");
  for (const double q : quantiles)
    if (!(q >= 0.0) || !(q <= 1.0))
      throw std::invalid_argument("summarize_trace: quantiles must lie in [0, 1]");

  std::vector<ParamSummary> out;
  for (std::size_t g = 0; g < trace.lambdas.size(); ++g)
    out.push_back(column_summary("lambda_" + std::to_string(g + 1),
                                 trace.lambdas[g], quantiles[0], quantiles[1]));
  out.push_back(column_summary("nu", trace.nu, quantiles[0], quantiles[1]));
  out.push_back(
      column_summary("sigma2", trace.sigma2, quantiles[0], quantiles[1]));
  for (std::size_t r = 0; r < trace.k.size(); ++r) {
    std::vector<double> col(trace.k[r].begin(), trace.k[r].end());
    out.push_back(column_summary("k_" + std::to_string(r + 1), std::move(col),
                                 quantiles[0], quantiles[1]));
  }
  return out;
}

std::vector<RoadPlan> default_road_plan(Rng& rng, int n_groups,
                                        int roads_per_group, int age_min,
                                        int age_max) {
  if (n_groups < 1 || roads_per_group < 1)
    throw std::invalid_argument("default_road_plan: counts must be >= 1");
  if (age_min < 1 || age_max < age_min)
    throw std::invalid_argument("default_road_plan: bad age range");
  std::vector<RoadPlan> plan;
  plan.reserve(static_cast<std::size_t>(n_groups) *
               static_cast<std::size_t>(roads_per_group));
  const auto span = static_cast<std::uint64_t>(age_max - age_min + 1);
  for (int g = 1; g <= n_groups; ++g)
    for (int r = 0; r < roads_per_group; ++r)
      plan.push_back(
          {g, static_cast<double>(age_min) +
                  static_cast<double>(rng.uniform_int(span))});
  return plan;
}

std::vector<CoverageRow> coverage_study(const Rng& rng, const ModelParams& truth,
                                        const std::vector<RoadPlan>& plan,
                                        const StudyConfig& study,
                                        const ChainConfig& chain_config,
                                        const TransectLayout& layout) {
  if (study.replicates < 1)
    throw std::invalid_argument("coverage_study: replicates must be >= 1");
  if (plan.empty())
    throw std::invalid_argument("coverage_study: empty road plan");
  if (truth.lambdas.empty())
    throw std::invalid_argument("coverage_study: truth has no group rates");
  if (study.n_z < 2)
    throw std::invalid_argument("coverage_study: n_z must be >= 2");
  if (!(study.lower_q >= 0.0) || !(study.lower_q < study.upper_q) ||
      !(study.upper_q <= 1.0))
    throw std::invalid_argument("coverage_study: bad interval quantiles");
  chain_config.validate();

  const int n_groups = static_cast<int>(truth.lambdas.size());
  const int n_params = n_groups + 2;  // rates, nu, sigma2
  std::vector<double> true_values(truth.lambdas.begin(), truth.lambdas.end());
  true_values.push_back(truth.nu);
  true_values.push_back(truth.sigma2);

  // one slot per replicate; empty slot = failed replicate
  std::vector<std::vector<int>> covered(
      static_cast<std::size_t>(study.replicates));

  auto run_replicate = [&](long long i) {
    Rng rep = rng.substream(static_cast<std::uint64_t>(i));
    try {
      const Dataset ds = simulate_dataset(rep, truth, plan, study.n_z, layout);
      const ChainTrace tr = run_chain(rep, ds, chain_config, layout);
      const auto summ =
          summarize_trace(tr, {study.lower_q, study.upper_q});
      std::vector<int> c(static_cast<std::size_t>(n_params));
      for (int p = 0; p < n_params; ++p) {
        const auto& s = summ[static_cast<std::size_t>(p)];
        c[static_cast<std::size_t>(p)] =
            (s.lower <= true_values[static_cast<std::size_t>(p)] &&
             true_values[static_cast<std::size_t>(p)] <= s.upper)
                ? 1
                : 0;
      }
      covered[static_cast<std::size_t>(i)] = std::move(c);
    } catch (const std::exception&) {
      // slot stays empty: replicate failed, excluded but counted
    }
  };

  const int n_threads = std::max(1, study.threads);
  if (n_threads == 1) {
    for (long long i = 0; i < study.replicates; ++i) run_replicate(i);
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const long long i = next.fetch_add(1);
          if (i >= study.replicates) return;
          run_replicate(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  long long n_eff = 0;
  std::vector<long long> hits(static_cast<std::size_t>(n_params), 0);
  for (const auto& c : covered) {
    if (c.empty()) continue;
    ++n_eff;
    for (int p = 0; p < n_params; ++p)
      hits[static_cast<std::size_t>(p)] += c[static_cast<std::size_t>(p)];
  }
  if (n_eff == 0)
    throw std::runtime_error("coverage_study: every replicate failed");

  std::vector<std::string> names;
  for (int g = 1; g <= n_groups; ++g)
    names.push_back("lambda_" + std::to_string(g));
  names.push_back("nu");
  names.push_back("sigma2");

  std::vector<CoverageRow> rows;
  for (int p = 0; p < n_params; ++p) {
    CoverageRow row;
    row.parameter = names[static_cast<std::size_t>(p)];
    row.coverage = static_cast<double>(hits[static_cast<std::size_t>(p)]) /
                   static_cast<double>(n_eff);
    row.std_error = std::sqrt(row.coverage * (1.0 - row.coverage) /
                              static_cast<double>(n_eff));
    row.n_effective = n_eff;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace invabc
