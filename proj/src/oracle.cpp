#include "invabc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "invabc/simulate.hpp"

namespace invabc {

double exact_likelihood(Pattern6 y, double lambda,
                        const std::vector<PartitionCell>& cells, double area,
                        int quadrat_count) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("exact_likelihood: lambda must be > 0");
  if (!(area > 0.0))
    throw std::invalid_argument("exact_likelihood: area must be > 0");
  const int ones_y = pattern_ones(y, quadrat_count);
  double total = 0.0;
  // walk every sub-pattern S of y; P(all points in cells within S) with signs
  // alternating in |y| - |S| leaves exactly the configurations covering y
  unsigned sub = y;
  for (;;) {
    double a_sub = 0.0;
    for (const auto& c : cells)
      if ((c.footprint & sub) == c.footprint) a_sub += c.area;
    const int parity = ones_y - pattern_ones(static_cast<Pattern6>(sub), quadrat_count);
    const double term = std::exp(-lambda * (area - a_sub));
    total += (parity & 1) ? -term : term;
    if (sub == 0) break;
    sub = (sub - 1) & y;
  }
  return total;
}

double exact_likelihood(Pattern6 y, double lambda, const TransectLayout& layout,
                        double nu, double T) {
  const auto cells = horizon_partition(layout, nu, T);
  const double area = horizon_area(layout, nu, T);
  return exact_likelihood(y, lambda, cells, area, layout.quadrat_count);
}

MCEstimate mc_likelihood(Rng& rng, Pattern6 y, double lambda,
                         const TransectLayout& layout, double nu, double T,
                         long long n_sims) {
  if (n_sims < 1) throw std::invalid_argument("mc_likelihood: n_sims must be >= 1");
  long long hits = 0;
  for (long long i = 0; i < n_sims; ++i)
    if (simulate_road(rng, lambda, layout, nu, T).simulated == y) ++hits;
  const double p = static_cast<double>(hits) / static_cast<double>(n_sims);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_sims))};
}

double exact_summary_likelihood(const Summary& s, double lambda,
                                const TransectLayout& layout, double nu,
                                double T) {
  const auto cells = horizon_partition(layout, nu, T);
  const double area = horizon_area(layout, nu, T);
  double p = 0.0;
  for (const Pattern6 pat : summary_fiber(s, layout.quadrat_count))
    p += exact_likelihood(pat, lambda, cells, area, layout.quadrat_count);
  return p;
}

std::vector<double> exact_posterior_grid(const std::vector<Summary>& s_per_road,
                                         const std::vector<double>& ages,
                                         double nu,
                                         const std::vector<double>& lambda_grid,
                                         const TransectLayout& layout) {
  if (lambda_grid.empty())
    throw std::invalid_argument("exact_posterior_grid: empty lambda grid");
  if (s_per_road.empty() || s_per_road.size() != ages.size())
    throw std::invalid_argument(
        "exact_posterior_grid: need one summary per road age");

  struct RoadTable {
    std::vector<PartitionCell> cells;
    double area = 0.0;
    std::vector<Pattern6> fiber;
  };
  std::vector<RoadTable> tables;
  tables.reserve(ages.size());
  for (std::size_t r = 0; r < ages.size(); ++r) {
    RoadTable t;
    t.cells = horizon_partition(layout, nu, ages[r]);
    t.area = horizon_area(layout, nu, ages[r]);
    t.fiber = summary_fiber(s_per_road[r], layout.quadrat_count);
    tables.push_back(std::move(t));
  }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logw(lambda_grid.size(), kNegInf);
  for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
    const double lambda = lambda_grid[j];
    if (!(lambda > 0.0)) continue;  // outside Exponential(1) support
    double lw = -lambda;
    for (const auto& t : tables) {
      double p = 0.0;
      for (const Pattern6 pat : t.fiber)
        p += exact_likelihood(pat, lambda, t.cells, t.area, layout.quadrat_count);
      if (!(p > 0.0)) {
        lw = kNegInf;
        break;
      }
      lw += std::log(p);
    }
    logw[j] = lw;
  }

  const double mx = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(mx))
    throw std::runtime_error("exact_posterior_grid: zero posterior mass on grid");
  std::vector<double> w(logw.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < logw.size(); ++j) {
    w[j] = std::exp(logw[j] - mx);
    sum += w[j];
  }
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace invabc
