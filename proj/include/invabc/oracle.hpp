#pragma once

#include <vector>

#include "invabc/model.hpp"
#include "invabc/random.hpp"
#include "invabc/summaries.hpp"

namespace invabc {

/// Exact P(data = Y | lambda, nu, T) by inclusion-exclusion over the footprint
/// partition: a Poisson configuration realises Y iff no introduction lands in
/// a cell whose footprint is not contained in Y and the realised footprints
/// cover Y. Summing exp(-lambda (A_H - A_subseteq(S))) with signs over the
/// sub-patterns S of Y marginalises the count and locations in closed form.
double exact_likelihood(Pattern6 y, double lambda, const TransectLayout& layout,
                        double nu, double T);

/// Same, with the partition and total area precomputed (grid evaluation).
double exact_likelihood(Pattern6 y, double lambda,
                        const std::vector<PartitionCell>& cells, double area,
                        int quadrat_count = 6);

struct MCEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Brute-force check: fraction of forward simulations producing exactly Y.
MCEstimate mc_likelihood(Rng& rng, Pattern6 y, double lambda,
                         const TransectLayout& layout, double nu, double T,
                         long long n_sims);

/// P(s(data) = s | lambda, nu, T): exact_likelihood summed over the fiber.
double exact_summary_likelihood(const Summary& s, double lambda,
                                const TransectLayout& layout, double nu,
                                double T);

/// Ground-truth posterior over a lambda grid for a single group with fixed nu:
/// weight_j proportional to Exponential(1) prior at lambda_j times the product
/// over roads of the exact summary likelihood; normalized to sum to one.
std::vector<double> exact_posterior_grid(const std::vector<Summary>& s_per_road,
                                         const std::vector<double>& ages,
                                         double nu,
                                         const std::vector<double>& lambda_grid,
                                         const TransectLayout& layout = {});

}  // namespace invabc
