#include "invabc/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace invabc {

void RoadRecord::validate(double max_age) const {
  if (group < 1)
    throw std::invalid_argument("RoadRecord: group must be >= 1");
  if (!(age_T >= 1.0) || !(age_T <= max_age))
    throw std::invalid_argument("RoadRecord: age " + std::to_string(age_T) +
                                " outside [1, " + std::to_string(max_age) + "]");
}

double log_prior(const ModelParams& params) {
  if (params.lambdas.empty())
    throw std::invalid_argument("log_prior: at least one group rate required");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double lp = 0.0;
  for (const double lambda : params.lambdas) {
    if (!(lambda > 0.0)) return kNegInf;
    lp -= lambda;  // Exponential(1)
  }
  if (!(params.sigma2 > 0.0)) return kNegInf;
  const double d = params.nu - 10.0;
  lp += -0.5 * std::log(2.0 * std::numbers::pi * 100.0) - d * d / 200.0;
  lp -= std::log(params.sigma2);  // improper 1/sigma2
  return lp;
}

double log_poisson_pmf(long long k, double mu) {
  if (k < 0) throw std::invalid_argument("log_poisson_pmf: k must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("log_poisson_pmf: mu must be > 0");
  const double kd = static_cast<double>(k);
  return kd * std::log(mu) - mu - std::lgamma(kd + 1.0);
}

}  // namespace invabc
