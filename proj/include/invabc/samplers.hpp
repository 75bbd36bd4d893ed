#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "invabc/model.hpp"
#include "invabc/random.hpp"
#include "invabc/summaries.hpp"

namespace invabc {

enum class NuUpdateMode { exact_mh, paper_gibbs };

/// Tuning and stopping parameters shared by the chain and rejection samplers.
struct ChainConfig {
  long long iterations = 250000;
  long long burn_in = 25000;
  std::uint64_t seed = 1;
  double epsilon = 0.0;
  KernelType kernel = KernelType::indicator;
  NuUpdateMode nu_update_mode = NuUpdateMode::exact_mh;
  double position_scale_s = 5.0;  // m
  double position_scale_t = 2.0;  // yr
  bool record_latents = false;

  /// Hold a block fixed instead of sampling it (reductions and diagnostics).
  std::optional<double> fix_nu;
  std::optional<double> fix_lambda;
  std::optional<double> fix_sigma2;

  long long max_init_attempts = 1000000;  // per road
  int nu_retry_cap = 100;                 // paper_gibbs redraw budget

  long long rejection_samples = 10000;       // accepted draws to collect
  long long rejection_max_attempts = 50000000;

  void validate() const;
};

/// Current values of everything the chain updates.
struct ChainState {
  ModelParams params;
  std::vector<RoadState> roads;
};

/// Post-burn-in history, one entry per recorded iteration, stored by column.
struct ChainTrace {
  int n_groups = 0;
  std::size_t n_roads = 0;
  std::vector<std::vector<double>> lambdas;  // [group][row]
  std::vector<double> nu;
  std::vector<double> sigma2;
  std::vector<std::vector<long long>> k;     // [road][row]
  /// [row][road] introduction coordinates; filled when record_latents is set.
  std::vector<std::vector<std::vector<Introduction>>> latents;

  long long nu_proposals = 0, nu_accepts = 0;
  long long bd_proposals = 0, bd_accepts = 0;
  long long pos_proposals = 0, pos_accepts = 0;
  long long nu_retries_exhausted = 0;
  long long attempts_total = 0;  // rejection sampler bookkeeping

  std::size_t rows() const { return nu.size(); }
};

/// Ingredients of one transdimensional Metropolis-Hastings-Green decision.
/// Log densities may be -infinity (out of support); kernel weights are plain
/// probabilities in [0, 1].
struct MoveTerms {
  double kernel_current = 1.0;
  double kernel_proposed = 1.0;
  double log_prior_current = 0.0;   // log p(theta, k, x) at the current state
  double log_prior_proposed = 0.0;  // same at the proposal
  double log_forward = 0.0;         // log q(current -> proposal), auxiliaries included
  double log_reverse = 0.0;         // log q(proposal -> current)
  double log_jacobian = 0.0;        // log |J| of the dimension-matching map
};

/// Acceptance ratio (kernel ratio) x (prior ratio) x (reverse / forward
/// proposal densities) x |J|. A zero current kernel with a positive proposed
/// one yields +infinity (forced accept); both zero yields 0.
double td_accept_ratio(const MoveTerms& t);

/// One birth / death / hold proposal on a road's introduction configuration.
/// The target is the exchangeable point-process posterior restricted by the
/// epsilon-kernel on summaries; births append a uniform horizon point, deaths
/// remove a uniformly chosen one (automatic rejection at k = 0).
RoadState birth_death_step(Rng& rng, const RoadState& road, double lambda_g,
                           const TransectLayout& layout, double nu, double T,
                           const Summary& observed, double epsilon,
                           KernelType kernel, bool* accepted = nullptr);

/// Symmetric random-walk move of one introduction; no-op at k = 0. Proposals
/// leaving the horizon are rejected; otherwise acceptance reduces to the
/// kernel ratio on re-simulated summaries.
RoadState position_move(Rng& rng, const RoadState& road,
                        const TransectLayout& layout, double nu, double T,
                        const Summary& observed, double epsilon,
                        KernelType kernel, double scale_s, double scale_t,
                        bool* accepted = nullptr);

/// Conjugate draw sigma2 | nu, Z ~ Inverse-Gamma(n/2, sum((z - nu)^2) / 2).
double gibbs_sigma2(Rng& rng, double nu, const std::vector<double>& z);

/// Conjugate draw lambda_g | k ~ Gamma(1 + k_total, 1 + area_total).
double gibbs_lambda(Rng& rng, long long k_total, double area_total);

/// Spread-rate update. Both modes propose from the Normal conditional given Z
/// (prior precision 1/100 at mean 10 plus n/sigma2 at the Z mean) and keep nu
/// positive. exact_mh accepts with the full ratio over road terms (area and
/// count factors plus summary kernels under the new horizon); paper_gibbs
/// redraws until the road configurations stay valid, up to the retry cap.
/// Re-simulates road patterns on success; returns whether nu changed.
bool update_nu(Rng& rng, ChainState& state, const Dataset& data,
               const TransectLayout& layout, const ChainConfig& config,
               long long* retries_exhausted = nullptr);

using RowCallback =
    std::function<void(long long iteration, const ChainState& state)>;

/// Full Gibbs-within-ABC chain: per iteration sigma2, nu, per-group lambda,
/// then per road a position move followed by a birth-death step. Records after
/// burn-in. Initial road configurations come from per-road rejection sampling
/// so the chain starts inside the kernel's support.
ChainTrace run_chain(Rng& rng, const Dataset& data, const ChainConfig& config,
                     const TransectLayout& layout = {},
                     const RowCallback& on_row = {});

/// Plain rejection sampler: propose everything from the prior, accept by the
/// kernel jointly across roads, retain the previous state on rejection. Rows
/// are recorded per iteration from the first acceptance onward; stops after
/// config.rejection_samples acceptances.
ChainTrace rejection_abc(Rng& rng, const Dataset& data,
                         const ChainConfig& config,
                         const TransectLayout& layout = {},
                         const RowCallback& on_row = {});

}  // namespace invabc
