#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mlrr/params.hpp"
#include "mlrr/plan.hpp"
#include "mlrr/rng.hpp"

namespace mlrr {

// Coupling contract for one model.  All state for a draw lives in the
// provided stream, so samplers are immutable after construction and safe to
// share across threads.
class LevelSampler {
 public:
  virtual ~LevelSampler() = default;

  // One draw of Y_h.
  virtual double sample_base(double h, RngStream& g) const = 0;

  // One coupled draw of (Y_{h/n_coarse}, Y_{h/n_fine}) built from the same
  // underlying randomness; n_coarse must divide n_fine.
  virtual std::pair<double, double> sample_pair(double h, std::int64_t n_coarse,
                                                std::int64_t n_fine,
                                                RngStream& g) const = 0;

  // One coupled draw of the full vector (Y_{h/n_1}, ..., Y_{h/n_R}); needed
  // only by non-telescopic allocation matrices.
  virtual void sample_joint(double h, const std::vector<std::int64_t>& n,
                            RngStream& g, std::vector<double>& out) const = 0;

  // Cost units consumed by one draw of Y_{h'} relative to the 1/h' baseline
  // (1 for discretization schemes; nested MC also reports 1, the regimes
  // differ in how coupled pairs are charged).
  virtual double unit_cost_hint(CostRegime) const { return 1.0; }

  // The cost regime this model's complexity analysis calls for.
  virtual CostRegime preferred_regime() const { return CostRegime::sum; }
};

struct RunResult {
  double estimate = 0.0;
  double nu_bar = 0.0;  // empirical unitary variance of the estimator
  std::vector<std::int64_t> N_j;
  double cost_units = 0.0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  bool promoted_levels = false;  // some N_j was raised to 2
};

struct ReplicationStats {
  int L = 0;
  double mu_tilde = 0.0;   // empirical bias (0 when no reference given)
  bool has_reference = false;
  double nu_tilde = 0.0;   // mean of nu_bar over runs
  double eps_tilde = 0.0;  // sqrt(mu~^2 + nu~)
  double mean_estimate = 0.0;
  double mean_cost_units = 0.0;
  double wall_time = 0.0;
};

// Execute the plan: stratified multilevel sampling with N_j = ceil(q_j N)
// per level.  Deterministic for fixed (plan, sampler, seed, replication)
// at any thread count: blocks of samples are accumulated separately and
// merged in index order.
RunResult run(const Plan& plan, const LevelSampler& sampler, std::uint64_t seed,
              int threads = 1, std::uint32_t replication = 0);

// L independent runs (replication indices 0..L-1 derived from base_seed).
// mu_tilde is only meaningful when a reference value is supplied.
ReplicationStats replicate(const Plan& plan, const LevelSampler& sampler, int L,
                           std::uint64_t base_seed,
                           const double* reference = nullptr, int threads = 1);

// V1_hat(h) = (1 + M_probe^(-beta/2))^-2 h^-beta E[(Y_h - Y_{h/M_probe})^2].
double estimate_V1(const LevelSampler& sampler, double h, int M_probe,
                   double beta, std::int64_t sample_size, std::uint64_t seed);

// Unbiased sample variance of Y_{h_fine}.
double estimate_var_Y0(const LevelSampler& sampler, double h_fine,
                       std::int64_t sample_size, std::uint64_t seed);

}  // namespace mlrr
