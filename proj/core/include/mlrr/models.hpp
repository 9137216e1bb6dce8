#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mlrr/engine.hpp"

namespace mlrr {

struct GBMParams {
  double s0 = 100.0;
  double r = 0.0;
  double sigma = 0.2;
  double T = 1.0;
};

struct Payoff {
  enum class Kind { call, lookback, barrier };
  Kind kind = Kind::call;
  double K = 0.0;       // call / barrier strike
  double B = 0.0;       // barrier level (B > K)
  double lambda = 1.0;  // lookback coefficient (>= 1)

  static Payoff call(double K);
  static Payoff lookback(double lambda);
  static Payoff barrier(double K, double B);
};

struct NestedParams {
  GBMParams gbm;  // uses s0, r, sigma (T ignored; T2 is the horizon)
  double T1 = 1.0 / 12.0;
  double T2 = 0.5;
  double K1 = 6.5;
  double K2 = 100.0;
};

struct SyntheticParams {
  double y0_mean = 0.0;
  double y0_std = 1.0;
  std::vector<double> coeffs;  // c_1..c_K of the weak-error expansion
  double alpha = 1.0;
  double beta = 1.0;
  double V1 = 0.0;
  enum class Coupling { anti, identical, fresh };
  Coupling coupling = Coupling::anti;
};

// Euler scheme of geometric Brownian motion with consistent Brownian
// increments: pairs simulate Gaussian increments on the fine grid and
// aggregate groups of them to drive the coarse scheme from the same path.
// Extremum payoffs use discrete monitoring (no Brownian bridge).
std::unique_ptr<LevelSampler> gbm_euler_sampler(const GBMParams& gbm,
                                                const Payoff& payoff);

// Nested Monte Carlo put-on-call: exact lognormal S_T1, K = 1/h inner
// Gaussians per draw; the coarse component of a pair reuses the first
// K_coarse inner draws of the fine one.  Reports the max cost regime.
// Discounting convention (frozen together with reference_price("nested")):
//   Y = exp(-r T1) (K1 - exp(-r (T2-T1)) innerMean)_+.
std::unique_ptr<LevelSampler> nested_sampler(const NestedParams& p);

// Synthetic expansion model realizing the weak and strong error assumptions
// exactly: Y_h = Y0 + sum_k c_k h^(alpha k) + sqrt(V1) h^(beta/2) xi.
std::unique_ptr<LevelSampler> synthetic_sampler(const SyntheticParams& p);

// Closed-form E[Y_h] of the synthetic model (bias oracle).
double synthetic_mean(const SyntheticParams& p, double h);

// Black-Scholes call (sigma = 0 handled as the deterministic-forward limit).
double bs_call_price(const GBMParams& gbm, double K);

// Frozen reference prices for the four benchmark models.
double reference_price(const std::string& model_id);

}  // namespace mlrr
