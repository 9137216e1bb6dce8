#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mlrr/alloc.hpp"
#include "mlrr/params.hpp"
#include "mlrr/weights.hpp"

namespace mlrr {

// A fully resolved simulation configuration.
struct Plan {
  EstimatorKind kind = EstimatorKind::ml2r;
  StructuralParams params;
  double epsilon = 0.0;
  int R = 2;
  int M = 2;                    // geometric root (1 for crude)
  double h = 1.0;               // = h_max / n_h
  std::int64_t n_h = 1;
  std::vector<double> q;        // stratification, sums to 1
  std::int64_t N = 1;           // total sample budget
  WeightVector weights;         // ml2r / multistep; empty otherwise
  AllocationMatrix alloc;
  CostRegime regime = CostRegime::sum;
  Rounding rounding = Rounding::ceil;
  double predicted_cost = 0.0;  // N * cost(h, R, q)
  bool degenerate_R = false;    // epsilon >= A, clamped to R = 2

  std::vector<double> level_refiners_real() const;  // n_i as doubles
};

// Optimal stratification q* (phase-I theorem).  `W` are the cumulative
// weights |W_j| (ignored for mlmc; pass nullptr).  Convention n_0 = 0.
std::vector<double> optimal_q(EstimatorKind kind, const StructuralParams& p,
                              const std::vector<std::int64_t>& n,
                              const std::vector<double>* W, double h);

// Continuous depth R+ before rounding (exposed for diagnostics).
double optimal_R_continuous(EstimatorKind kind, double epsilon,
                            const StructuralParams& p, int M);

// Rounded depth, clamped to >= 2.  Sets *degenerate when epsilon >= A.
int optimal_R(EstimatorKind kind, double epsilon, const StructuralParams& p,
              int M, Rounding rounding, bool* degenerate = nullptr);

// Continuous optimizer h* and its discretization n_h = ceil(h_max/h*),
// h = h_max/n_h (so h <= h* and h_max/h is an integer).
struct HChoice {
  double h_star;  // continuous optimizer
  double h;
  std::int64_t n_h;
};
HChoice optimal_h(EstimatorKind kind, double epsilon, const StructuralParams& p,
                  int R, int M);

// Sample budget N and the per-sample cost denominator sum_j q_j c_j where
// c_j = n_{j-1}+n_j (sum regime) or n_j (max regime).
struct NChoice {
  std::int64_t N;
  double denom;  // sum_j q_j c_j
  double cost;   // N * denom / h
};
NChoice optimal_N(EstimatorKind kind, double epsilon, const StructuralParams& p,
                  const std::vector<std::int64_t>& n, double h,
                  const std::vector<double>& q, const std::vector<double>* W,
                  CostRegime regime);

// Argmin over M in {2..M_max} of the full-pipeline predicted cost; ties go
// to the smaller M.
int choose_M(EstimatorKind kind, double epsilon, const StructuralParams& p,
             CostRegime regime, int M_max, Rounding rounding = Rounding::ceil);

struct PlanOverrides {
  std::optional<int> M;
  std::optional<int> R;
  std::optional<std::int64_t> n_h;
  std::optional<std::vector<double>> q;
  std::optional<std::int64_t> N;
};

// Compose the full pipeline (M-search -> R -> h -> q -> N) into a Plan.
// Overrides pin individual parameters; everything downstream is recomputed.
Plan make_plan(EstimatorKind kind, double epsilon, const StructuralParams& p,
               CostRegime regime = CostRegime::sum,
               Rounding rounding = Rounding::ceil,
               const PlanOverrides& overrides = {}, int M_max = 10);

// Single-level crude Monte Carlo and fixed-refiner multistep plans.
Plan crude_plan(double epsilon, const StructuralParams& p);
Plan multistep_plan(double epsilon, const StructuralParams& p,
                    const std::vector<std::int64_t>& n);

// Predicted cost with the continuous optimizer h* (no grid snapping).  This
// is the asymptotic quantity behind the complexity theorem; the discretized
// plan cost shows staircase artifacts in ratio diagnostics.
double plan_cost_continuous(EstimatorKind kind, double epsilon,
                            const StructuralParams& p, CostRegime regime,
                            Rounding rounding = Rounding::ceil, int M_max = 10);

// Asymptotic complexity pieces: Cost ~ K / v(beta, epsilon).
struct CostCurve {
  std::function<double(double)> v;  // v(epsilon), domain epsilon < 1
  double K = 0.0;
  // beta > 1 only: the free-parameter optimum of the starting bias level
  // (diagnostic; no experiment exercises it).
  double chi_opt = 0.0;
  double K_chi_opt = 0.0;
};
CostCurve theoretical_cost_curve(EstimatorKind kind, const StructuralParams& p,
                                 int M);

}  // namespace mlrr
