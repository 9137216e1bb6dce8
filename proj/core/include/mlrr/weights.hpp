#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mlrr {

// Extrapolation weights w_1..w_R: the unique solution of the Vandermonde
// system sum_i w_i = 1, sum_i w_i / n_i^(alpha k) = 0 for k = 1..R-1.
// wtilde is the next coefficient sum_i w_i / n_i^(alpha R), which has the
// closed form (-1)^(R-1) / (n_1 ... n_R)^alpha.
struct WeightVector {
  double alpha = 1.0;
  std::vector<std::int64_t> refiners;
  std::vector<double> w;
  double wtilde = 0.0;

  int R() const { return static_cast<int>(w.size()); }
};

// Closed-form product solution (no matrix inversion):
//   w_i = (-1)^(R-i) n_i^(alpha(R-1)) /
//         ( prod_{j<i} (n_i^a - n_j^a) * prod_{j>i} (n_j^a - n_i^a) ).
// Falls back to log-domain accumulation with separate sign tracking when the
// naive products would leave the double range; throws std::overflow_error if
// even the final weight is unrepresentable.
WeightVector solve_weights(double alpha, const std::vector<std::int64_t>& n);

// (-1)^(R-1) / (prod n_i)^alpha. Throws std::overflow_error when the product
// leaves the representable range.
double wtilde(double alpha, const std::vector<std::int64_t>& n);

// W_j = sum_{i=j}^R w_i.  W_1 = 1 always (first Vandermonde row).
std::vector<double> cumulative_weights(const WeightVector& w);

// Rescaled weights exploiting c_1 = 0: order-R weight vector of size R-1
// built from the order-(R-1) weights,
//   wt_r = n_r^alpha w_r / sum_s n_s^alpha w_s.
// Throws std::domain_error when the denominator vanishes.
std::vector<double> c1_zero_weights(const std::vector<double>& w_prev,
                                    double alpha,
                                    const std::vector<std::int64_t>& n_prev);

// Offline tabulation: CSV with header alpha,M,R,i,w_i,W_i over the given
// grids of alpha, geometric root M and depth R.
void write_weight_table_csv(std::ostream& os,
                            const std::vector<double>& alphas,
                            const std::vector<int>& Ms,
                            const std::vector<int>& Rs);

}  // namespace mlrr
