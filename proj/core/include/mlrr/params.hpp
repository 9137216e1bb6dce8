#pragma once

#include <cmath>
#include <stdexcept>

namespace mlrr {

// Structural parameters (alpha, beta, V1, var(Y0), h_max) plus the bias
// constants c1 and c_tilde = lim |c_R|^(1/R), both defaulting to 1 (the
// "blind" implementation convention).
struct StructuralParams {
  double alpha = 1.0;    // weak-error exponent
  double beta = 1.0;     // strong-error exponent
  double V1 = 0.0;       // strong-error constant
  double var_Y0 = 1.0;   // variance of the limit variable
  double h_max = 1.0;    // coarsest admissible bias parameter
  double c1 = 1.0;
  double c_tilde = 1.0;

  double theta() const {
    if (V1 < 0) throw std::domain_error("theta: V1 must be >= 0");
    if (!(var_Y0 > 0)) throw std::domain_error("theta: var_Y0 must be > 0");
    return std::sqrt(V1 / var_Y0);
  }

  // Consistency of strong and weak errors implies beta <= 2 alpha when
  // c1 != 0; a violation is a warning, not an error.
  bool inconsistent_rates() const { return c1 != 0.0 && beta > 2.0 * alpha; }
};

enum class EstimatorKind { crude, multistep, mlmc, ml2r };

// sum: every scheme in a level is paid (SDE discretization); max: only the
// finest inner computation is paid (nested Monte Carlo).
enum class CostRegime { sum, max };

// Rounding of the continuous depth R+.  `ceil` is the default: it is the
// only mode that reproduces the reference experiment tables (see README).
enum class Rounding { floor, nearest, ceil };

}  // namespace mlrr
