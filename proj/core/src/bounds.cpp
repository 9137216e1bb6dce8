#include "mlrr/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mlrr {

double pi_alpha_m(double alpha, int M, int truncation) {
  if (!(alpha > 0) || M < 2 || truncation < 1)
    throw std::invalid_argument("pi_alpha_m: need alpha > 0, M >= 2, truncation >= 1");
  double p = 1.0;
  for (int k = 1; k <= truncation; ++k)
    p *= 1.0 - std::pow(static_cast<double>(M), -alpha * k);
  return p;
}

double w_alpha_bound(double alpha, int M, int truncation) {
  const double pi = pi_alpha_m(alpha, M, truncation);
  double s = 0.0;
  for (int k = 0; k < truncation; ++k)
    s += std::pow(static_cast<double>(M), -alpha * k * (k + 3) / 2.0);
  return std::pow(static_cast<double>(M), -alpha) / (pi * pi) * s + 1.0 / pi;
}

}  // namespace mlrr
