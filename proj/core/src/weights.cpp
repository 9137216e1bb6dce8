#include "mlrr/weights.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "mlrr/refiners.hpp"

namespace mlrr {

namespace {

void check_refiners(const std::vector<std::int64_t>& n) {
  if (n.empty() || n.front() != 1)
    throw std::invalid_argument("weights: refiners must start at 1");
  for (std::size_t i = 1; i < n.size(); ++i)
    if (n[i] <= n[i - 1])
      throw std::invalid_argument("weights: refiners must be strictly increasing");
}

// log|n_hi^a - n_lo^a| for n_hi > n_lo >= 1, stable for large exponents.
double log_pow_diff(double alpha, std::int64_t n_hi, std::int64_t n_lo) {
  const double lhi = alpha * std::log(static_cast<double>(n_hi));
  const double llo = alpha * std::log(static_cast<double>(n_lo));
  return lhi + std::log1p(-std::exp(llo - lhi));
}

}  // namespace

WeightVector solve_weights(double alpha, const std::vector<std::int64_t>& n) {
  if (!(alpha > 0)) throw std::invalid_argument("weights: alpha must be > 0");
  check_refiners(n);
  const int R = static_cast<int>(n.size());

  WeightVector wv;
  wv.alpha = alpha;
  wv.refiners = n;
  wv.w.resize(R);

  if (R == 1) {
    wv.w[0] = 1.0;
    wv.wtilde = wtilde(alpha, n);
    return wv;
  }

  // Direct products first (best precision); they only overflow for extreme
  // alpha * R * log(M), in which case redo in the log domain.
  bool direct_ok = true;
  std::vector<double> na(R);
  for (int i = 0; i < R; ++i) {
    na[i] = std::pow(static_cast<double>(n[i]), alpha);
    if (!std::isfinite(na[i])) direct_ok = false;
  }
  if (direct_ok) {
    for (int i = 0; i < R && direct_ok; ++i) {
      double num = std::pow(static_cast<double>(n[i]), alpha * (R - 1));
      double den = 1.0;
      for (int j = 0; j < i; ++j) den *= na[i] - na[j];
      for (int j = i + 1; j < R; ++j) den *= na[j] - na[i];
      const double sign = ((R - 1 - i) % 2 == 0) ? 1.0 : -1.0;
      const double wi = sign * num / den;
      if (!std::isfinite(num) || !std::isfinite(den) || !std::isfinite(wi))
        direct_ok = false;
      else
        wv.w[i] = wi;
    }
  }
  if (!direct_ok) {
    for (int i = 0; i < R; ++i) {
      double lw = alpha * (R - 1) * std::log(static_cast<double>(n[i]));
      for (int j = 0; j < i; ++j) lw -= log_pow_diff(alpha, n[i], n[j]);
      for (int j = i + 1; j < R; ++j) lw -= log_pow_diff(alpha, n[j], n[i]);
      if (lw >= std::log(std::numeric_limits<double>::max()))
        throw std::overflow_error("weights: |w_i| exceeds double range");
      const double sign = ((R - 1 - i) % 2 == 0) ? 1.0 : -1.0;
      wv.w[i] = sign * std::exp(lw);
    }
  }

  wv.wtilde = wtilde(alpha, n);
  return wv;
}

double wtilde(double alpha, const std::vector<std::int64_t>& n) {
  check_refiners(n);
  const int R = static_cast<int>(n.size());
  double logprod = 0.0;
  for (std::int64_t ni : n) logprod += std::log(static_cast<double>(ni));
  const double l = -alpha * logprod;
  if (l <= std::log(std::numeric_limits<double>::min()))
    throw std::overflow_error("wtilde: (prod n_i)^alpha exceeds double range");
  const double sign = ((R - 1) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(l);
}

std::vector<double> cumulative_weights(const WeightVector& w) {
  std::vector<double> W(w.w.size());
  double acc = 0.0;
  for (int j = static_cast<int>(w.w.size()) - 1; j >= 0; --j) {
    acc += w.w[j];
    W[j] = acc;
  }
  if (!W.empty()) W[0] = 1.0;  // exact by the first Vandermonde row
  return W;
}

std::vector<double> c1_zero_weights(const std::vector<double>& w_prev,
                                    double alpha,
                                    const std::vector<std::int64_t>& n_prev) {
  if (w_prev.size() != n_prev.size())
    throw std::invalid_argument("c1_zero_weights: size mismatch");
  check_refiners(n_prev);
  std::vector<double> scaled(w_prev.size());
  double denom = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < w_prev.size(); ++r) {
    scaled[r] = std::pow(static_cast<double>(n_prev[r]), alpha) * w_prev[r];
    denom += scaled[r];
    scale += std::fabs(scaled[r]);
  }
  if (std::fabs(denom) < 1e-14 * scale || denom == 0.0)
    throw std::domain_error("c1_zero_weights: degenerate configuration, denominator ~ 0");
  for (double& v : scaled) v /= denom;
  return scaled;
}

void write_weight_table_csv(std::ostream& os,
                            const std::vector<double>& alphas,
                            const std::vector<int>& Ms,
                            const std::vector<int>& Rs) {
  os << "alpha,M,R,i,w_i,W_i\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (double a : alphas)
    for (int M : Ms)
      for (int R : Rs) {
        const auto n = refiners(RefinerScheme::geometric(M, R));
        const auto wv = solve_weights(a, n);
        const auto W = cumulative_weights(wv);
        for (int i = 0; i < R; ++i) {
          os << a << ',' << M << ',' << R << ',' << (i + 1) << ',';
          put(wv.w[i]);
          os << ',';
          put(W[i]);
          os << '\n';
        }
      }
}

}  // namespace mlrr
