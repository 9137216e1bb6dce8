#pragma once

#include <array>
#include <cstdint>

namespace mlrr {

// Philox4x32-10 counter-based generator.  Every draw is a pure function of
// (seed, replication, level, sample, dimension), which makes parallel
// execution deterministic regardless of scheduling: the "independent copies"
// across levels and replications are independent streams by construction.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);
};

// One stream per (seed, replication, level, sample).  Gaussians come from
// the inverse normal CDF applied to the uniform stream, so a single stream
// index maps to a single increment.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint32_t replication, std::uint32_t level,
            std::uint64_t sample);

  double uniform();  // in (0, 1)
  double normal();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t salt_;
  std::uint64_t sample_;
  std::uint32_t block_ = 0;
  int buffered_ = 0;
  std::uint64_t buf_[2];
};

// AS241 (PPND16) inverse of the standard normal CDF, |error| < 1e-15 over
// the full double range of p in (0, 1).
double inverse_normal_cdf(double p);

// Standard normal CDF via erfc (used by the closed-form prices and tests).
double normal_cdf(double x);

}  // namespace mlrr
