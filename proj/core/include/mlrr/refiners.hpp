#pragma once

#include <cstdint>
#include <vector>

namespace mlrr {

// Refiners n_1 = 1 < n_2 < ... < n_R: the per-level step divisors.  The
// geometric family n_i = M^(i-1) is the default everywhere downstream;
// consecutive (n_i = i) and explicit lists are supported for the multistep
// estimator and for experimentation.
enum class RefinerKind { consecutive, geometric, explicit_list };

struct RefinerScheme {
  RefinerKind kind = RefinerKind::geometric;
  int R = 1;
  int M = 2;                           // geometric root, ignored otherwise
  std::vector<std::int64_t> levels;    // explicit_list only

  static RefinerScheme consecutive(int R);
  static RefinerScheme geometric(int M, int R);
  static RefinerScheme explicit_levels(std::vector<std::int64_t> n);
};

// Generate and validate the refiner list.  Throws std::invalid_argument on
// M < 2, R < 1, or an explicit list that is not strictly increasing from 1,
// and std::overflow_error if M^(R-1) exceeds the int64 range.
std::vector<std::int64_t> refiners(const RefinerScheme& s);

}  // namespace mlrr
