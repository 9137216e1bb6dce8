#include "mlrr/refiners.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace mlrr {

RefinerScheme RefinerScheme::consecutive(int R) {
  RefinerScheme s;
  s.kind = RefinerKind::consecutive;
  s.R = R;
  return s;
}

RefinerScheme RefinerScheme::geometric(int M, int R) {
  RefinerScheme s;
  s.kind = RefinerKind::geometric;
  s.M = M;
  s.R = R;
  return s;
}

RefinerScheme RefinerScheme::explicit_levels(std::vector<std::int64_t> n) {
  RefinerScheme s;
  s.kind = RefinerKind::explicit_list;
  s.R = static_cast<int>(n.size());
  s.levels = std::move(n);
  return s;
}

std::vector<std::int64_t> refiners(const RefinerScheme& s) {
  if (s.R < 1) throw std::invalid_argument("refiners: depth R must be >= 1");
  std::vector<std::int64_t> n;
  switch (s.kind) {
    case RefinerKind::consecutive:
      n.reserve(s.R);
      for (int i = 1; i <= s.R; ++i) n.push_back(i);
      break;
    case RefinerKind::geometric: {
      if (s.M < 2) throw std::invalid_argument("refiners: geometric root M must be >= 2");
      n.reserve(s.R);
      std::int64_t v = 1;
      for (int i = 0; i < s.R; ++i) {
        n.push_back(v);
        if (i + 1 < s.R) {
          if (v > std::numeric_limits<std::int64_t>::max() / s.M)
            throw std::overflow_error("refiners: M^(R-1) overflows int64");
          v *= s.M;
        }
      }
      break;
    }
    case RefinerKind::explicit_list:
      n = s.levels;
      break;
  }
  if (n.empty() || n.front() != 1)
    throw std::invalid_argument("refiners: list must start at n_1 = 1");
  for (std::size_t i = 1; i < n.size(); ++i)
    if (n[i] <= n[i - 1])
      throw std::invalid_argument("refiners: list must be strictly increasing");
  return n;
}

}  // namespace mlrr
