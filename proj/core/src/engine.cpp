#include "mlrr/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mlrr/refiners.hpp"

namespace mlrr {

namespace {

constexpr std::int64_t kBlock = 8192;

struct BlockSums {
  double sum = 0.0;
  double sumsq = 0.0;
};

// Cost units (times h) of one draw of column j.
double column_cost(const AllocationMatrix& a, const std::vector<std::int64_t>& n,
                   CostRegime regime, int j) {
  double c = 0.0;
  for (int i = 0; i < a.R; ++i) {
    if (a.col[j][i] == 0.0) continue;
    const double ni = static_cast<double>(n[i]);
    c = (regime == CostRegime::sum) ? c + ni : std::max(c, ni);
  }
  return c;
}

// Evaluate per-sample values of column j over [k0, k1) and accumulate.
template <typename Draw>
BlockSums accumulate_range(std::int64_t k0, std::int64_t k1, const Draw& draw) {
  BlockSums s;
  for (std::int64_t k = k0; k < k1; ++k) {
    const double x = draw(k);
    s.sum += x;
    s.sumsq += x * x;
  }
  return s;
}

template <typename Draw>
BlockSums level_sums(std::int64_t Nj, int threads, const Draw& draw) {
  // Always accumulate per fixed-size block and merge in block order, even
  // single-threaded, so the summation order (and hence the result bytes) is
  // identical at every thread count.
  const std::int64_t nblocks = (Nj + kBlock - 1) / kBlock;
  std::vector<BlockSums> blocks(nblocks);
  const int nthreads = static_cast<int>(std::min<std::int64_t>(threads, nblocks));
  if (nthreads <= 1) {
    for (std::int64_t b = 0; b < nblocks; ++b) {
      blocks[b] = accumulate_range(b * kBlock, std::min(Nj, (b + 1) * kBlock), draw);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        const std::int64_t k0 = b * kBlock;
        const std::int64_t k1 = std::min(Nj, k0 + kBlock);
        blocks[b] = accumulate_range(k0, k1, draw);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Merge in block order so the result is independent of scheduling.
  BlockSums total;
  for (const auto& b : blocks) {
    total.sum += b.sum;
    total.sumsq += b.sumsq;
  }
  return total;
}

}  // namespace

RunResult run(const Plan& plan, const LevelSampler& sampler, std::uint64_t seed,
              int threads, std::uint32_t replication) {
  const auto t0 = std::chrono::steady_clock::now();

  const int R = plan.alloc.R;
  const std::vector<std::int64_t> n =
      (plan.kind == EstimatorKind::crude)
          ? std::vector<std::int64_t>{1}
          : (!plan.weights.refiners.empty()
                 ? plan.weights.refiners
                 : refiners(RefinerScheme::geometric(plan.M, R)));
  if (static_cast<int>(plan.q.size()) != R)
    throw std::invalid_argument("run: q size does not match the allocation depth");

  std::vector<double> W(R, 1.0);
  if (plan.kind == EstimatorKind::ml2r) W = cumulative_weights(plan.weights);

  RunResult out;
  out.seed = seed;
  out.N_j.assign(R, 0);

  double estimate = 0.0;
  double nu = 0.0;
  double cost = 0.0;

  std::vector<double> joint;
  for (int j = 0; j < R; ++j) {
    bool active = false;
    for (int i = 0; i < R; ++i) active = active || plan.alloc.col[j][i] != 0.0;
    if (!active) continue;

    std::int64_t Nj = static_cast<std::int64_t>(
        std::ceil(plan.q[j] * static_cast<double>(plan.N)));
    if (Nj < 2) {
      Nj = 2;
      out.promoted_levels = true;
    }
    out.N_j[j] = Nj;

    const std::uint32_t level = static_cast<std::uint32_t>(j + 1);
    BlockSums sums;
    if (plan.alloc.telescopic()) {
      if (j == 0) {
        const double c0 = plan.alloc.col[0][0];
        sums = level_sums(Nj, threads, [&](std::int64_t k) {
          RngStream g(seed, replication, level, static_cast<std::uint64_t>(k));
          return c0 * sampler.sample_base(plan.h, g);
        });
      } else {
        const double wj = W[j];
        const std::int64_t nc = n[j - 1], nf = n[j];
        sums = level_sums(Nj, threads, [&](std::int64_t k) {
          RngStream g(seed, replication, level, static_cast<std::uint64_t>(k));
          const auto [yc, yf] = sampler.sample_pair(plan.h, nc, nf, g);
          return wj * (yf - yc);
        });
      }
    } else {
      const std::vector<double>& colj = plan.alloc.col[j];
      sums = level_sums(Nj, threads, [&](std::int64_t k) {
        RngStream g(seed, replication, level, static_cast<std::uint64_t>(k));
        thread_local std::vector<double> y;
        sampler.sample_joint(plan.h, n, g, y);
        double x = 0.0;
        for (int i = 0; i < R; ++i) x += colj[i] * y[i];
        return x;
      });
    }

    const double mean = sums.sum / static_cast<double>(Nj);
    estimate += mean;
    const double ss = sums.sumsq - static_cast<double>(Nj) * mean * mean;
    nu += std::max(0.0, ss) /
          (static_cast<double>(Nj) * static_cast<double>(Nj - 1));
    cost += static_cast<double>(Nj) *
            column_cost(plan.alloc, n, plan.regime, j) / plan.h *
            sampler.unit_cost_hint(plan.regime);
  }

  out.estimate = estimate;
  out.nu_bar = nu;
  out.cost_units = cost;
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ReplicationStats replicate(const Plan& plan, const LevelSampler& sampler, int L,
                           std::uint64_t base_seed, const double* reference,
                           int threads) {
  if (L < 2) throw std::invalid_argument("replicate: L must be >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  ReplicationStats st;
  st.L = L;
  double sum_est = 0.0, sum_nu = 0.0, sum_cost = 0.0;
  for (int r = 0; r < L; ++r) {
    const RunResult res =
        run(plan, sampler, base_seed, threads, static_cast<std::uint32_t>(r));
    sum_est += res.estimate;
    sum_nu += res.nu_bar;
    sum_cost += res.cost_units;
  }
  st.mean_estimate = sum_est / L;
  st.nu_tilde = sum_nu / L;
  st.mean_cost_units = sum_cost / L;
  if (reference) {
    st.has_reference = true;
    st.mu_tilde = st.mean_estimate - *reference;
  }
  st.eps_tilde = std::sqrt(st.mu_tilde * st.mu_tilde + st.nu_tilde);
  st.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

double estimate_V1(const LevelSampler& sampler, double h, int M_probe,
                   double beta, std::int64_t sample_size, std::uint64_t seed) {
  if (sample_size < 1) throw std::invalid_argument("estimate_V1: empty sample");
  if (M_probe < 2) throw std::invalid_argument("estimate_V1: M_probe must be >= 2");
  double sumsq = 0.0;
  for (std::int64_t k = 0; k < sample_size; ++k) {
    RngStream g(seed, 0, 0, static_cast<std::uint64_t>(k));
    const auto [yc, yf] = sampler.sample_pair(h, 1, M_probe, g);
    const double d = yc - yf;
    sumsq += d * d;
  }
  const double prefactor =
      std::pow(1.0 + std::pow(static_cast<double>(M_probe), -beta / 2.0), -2.0);
  return prefactor * std::pow(h, -beta) * sumsq / static_cast<double>(sample_size);
}

double estimate_var_Y0(const LevelSampler& sampler, double h_fine,
                       std::int64_t sample_size, std::uint64_t seed) {
  if (sample_size < 2) throw std::invalid_argument("estimate_var_Y0: need >= 2 samples");
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t k = 0; k < sample_size; ++k) {
    RngStream g(seed, 1, 0, static_cast<std::uint64_t>(k));
    const double y = sampler.sample_base(h_fine, g);
    sum += y;
    sumsq += y * y;
  }
  const double nd = static_cast<double>(sample_size);
  const double mean = sum / nd;
  return std::max(0.0, (sumsq - nd * mean * mean) / (nd - 1.0));
}

}  // namespace mlrr
