#include "mlrr/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlrr {

namespace {

std::int64_t int_ratio(double num, double den, const char* what) {
  const double q = num / den;
  const std::int64_t m = static_cast<std::int64_t>(std::llround(q));
  if (m < 1 || std::fabs(q - static_cast<double>(m)) > 1e-9 * std::max(1.0, q))
    throw std::invalid_argument(std::string(what) + ": ratio is not a positive integer");
  return m;
}

class GbmEulerSampler final : public LevelSampler {
 public:
  GbmEulerSampler(const GBMParams& gbm, const Payoff& payoff)
      : gbm_(gbm), payoff_(payoff) {
    if (!(gbm.s0 > 0) || !(gbm.T > 0) || gbm.sigma < 0)
      throw std::invalid_argument("gbm_euler_sampler: invalid GBM parameters");
    switch (payoff.kind) {
      case Payoff::Kind::call:
        // K = 0 is allowed: the payoff degenerates to the discounted asset.
        if (!(payoff.K >= 0)) throw std::invalid_argument("call: strike must be >= 0");
        break;
      case Payoff::Kind::lookback:
        if (payoff.lambda < 1.0) throw std::invalid_argument("lookback: lambda must be >= 1");
        break;
      case Payoff::Kind::barrier:
        if (!(payoff.B > payoff.K)) throw std::invalid_argument("barrier: need B > K");
        break;
    }
  }

  double sample_base(double h, RngStream& g) const override {
    const std::int64_t m = int_ratio(gbm_.T, h, "gbm sample_base");
    const double dt = gbm_.T / static_cast<double>(m);
    const double sdt = std::sqrt(dt);
    double s = gbm_.s0, lo = gbm_.s0, hi = gbm_.s0;
    for (std::int64_t k = 0; k < m; ++k) {
      s += s * (gbm_.r * dt + gbm_.sigma * sdt * g.normal());
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return payout(s, lo, hi);
  }

  std::pair<double, double> sample_pair(double h, std::int64_t nc, std::int64_t nf,
                                        RngStream& g) const override {
    const std::int64_t m0 = int_ratio(gbm_.T, h, "gbm sample_pair");
    const std::int64_t ratio = int_ratio(static_cast<double>(nf),
                                         static_cast<double>(nc), "gbm sample_pair");
    const std::int64_t coarse_steps = m0 * nc;
    const double dtf = gbm_.T / static_cast<double>(m0 * nf);
    const double dtc = dtf * static_cast<double>(ratio);
    const double sdtf = std::sqrt(dtf);
    double sf = gbm_.s0, lof = gbm_.s0, hif = gbm_.s0;
    double sc = gbm_.s0, loc = gbm_.s0, hic = gbm_.s0;
    for (std::int64_t cs = 0; cs < coarse_steps; ++cs) {
      double dw_sum = 0.0;
      for (std::int64_t i = 0; i < ratio; ++i) {
        const double dw = sdtf * g.normal();
        dw_sum += dw;
        sf += sf * (gbm_.r * dtf + gbm_.sigma * dw);
        lof = std::min(lof, sf);
        hif = std::max(hif, sf);
      }
      sc += sc * (gbm_.r * dtc + gbm_.sigma * dw_sum);
      loc = std::min(loc, sc);
      hic = std::max(hic, sc);
    }
    return {payout(sc, loc, hic), payout(sf, lof, hif)};
  }

  void sample_joint(double h, const std::vector<std::int64_t>& n, RngStream& g,
                    std::vector<double>& out) const override {
    const std::int64_t m0 = int_ratio(gbm_.T, h, "gbm sample_joint");
    const std::size_t R = n.size();
    const std::int64_t nR = n.back();
    const double dtf = gbm_.T / static_cast<double>(m0 * nR);
    const double sdtf = std::sqrt(dtf);
    std::vector<std::int64_t> stride(R);
    for (std::size_t i = 0; i < R; ++i)
      stride[i] = int_ratio(static_cast<double>(nR), static_cast<double>(n[i]),
                            "gbm sample_joint");
    std::vector<double> s(R, gbm_.s0), lo(R, gbm_.s0), hi(R, gbm_.s0), acc(R, 0.0);
    const std::int64_t fine_steps = m0 * nR;
    for (std::int64_t k = 1; k <= fine_steps; ++k) {
      const double dw = sdtf * g.normal();
      for (std::size_t i = 0; i < R; ++i) {
        acc[i] += dw;
        if (k % stride[i] == 0) {
          const double dt_i = dtf * static_cast<double>(stride[i]);
          s[i] += s[i] * (gbm_.r * dt_i + gbm_.sigma * acc[i]);
          lo[i] = std::min(lo[i], s[i]);
          hi[i] = std::max(hi[i], s[i]);
          acc[i] = 0.0;
        }
      }
    }
    out.resize(R);
    for (std::size_t i = 0; i < R; ++i) out[i] = payout(s[i], lo[i], hi[i]);
  }

 private:
  double payout(double terminal, double pathmin, double pathmax) const {
    const double disc = std::exp(-gbm_.r * gbm_.T);
    switch (payoff_.kind) {
      case Payoff::Kind::call:
        return disc * std::max(terminal - payoff_.K, 0.0);
      case Payoff::Kind::lookback:
        return disc * std::max(terminal - payoff_.lambda * pathmin, 0.0);
      case Payoff::Kind::barrier:
        return (pathmax <= payoff_.B) ? disc * std::max(terminal - payoff_.K, 0.0)
                                      : 0.0;
    }
    return 0.0;
  }

  GBMParams gbm_;
  Payoff payoff_;
};

class NestedSampler final : public LevelSampler {
 public:
  explicit NestedSampler(const NestedParams& p) : p_(p) {
    if (!(p.T1 > 0) || !(p.T1 < p.T2))
      throw std::invalid_argument("nested_sampler: need 0 < T1 < T2");
  }

  double sample_base(double h, RngStream& g) const override {
    const std::int64_t K = int_ratio(1.0, h, "nested sample_base");
    const double st1 = outer(g);
    double sum = 0.0;
    for (std::int64_t k = 0; k < K; ++k) sum += inner_payoff(st1, g);
    return wrap(sum / static_cast<double>(K));
  }

  std::pair<double, double> sample_pair(double h, std::int64_t nc, std::int64_t nf,
                                        RngStream& g) const override {
    const std::int64_t K0 = int_ratio(1.0, h, "nested sample_pair");
    int_ratio(static_cast<double>(nf), static_cast<double>(nc), "nested sample_pair");
    const std::int64_t Kc = nc * K0, Kf = nf * K0;
    const double st1 = outer(g);
    double sum = 0.0, sum_coarse = 0.0;
    for (std::int64_t k = 0; k < Kf; ++k) {
      sum += inner_payoff(st1, g);
      if (k + 1 == Kc) sum_coarse = sum;  // coarse level reuses the first Kc draws
    }
    return {wrap(sum_coarse / static_cast<double>(Kc)),
            wrap(sum / static_cast<double>(Kf))};
  }

  void sample_joint(double h, const std::vector<std::int64_t>& n, RngStream& g,
                    std::vector<double>& out) const override {
    const std::int64_t K0 = int_ratio(1.0, h, "nested sample_joint");
    const double st1 = outer(g);
    const std::int64_t Kmax = n.back() * K0;
    out.assign(n.size(), 0.0);
    double sum = 0.0;
    std::size_t next = 0;
    for (std::int64_t k = 1; k <= Kmax; ++k) {
      sum += inner_payoff(st1, g);
      while (next < n.size() && k == n[next] * K0) {
        out[next] = wrap(sum / static_cast<double>(k));
        ++next;
      }
    }
  }

  CostRegime preferred_regime() const override { return CostRegime::max; }

 private:
  double outer(RngStream& g) const {
    const double z = g.normal();
    return p_.gbm.s0 * std::exp((p_.gbm.r - 0.5 * p_.gbm.sigma * p_.gbm.sigma) * p_.T1 +
                                p_.gbm.sigma * std::sqrt(p_.T1) * z);
  }
  double inner_payoff(double st1, RngStream& g) const {
    const double tau = p_.T2 - p_.T1;
    const double z = g.normal();
    const double st2 =
        st1 * std::exp((p_.gbm.r - 0.5 * p_.gbm.sigma * p_.gbm.sigma) * tau +
                       p_.gbm.sigma * std::sqrt(tau) * z);
    return std::max(st2 - p_.K2, 0.0);
  }
  double wrap(double inner_mean) const {
    const double tau = p_.T2 - p_.T1;
    return std::exp(-p_.gbm.r * p_.T1) *
           std::max(p_.K1 - std::exp(-p_.gbm.r * tau) * inner_mean, 0.0);
  }

  NestedParams p_;
};

class SyntheticSampler final : public LevelSampler {
 public:
  explicit SyntheticSampler(const SyntheticParams& p) : p_(p) {
    if (p.y0_std < 0 || p.V1 < 0)
      throw std::invalid_argument("synthetic_sampler: negative spread");
  }

  double sample_base(double h, RngStream& g) const override {
    const double y0 = p_.y0_mean + p_.y0_std * g.normal();
    return y0 + drift(h) + noise_scale(h) * g.normal();
  }

  std::pair<double, double> sample_pair(double h, std::int64_t nc, std::int64_t nf,
                                        RngStream& g) const override {
    const double y0 = p_.y0_mean + p_.y0_std * g.normal();
    const double hc = h / static_cast<double>(nc);
    const double hf = h / static_cast<double>(nf);
    double xic, xif;
    switch (p_.coupling) {
      case SyntheticParams::Coupling::anti:
        xic = g.normal();
        xif = -xic;
        break;
      case SyntheticParams::Coupling::identical:
        xic = xif = g.normal();
        break;
      case SyntheticParams::Coupling::fresh:
      default:
        xic = g.normal();
        xif = g.normal();
        break;
    }
    return {y0 + drift(hc) + noise_scale(hc) * xic,
            y0 + drift(hf) + noise_scale(hf) * xif};
  }

  void sample_joint(double h, const std::vector<std::int64_t>& n, RngStream& g,
                    std::vector<double>& out) const override {
    const double y0 = p_.y0_mean + p_.y0_std * g.normal();
    out.resize(n.size());
    double xi_shared = 0.0;
    if (p_.coupling != SyntheticParams::Coupling::fresh) xi_shared = g.normal();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double hi = h / static_cast<double>(n[i]);
      double xi;
      switch (p_.coupling) {
        case SyntheticParams::Coupling::anti:
          xi = (i % 2 == 0) ? xi_shared : -xi_shared;  // alternating, coarse first
          break;
        case SyntheticParams::Coupling::identical:
          xi = xi_shared;
          break;
        case SyntheticParams::Coupling::fresh:
        default:
          xi = g.normal();
          break;
      }
      out[i] = y0 + drift(hi) + noise_scale(hi) * xi;
    }
  }

 private:
  double drift(double h) const {
    double s = 0.0;
    for (std::size_t k = 0; k < p_.coeffs.size(); ++k)
      s += p_.coeffs[k] * std::pow(h, p_.alpha * static_cast<double>(k + 1));
    return s;
  }
  double noise_scale(double h) const {
    return std::sqrt(p_.V1) * std::pow(h, p_.beta / 2.0);
  }

  SyntheticParams p_;
};

}  // namespace

Payoff Payoff::call(double K) {
  Payoff p;
  p.kind = Kind::call;
  p.K = K;
  return p;
}

Payoff Payoff::lookback(double lambda) {
  Payoff p;
  p.kind = Kind::lookback;
  p.lambda = lambda;
  return p;
}

Payoff Payoff::barrier(double K, double B) {
  Payoff p;
  p.kind = Kind::barrier;
  p.K = K;
  p.B = B;
  return p;
}

std::unique_ptr<LevelSampler> gbm_euler_sampler(const GBMParams& gbm,
                                                const Payoff& payoff) {
  return std::make_unique<GbmEulerSampler>(gbm, payoff);
}

std::unique_ptr<LevelSampler> nested_sampler(const NestedParams& p) {
  return std::make_unique<NestedSampler>(p);
}

std::unique_ptr<LevelSampler> synthetic_sampler(const SyntheticParams& p) {
  return std::make_unique<SyntheticSampler>(p);
}

double synthetic_mean(const SyntheticParams& p, double h) {
  double s = p.y0_mean;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k)
    s += p.coeffs[k] * std::pow(h, p.alpha * static_cast<double>(k + 1));
  return s;
}

double bs_call_price(const GBMParams& gbm, double K) {
  if (!(K > 0)) throw std::invalid_argument("bs_call_price: strike must be > 0");
  const double disc = std::exp(-gbm.r * gbm.T);
  if (gbm.sigma <= 0.0 || gbm.T <= 0.0)
    return std::max(gbm.s0 - K * disc, 0.0);
  const double sq = gbm.sigma * std::sqrt(gbm.T);
  const double d1 =
      (std::log(gbm.s0 / K) + (gbm.r + 0.5 * gbm.sigma * gbm.sigma) * gbm.T) / sq;
  const double d2 = d1 - sq;
  return gbm.s0 * normal_cdf(d1) - K * disc * normal_cdf(d2);
}

double reference_price(const std::string& model_id) {
  if (model_id == "call") return 29.4987;
  if (model_id == "lookback") return 8.89343;
  if (model_id == "barrier") return 1.855225;
  // Quadrature oracle under the frozen discounting convention above:
  // closed-form inner price, outer 1-D Gauss integral.
  if (model_id == "nested") return 0.752827598407918;
  throw std::invalid_argument("reference_price: unknown model '" + model_id + "'");
}

}  // namespace mlrr
