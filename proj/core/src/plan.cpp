#include "mlrr/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlrr/bounds.hpp"
#include "mlrr/refiners.hpp"

namespace mlrr {

namespace {

constexpr double kQFloor = 1e-12;

double half_pow(double n, double e) { return std::pow(n, e); }

// Per-sample cost units of column j of the allocation matrix, times h:
// sum_i n_i 1{T_i^j != 0} (sum regime) or max_i (max regime).
double column_cost(const AllocationMatrix& a, const std::vector<std::int64_t>& n,
                   CostRegime regime, int j) {
  double c = 0.0;
  for (int i = 0; i < a.R; ++i) {
    if (a.col[j][i] == 0.0) continue;
    const double ni = static_cast<double>(n[i]);
    if (regime == CostRegime::sum)
      c += ni;
    else
      c = std::max(c, ni);
  }
  return c;
}

double alloc_denominator(const AllocationMatrix& a, const std::vector<std::int64_t>& n,
                         const std::vector<double>& q, CostRegime regime) {
  double d = 0.0;
  for (int j = 0; j < a.R; ++j) d += q[j] * column_cost(a, n, regime, j);
  return d;
}

struct PipelineOut {
  int R;
  std::int64_t n_h;
  double h;
  double h_star;
  std::vector<double> q;
  double N_real;
  std::int64_t N;
  double denom;
  double cost;       // discretized-h cost
  double cost_cont;  // continuous-h cost
  bool degenerate;
  WeightVector wv;
  std::vector<double> W;
};

// q*, S and the cost denominator at a given h for the telescopic templates.
struct QOut {
  std::vector<double> q;
  double S;
  double denom;
};

QOut q_s_denom(EstimatorKind kind, const StructuralParams& p,
               const std::vector<std::int64_t>& n, const std::vector<double>* W,
               double h, CostRegime regime) {
  const int R = static_cast<int>(n.size());
  const double th = p.theta() * half_pow(h, p.beta / 2.0);
  QOut o;
  o.q.resize(R);
  o.q[0] = 1.0 + th;
  o.S = 1.0;  // j = 1 term with the convention n_0 = n_0^{-1} = 0
  for (int j = 2; j <= R; ++j) {
    const double nc = static_cast<double>(n[j - 2]);
    const double nf = static_cast<double>(n[j - 1]);
    const double wj = (kind == EstimatorKind::ml2r && W) ? std::fabs((*W)[j - 1]) : 1.0;
    const double num = half_pow(nc, -p.beta / 2.0) + half_pow(nf, -p.beta / 2.0);
    o.q[j - 1] = th * wj * num / std::sqrt(nc + nf);
    o.S += wj * num * std::sqrt(nc + nf);
  }
  double sum = 0.0;
  for (double& v : o.q) {
    v = std::max(v, kQFloor);
    sum += v;
  }
  for (double& v : o.q) v /= sum;
  o.denom = 0.0;
  for (int j = 1; j <= R; ++j) {
    const double cj = (regime == CostRegime::sum)
                          ? ((j == 1) ? 1.0
                                      : static_cast<double>(n[j - 2] + n[j - 1]))
                          : static_cast<double>(n[j - 1]);
    o.denom += o.q[j - 1] * cj;
  }
  return o;
}

// The full Tables-1/2 pipeline for a fixed geometric root M.
PipelineOut pipeline(EstimatorKind kind, double epsilon, const StructuralParams& p,
                     int M, CostRegime regime, Rounding rounding,
                     const PlanOverrides& ov, bool continuous_h) {
  PipelineOut o;
  o.degenerate = false;
  o.R = ov.R ? *ov.R
             : optimal_R(kind, epsilon, p, M, rounding, &o.degenerate);

  const auto n = refiners(RefinerScheme::geometric(M, o.R));
  if (kind == EstimatorKind::ml2r) {
    o.wv = solve_weights(p.alpha, n);
    o.W = cumulative_weights(o.wv);
  }
  const std::vector<double>* Wp = o.W.empty() ? nullptr : &o.W;

  const HChoice hc = optimal_h(kind, epsilon, p, o.R, M);
  o.h_star = hc.h_star;
  if (ov.n_h) {
    o.n_h = *ov.n_h;
    o.h = p.h_max / static_cast<double>(o.n_h);
  } else if (continuous_h) {
    o.n_h = 0;  // not on the grid
    o.h = std::min(hc.h_star, p.h_max);
  } else {
    o.n_h = hc.n_h;
    o.h = hc.h;
  }

  QOut qo = q_s_denom(kind, p, n, Wp, o.h, regime);
  if (ov.q) {
    if (static_cast<int>(ov.q->size()) != o.R)
      throw std::invalid_argument("make_plan: q override size mismatch");
    qo.q = *ov.q;
    qo.denom = 0.0;
    for (int j = 1; j <= o.R; ++j) {
      const double cj = (regime == CostRegime::sum)
                            ? ((j == 1) ? 1.0
                                        : static_cast<double>(n[j - 2] + n[j - 1]))
                            : static_cast<double>(n[j - 1]);
      qo.denom += qo.q[j - 1] * cj;
    }
  }
  o.q = qo.q;
  o.denom = qo.denom;

  const double invfac = (kind == EstimatorKind::ml2r)
                            ? 1.0 / (2.0 * p.alpha * o.R)
                            : 1.0 / (2.0 * p.alpha);
  const double th = p.theta() * half_pow(o.h, p.beta / 2.0);
  o.N_real = (1.0 + invfac) * p.var_Y0 * (1.0 + th * qo.S) * (1.0 + th * qo.S) /
             (epsilon * epsilon * qo.denom);
  o.N = ov.N ? *ov.N : static_cast<std::int64_t>(std::ceil(o.N_real));
  o.cost = static_cast<double>(o.N) * qo.denom / o.h;
  o.cost_cont = o.N_real * qo.denom / o.h;
  return o;
}

}  // namespace

std::vector<double> Plan::level_refiners_real() const {
  std::vector<double> out;
  if (kind == EstimatorKind::crude) return {1.0};
  for (std::int64_t v : weights.refiners.empty()
                            ? refiners(RefinerScheme::geometric(M, R))
                            : weights.refiners)
    out.push_back(static_cast<double>(v));
  return out;
}

std::vector<double> optimal_q(EstimatorKind kind, const StructuralParams& p,
                              const std::vector<std::int64_t>& n,
                              const std::vector<double>* W, double h) {
  if (n.empty()) throw std::invalid_argument("optimal_q: empty refiners");
  if (kind == EstimatorKind::crude || kind == EstimatorKind::multistep) {
    std::vector<double> q(n.size(), 0.0);
    q[0] = 1.0;
    return q;
  }
  return q_s_denom(kind, p, n, W, h, CostRegime::sum).q;
}

double optimal_R_continuous(EstimatorKind kind, double epsilon,
                            const StructuralParams& p, int M) {
  const double lm = std::log(static_cast<double>(M));
  if (kind == EstimatorKind::mlmc) {
    const double A = std::sqrt(1.0 + 2.0 * p.alpha);
    return 1.0 + std::log(std::pow(std::fabs(p.c1), 1.0 / p.alpha) * p.h_max) / lm +
           std::log(A / epsilon) / (p.alpha * lm);
  }
  const double A = std::sqrt(1.0 + 4.0 * p.alpha);
  const double x = 0.5 + std::log(std::pow(p.c_tilde, 1.0 / p.alpha) * p.h_max) / lm;
  const double disc = x * x + 2.0 * std::log(A / epsilon) / (p.alpha * lm);
  return x + std::sqrt(std::max(disc, 0.0));
}

int optimal_R(EstimatorKind kind, double epsilon, const StructuralParams& p,
              int M, Rounding rounding, bool* degenerate) {
  if (!(epsilon > 0)) throw std::invalid_argument("optimal_R: epsilon must be > 0");
  if (M < 2) throw std::invalid_argument("optimal_R: M must be >= 2");
  const double A = (kind == EstimatorKind::mlmc) ? std::sqrt(1.0 + 2.0 * p.alpha)
                                                 : std::sqrt(1.0 + 4.0 * p.alpha);
  if (degenerate) *degenerate = false;
  if (epsilon >= A) {
    if (degenerate) *degenerate = true;
    return 2;
  }
  const double Rp = optimal_R_continuous(kind, epsilon, p, M);
  long r = 0;
  switch (rounding) {
    case Rounding::floor: r = static_cast<long>(std::floor(Rp)); break;
    case Rounding::nearest: r = std::lround(Rp); break;
    case Rounding::ceil: r = static_cast<long>(std::ceil(Rp)); break;
  }
  return static_cast<int>(std::max(2L, r));
}

HChoice optimal_h(EstimatorKind kind, double epsilon, const StructuralParams& p,
                  int R, int M) {
  double h_star;
  if (kind == EstimatorKind::mlmc) {
    h_star = std::pow(1.0 + 2.0 * p.alpha, -1.0 / (2.0 * p.alpha)) *
             std::pow(epsilon / std::fabs(p.c1), 1.0 / p.alpha) *
             std::pow(static_cast<double>(M), static_cast<double>(R - 1));
  } else {
    const double aR = p.alpha * R;
    const double cR = std::pow(p.c_tilde, R);
    h_star = std::pow(1.0 + 2.0 * aR, -1.0 / (2.0 * aR)) *
             std::pow(epsilon / cR, 1.0 / aR) *
             std::pow(static_cast<double>(M), (R - 1) / 2.0);
  }
  HChoice hc;
  hc.h_star = h_star;
  hc.n_h = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(p.h_max / h_star - 1e-12)));
  hc.h = p.h_max / static_cast<double>(hc.n_h);
  return hc;
}

NChoice optimal_N(EstimatorKind kind, double epsilon, const StructuralParams& p,
                  const std::vector<std::int64_t>& n, double h,
                  const std::vector<double>& q, const std::vector<double>* W,
                  CostRegime regime) {
  const int R = static_cast<int>(n.size());
  QOut qo = q_s_denom(kind, p, n, W, h, regime);
  qo.q = q;
  double denom = 0.0;
  for (int j = 1; j <= R; ++j) {
    const double cj = (regime == CostRegime::sum)
                          ? ((j == 1) ? 1.0 : static_cast<double>(n[j - 2] + n[j - 1]))
                          : static_cast<double>(n[j - 1]);
    denom += q[j - 1] * cj;
  }
  const double invfac = (kind == EstimatorKind::ml2r) ? 1.0 / (2.0 * p.alpha * R)
                                                      : 1.0 / (2.0 * p.alpha);
  const double th = p.theta() * std::pow(h, p.beta / 2.0);
  const double Nr = (1.0 + invfac) * p.var_Y0 * (1.0 + th * qo.S) * (1.0 + th * qo.S) /
                    (epsilon * epsilon * denom);
  NChoice out;
  out.N = static_cast<std::int64_t>(std::ceil(Nr));
  out.denom = denom;
  out.cost = static_cast<double>(out.N) * denom / h;
  return out;
}

int choose_M(EstimatorKind kind, double epsilon, const StructuralParams& p,
             CostRegime regime, int M_max, Rounding rounding) {
  if (M_max < 2) throw std::invalid_argument("choose_M: M_max must be >= 2");
  int best_M = 2;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int M = 2; M <= M_max; ++M) {
    const PipelineOut o =
        pipeline(kind, epsilon, p, M, regime, rounding, {}, /*continuous_h=*/false);
    if (o.cost < best_cost) {  // strict: ties keep the smaller M
      best_cost = o.cost;
      best_M = M;
    }
  }
  return best_M;
}

Plan make_plan(EstimatorKind kind, double epsilon, const StructuralParams& p,
               CostRegime regime, Rounding rounding, const PlanOverrides& ov,
               int M_max) {
  if (!(epsilon > 0)) throw std::invalid_argument("make_plan: epsilon must be > 0");
  if (kind == EstimatorKind::crude) return crude_plan(epsilon, p);

  Plan plan;
  plan.kind = kind;
  plan.params = p;
  plan.epsilon = epsilon;
  plan.regime = regime;
  plan.rounding = rounding;
  if (kind == EstimatorKind::multistep) {
    // The multistep estimator is not stratified, so the M-search minimizes
    // its own (single-stratum) cost rather than the multilevel pipeline's.
    Plan best;
    double best_cost = std::numeric_limits<double>::infinity();
    const int M_lo = ov.M ? *ov.M : 2;
    const int M_hi = ov.M ? *ov.M : M_max;
    for (int M = M_lo; M <= M_hi; ++M) {
      bool degen = false;
      const int R = ov.R ? *ov.R
                         : optimal_R(EstimatorKind::ml2r, epsilon, p, M,
                                     rounding, &degen);
      Plan ms = multistep_plan(epsilon, p,
                               refiners(RefinerScheme::geometric(M, R)));
      ms.M = M;
      ms.rounding = rounding;
      ms.regime = regime;
      ms.degenerate_R = degen;
      if (ms.predicted_cost < best_cost) {
        best_cost = ms.predicted_cost;
        best = ms;
      }
    }
    return best;
  }

  plan.M = ov.M ? *ov.M : choose_M(kind, epsilon, p, regime, M_max, rounding);

  const PipelineOut o =
      pipeline(kind, epsilon, p, plan.M, regime, rounding, ov, false);
  plan.R = o.R;
  plan.n_h = o.n_h;
  plan.h = o.h;
  plan.q = o.q;
  plan.N = o.N;
  plan.degenerate_R = o.degenerate;
  plan.predicted_cost = static_cast<double>(o.N) * o.denom / o.h;
  if (kind == EstimatorKind::ml2r) {
    plan.weights = o.wv;
    plan.alloc = allocation_matrix(AllocTemplate::ml2r_telescopic, plan.R, &plan.weights);
  } else {
    plan.alloc = allocation_matrix(AllocTemplate::mlmc, plan.R);
  }
  return plan;
}

Plan crude_plan(double epsilon, const StructuralParams& p) {
  if (p.c1 == 0.0)
    throw std::invalid_argument(
        "crude_plan: c1 = 0; supply the first nonzero order instead");
  Plan plan;
  plan.kind = EstimatorKind::crude;
  plan.params = p;
  plan.epsilon = epsilon;
  plan.M = 1;
  plan.R = 1;
  const double h_star = std::pow(1.0 + 2.0 * p.alpha, -1.0 / (2.0 * p.alpha)) *
                        std::pow(epsilon / std::fabs(p.c1), 1.0 / p.alpha);
  plan.n_h = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(p.h_max / h_star - 1e-12)));
  plan.h = p.h_max / static_cast<double>(plan.n_h);
  plan.q = {1.0};
  const double th = p.theta() * std::pow(plan.h, p.beta / 2.0);
  const double Nr = (1.0 + 1.0 / (2.0 * p.alpha)) * p.var_Y0 * (1.0 + th) * (1.0 + th) /
                    (epsilon * epsilon);
  plan.N = static_cast<std::int64_t>(std::ceil(Nr));
  plan.alloc = allocation_matrix(AllocTemplate::crude, 1);
  plan.predicted_cost = static_cast<double>(plan.N) / plan.h;
  return plan;
}

Plan multistep_plan(double epsilon, const StructuralParams& p,
                    const std::vector<std::int64_t>& n) {
  const int R = static_cast<int>(n.size());
  const double cR = std::pow(p.c_tilde, R);
  if (cR == 0.0)
    throw std::invalid_argument("multistep_plan: c_tilde^R vanishes");
  Plan plan;
  plan.kind = EstimatorKind::multistep;
  plan.params = p;
  plan.epsilon = epsilon;
  plan.R = R;
  plan.M = 1;
  plan.weights = solve_weights(p.alpha, n);
  const double aR = p.alpha * R;
  double nfact = 1.0;
  for (std::int64_t v : n) nfact *= static_cast<double>(v);
  const double h_star = std::pow(1.0 + 2.0 * aR, -1.0 / (2.0 * aR)) *
                        std::pow(epsilon / std::fabs(cR), 1.0 / aR) *
                        std::pow(nfact, 1.0 / R);
  plan.n_h = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(p.h_max / h_star - 1e-12)));
  plan.h = p.h_max / static_cast<double>(plan.n_h);
  plan.q.assign(R, 0.0);
  plan.q[0] = 1.0;
  const double th = p.theta() * std::pow(plan.h, p.beta / 2.0);
  const double Nr = (1.0 + 1.0 / (2.0 * aR)) * p.var_Y0 * (1.0 + th) * (1.0 + th) /
                    (epsilon * epsilon);
  plan.N = static_cast<std::int64_t>(std::ceil(Nr));
  plan.alloc = allocation_matrix(AllocTemplate::multistep, R, &plan.weights);
  double unit = 0.0;
  for (std::int64_t v : n) unit += static_cast<double>(v);
  plan.predicted_cost = static_cast<double>(plan.N) * unit / plan.h;
  return plan;
}

double plan_cost_continuous(EstimatorKind kind, double epsilon,
                            const StructuralParams& p, CostRegime regime,
                            Rounding rounding, int M_max) {
  double best = std::numeric_limits<double>::infinity();
  for (int M = 2; M <= M_max; ++M) {
    const PipelineOut o =
        pipeline(kind, epsilon, p, M, regime, rounding, {}, /*continuous_h=*/true);
    best = std::min(best, o.cost_cont);
  }
  return best;
}

CostCurve theoretical_cost_curve(EstimatorKind kind, const StructuralParams& p,
                                 int M) {
  if (M < 2) throw std::invalid_argument("theoretical_cost_curve: M must be >= 2");
  if (!(p.beta > 0)) throw std::invalid_argument("theoretical_cost_curve: beta must be > 0");
  const double a = p.alpha, b = p.beta, Md = static_cast<double>(M);
  const double lm = std::log(Md);
  const double Wa = w_alpha_bound(a, M);
  const double theta = p.theta();
  const double h = p.h_max;

  CostCurve c;
  if (kind == EstimatorKind::ml2r) {
    if (b == 1.0) {
      c.v = [](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        return e * e / std::log(1.0 / e);
      };
      c.K = 2.0 * p.V1 / a * (Wa * Md * (1.0 + Md) *
                              std::pow(1.0 + std::pow(Md, -0.5), 2.0) / lm);
    } else if (b > 1.0) {
      c.v = [](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        return e * e;
      };
      const double inner = theta * std::pow(h, b / 2.0) * Wa *
                           std::pow(Md, (b - 1.0) / 2.0) * std::sqrt(1.0 + Md) *
                           (1.0 + std::pow(Md, -b / 2.0)) /
                           (1.0 - std::pow(Md, (1.0 - b) / 2.0));
      c.K = p.var_Y0 * Md / h * (1.0 + inner) * (1.0 + inner);
      const double kappa2 = theta * theta * Wa * Wa * std::pow(Md, b - 1.0) *
                            (1.0 + Md) * (1.0 + std::pow(Md, -b)) /
                            std::pow(1.0 - std::pow(Md, (1.0 - b) / 2.0), 2.0);
      c.chi_opt = std::pow(b, -2.0 / (b + 1.0)) * std::pow(kappa2, -1.0 / (b + 1.0));
      c.K_chi_opt = (b + 1.0) * (b + 1.0) * std::pow(b, -2.0 / (b + 1.0)) *
                    (p.var_Y0 * Md) * std::pow(kappa2, 1.0 / (b + 1.0));
    } else {
      c.v = [a, b, lm](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        return e * e *
               std::exp(-(1.0 - b) / std::sqrt(a) *
                        std::sqrt(2.0 * std::log(1.0 / e) * lm));
      };
      c.K = p.V1 * std::pow(h, 1.0 - b) * std::pow(p.c_tilde, (1.0 - b) / a) *
            (Wa * Wa * Md * (1.0 + Md) * std::pow(1.0 + std::pow(Md, -b / 2.0), 2.0) /
             std::pow(std::pow(Md, (1.0 - b) / 2.0) - 1.0, 2.0));
    }
  } else {
    const double pref = 1.0 + 1.0 / (2.0 * a);
    if (b == 1.0) {
      c.v = [](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        const double l = std::log(1.0 / e);
        return e * e / (l * l);
      };
      c.K = pref * p.V1 / (a * a) *
            (Md * (1.0 + Md) * std::pow(1.0 + std::pow(Md, -0.5), 2.0) / (lm * lm));
    } else if (b > 1.0) {
      c.v = [](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        return e * e;
      };
      const double inner = theta * std::pow(h, b / 2.0) *
                           std::pow(Md, (b - 1.0) / 2.0) * std::sqrt(1.0 + Md) *
                           (1.0 + std::pow(Md, -b / 2.0)) /
                           (1.0 - std::pow(Md, (1.0 - b) / 2.0));
      c.K = pref * p.var_Y0 * Md / h * (1.0 + inner) * (1.0 + inner);
      const double kappa2 = theta * theta * std::pow(Md, b - 1.0) * (1.0 + Md) *
                            (1.0 + std::pow(Md, -b)) /
                            std::pow(1.0 - std::pow(Md, (1.0 - b) / 2.0), 2.0);
      c.chi_opt = std::pow(b, -2.0 / (b + 1.0)) * std::pow(kappa2, -1.0 / (b + 1.0));
      c.K_chi_opt = (b + 1.0) * (b + 1.0) * std::pow(b, -2.0 / (b + 1.0)) *
                    (p.var_Y0 * Md) * std::pow(kappa2, 1.0 / (b + 1.0));
    } else {
      c.v = [a, b](double e) {
        if (e >= 1.0) throw std::domain_error("v: epsilon must be < 1");
        return std::pow(e, 2.0 + (1.0 - b) / a);
      };
      c.K = std::pow(1.0 + 2.0 * a, 1.0 + (1.0 - b) / (2.0 * a)) / (2.0 * a) * p.V1 *
            std::pow(h, 1.0 - b) * std::pow(std::fabs(p.c1), (1.0 - b) / a) *
            (Md * (1.0 + Md) * std::pow(1.0 + std::pow(Md, -b / 2.0), 2.0) /
             std::pow(std::pow(Md, (1.0 - b) / 2.0) - 1.0, 2.0));
    }
  }
  return c;
}

}  // namespace mlrr
