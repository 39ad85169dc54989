#include "combstruct/tv.hpp"

#include <algorithm>
#include <numbers>

namespace combstruct {

TvBracket tv_discrete(const PmfVector& p, const PmfVector& q) {
  const int common = std::min(p.n_max(), q.n_max());
  CompensatedSum body;
  double head_p = 0.0;
  double head_q = 0.0;
  for (int k = 0; k <= common; ++k) {
    body.add(std::fabs(p.at(k) - q.at(k)));
    head_p += p.at(k);
    head_q += q.at(k);
  }
  double rest_p = p.tail;
  double rest_q = q.tail;
  for (int k = common + 1; k <= p.n_max(); ++k) rest_p += p.at(k);
  for (int k = common + 1; k <= q.n_max(); ++k) rest_q += q.at(k);
  const double b = 0.5 * body.value();
  return {std::min(1.0, b + 0.5 * std::fabs(rest_p - rest_q)), std::min(1.0, b + 0.5 * (rest_p + rest_q))};
}

double wasserstein_discrete(const PmfVector& p, const PmfVector& q) {
  const int top = std::max(p.n_max(), q.n_max());
  // P(X >= i) = tail + sum_{k >= i} p_k, accumulated from the top.
  double sp = p.tail;
  double sq = q.tail;
  std::vector<double> diff(static_cast<std::size_t>(top) + 2, 0.0);
  for (int i = top; i >= 1; --i) {
    sp += p.at(i);
    sq += q.at(i);
    diff[static_cast<std::size_t>(i)] = std::fabs(sp - sq);
  }
  CompensatedSum s;
  for (int i = 1; i <= top; ++i) s.add(diff[static_cast<std::size_t>(i)]);
  return s.value();
}

TvReport tv_CB_ZB(const StructureSpec& spec, const IndexSet& B, int n, const TiltedParams& params) {
  if (n < 1) throw DomainError("n must be >= 1");
  TvReport out;
  if (B.empty()) {
    out.prob_T = prob_T_eq_n(spec, n, params);
    return out;
  }
  const auto r = weighted_sum_pmf_ld(spec, B, n, params);
  const auto s = weighted_sum_pmf_ld(spec, B.complement(n), n, params);
  const auto N = static_cast<std::size_t>(n);
  long double prob_T = 0.0L;
  long double head = 0.0L;
  for (std::size_t k = 0; k <= N; ++k) {
    prob_T += r[k] * s[N - k];
    head += r[k];
  }
  if (!(prob_T > 0.0L)) throw DomainError("P(T_n = n) = 0");
  long double body = 0.0L;
  for (std::size_t k = 0; k <= N; ++k) body += r[k] * std::fabs(s[N - k] / prob_T - 1.0L);
  const double tail = std::max(0.0, static_cast<double>(1.0L - head));
  out.prob_T = static_cast<double>(prob_T);
  out.lower = tail;
  out.tail_term = 0.5 * tail;
  out.body_sum = static_cast<double>(0.5L * body);
  out.exact = std::min(1.0, out.tail_term + out.body_sum);
  return out;
}

ConditionedBounds tv_conditioned_bounds(double p, double q, double d_A, double d_B) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("p and q must be > 0");
  ConditionedBounds b;
  b.b0 = 0.5 * std::fabs(1.0 - q / p) + d_B / p;
  b.b1 = (0.5 * d_A + d_B) / p;
  b.b2 = 1.5 * d_B / p;
  return b;
}

double tv_heuristic(const StructureSpec& spec, const IndexSet& B, int n, const TiltedParams& params,
                    const LimitLaw& limit) {
  if (!spec.meta()) throw DomainError("heuristic needs logarithmic-class constants (kappa, y)");
  if (n < 1) throw DomainError("n must be >= 1");
  if (B.empty()) return 0.0;
  const double slope = limit.kappa - 1.0 - limit.c;
  if (slope == 0.0) return 0.0;
  const PmfVector r = weighted_sum_pmf(spec, B, 4 * n, params);
  return 0.5 * std::fabs(slope) * r.mean_abs_deviation() / n;
}

double overpower_bound(double expectation_Z, double prob_T) {
  if (!(prob_T > 0.0)) throw DomainError("P(T = t) must be > 0");
  if (!(expectation_Z >= 0.0)) throw DomainError("E h(Z) must be >= 0");
  return expectation_Z / prob_T;
}

double permutation_tv_envelope(double x) {
  if (!(x >= 1.0)) throw DomainError("F(x) needs x >= 1");
  const double m = std::floor(x);
  const double first =
      std::exp(0.5 * std::log(2.0 * std::numbers::pi * m) + (m - 1.0) * std::log(2.0) - std::lgamma(m));
  const double second = std::exp(-std::lgamma(m + 1.0));
  const double third = 3.0 * std::exp(-x * (std::log(x) - 1.0));
  return first + second + third;
}

ComponentConditionedTv tv_given_components(const StructureSpec& spec, const IndexSet& B, int n,
                                           int k, const TiltedParams& params) {
  if (n < 1 || k < 1 || k > n) throw DomainError("need 1 <= k <= n");
  const JointPmf jb = joint_sum_pmf(spec, B, n, n, params);
  const JointPmf js = joint_sum_pmf(spec, B.complement(n), n, n, params);
  const auto N = static_cast<std::size_t>(n);
  const auto K = static_cast<std::size_t>(k);

  std::vector<double> s_marg(N + 1, 0.0);
  for (std::size_t v = 0; v <= N; ++v) {
    for (std::size_t r = 0; r <= N; ++r) s_marg[r] += js.p[v][r];
  }
  // w_k: given U = k and T = n; w_t: given T = n only.
  std::vector<std::vector<double>> wk(K + 1, std::vector<double>(N + 1, 0.0));
  std::vector<std::vector<double>> wt(N + 1, std::vector<double>(N + 1, 0.0));
  double zk = 0.0;
  double zt = 0.0;
  for (std::size_t u = 0; u <= N; ++u) {
    for (std::size_t r = 0; r <= N; ++r) {
      const double pb = jb.p[u][r];
      if (pb == 0.0) continue;
      if (u <= K) {
        wk[u][r] = pb * js.p[K - u][N - r];
        zk += wk[u][r];
      }
      wt[u][r] = pb * s_marg[N - r];
      zt += wt[u][r];
    }
  }
  if (!(zk > 0.0)) throw DomainError("no structures with k components");

  ComponentConditionedTv out;
  CompensatedSum d1;
  CompensatedSum covered;
  CompensatedSum d2;
  for (std::size_t u = 0; u <= N; ++u) {
    for (std::size_t r = 0; r <= N; ++r) {
      const double ck = u <= K ? wk[u][r] / zk : 0.0;
      const double pb = jb.p[u][r];
      d1.add(std::fabs(ck - pb));
      covered.add(pb);
      d2.add(std::fabs(ck - wt[u][r] / zt));
    }
  }
  out.vs_independent = 0.5 * d1.value() + 0.5 * std::max(0.0, 1.0 - covered.value());
  out.vs_biased = 0.5 * d2.value();
  return out;
}

}  // namespace combstruct
