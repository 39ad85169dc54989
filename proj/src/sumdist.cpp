#include "combstruct/sumdist.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace combstruct {

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.front() < 1) throw DomainError("indices must be >= 1");
}

IndexSet IndexSet::range(int lo, int hi) {
  std::vector<int> v;
  for (int i = std::max(lo, 1); i <= hi; ++i) v.push_back(i);
  return IndexSet(std::move(v));
}

namespace {

int parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("bad index '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

IndexSet IndexSet::parse(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.find_first_not_of(' ') == std::string_view::npos) continue;
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const int lo = parse_int(item.substr(0, dots));
      const int hi = parse_int(item.substr(dots + 2));
      if (lo < 1 || hi < lo) throw DomainError("bad range '" + std::string(item) + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    } else {
      const int v = parse_int(item);
      if (v < 1) throw DomainError("indices must be >= 1");
      out.push_back(v);
    }
  }
  return IndexSet(std::move(out));
}

bool IndexSet::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSet IndexSet::complement(int n) const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i) {
    if (!contains(i)) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  std::size_t k = 0;
  bool first = true;
  while (k < indices_.size()) {
    std::size_t j = k;
    while (j + 1 < indices_.size() && indices_[j + 1] == indices_[j] + 1) ++j;
    if (!first) os << ',';
    first = false;
    if (j >= k + 2) {
      os << indices_[k] << ".." << indices_[j];
    } else {
      for (std::size_t t = k; t <= j; ++t) os << (t > k ? "," : "") << indices_[t];
    }
    k = j + 1;
  }
  return os.str();
}

double PmfVector::mean() const {
  CompensatedSum s;
  for (std::size_t k = 0; k < p.size(); ++k) s.add(static_cast<double>(k) * p[k]);
  return s.value();
}

double PmfVector::mean_abs_deviation() const {
  const double mu = mean();
  CompensatedSum s;
  for (std::size_t k = 0; k < p.size(); ++k) s.add(std::fabs(static_cast<double>(k) - mu) * p[k]);
  return s.value();
}

PmfVector PmfVector::point_mass(int k, int n_max) {
  PmfVector out;
  out.p.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (k <= n_max) {
    out.p[static_cast<std::size_t>(k)] = 1.0;
  } else {
    out.tail = 1.0;
  }
  return out;
}

double JointPmf::at(int u, int r) const {
  if (u < 0 || u > u_max() || r < 0 || r > n_max()) return 0.0;
  return p[static_cast<std::size_t>(u)][static_cast<std::size_t>(r)];
}

PmfVector JointPmf::r_marginal() const {
  PmfVector out;
  out.p.assign(static_cast<std::size_t>(std::max(n_max(), 0)) + 1, 0.0);
  for (const auto& row : p) {
    for (std::size_t r = 0; r < row.size(); ++r) out.p[r] += row[r];
  }
  double total = 0.0;
  for (double v : out.p) total += v;
  out.tail = std::max(0.0, 1.0 - total);
  return out;
}

namespace {

constexpr long double kBig = 1e1000L;
constexpr double kLogBig = 1000.0 * 2.302585092994045684;

/// Values v[k] represent exp(log_scale) * v[k].
struct Scaled {
  std::vector<long double> v;
  double log_scale = 0.0;

  long double max_abs() const {
    long double m = 0.0L;
    for (auto x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  void normalize() {
    const long double m = max_abs();
    if (m == 0.0L) return;
    const long double lm = std::log(m);
    for (auto& x : v) x /= m;
    log_scale += static_cast<double>(lm);
  }
  long double value(std::size_t k) const {
    return v[k] * std::exp(static_cast<long double>(log_scale));
  }
  double log_at(std::size_t k) const {
    if (v[k] <= 0.0L) return kNegInf;
    return static_cast<double>(std::log(v[k])) + log_scale;
  }
};

Scaled by_recursion(const StructureSpec& spec, const IndexSet& B, int n_max,
                    const TiltedParams& params) {
  const auto N = static_cast<std::size_t>(n_max);
  const double log_x = std::log(params.x);
  const double log_theta = std::log(params.theta);

  // g(j) as a signed long double built from log-space terms.
  std::vector<long double> g(N + 1, 0.0L);
  for (int k : B) {
    if (k > n_max || spec.m_zero(k)) continue;
    const double lm = spec.log_m(k);
    if (spec.kind() == Kind::Assembly) {
      // g(k) = k theta lambda_k
      const double lg = std::log(static_cast<double>(k)) + log_theta + lm + k * log_x -
                        std::lgamma(k + 1.0);
      g[static_cast<std::size_t>(k)] += std::exp(static_cast<long double>(lg));
      continue;
    }
    for (int j = k, e = 1; j <= n_max; j += k, ++e) {
      const double lg = std::log(static_cast<double>(k)) + lm + e * log_theta + j * log_x;
      long double term = std::exp(static_cast<long double>(lg));
      if (spec.kind() == Kind::Selection && e % 2 == 0) term = -term;
      g[static_cast<std::size_t>(j)] += term;
    }
  }

  Scaled out;
  out.v.assign(N + 1, 0.0L);
  out.v[0] = 1.0L;
  out.log_scale = log_seed(spec, B, params);
  for (std::size_t k = 1; k <= N; ++k) {
    long double acc = 0.0L;
    for (std::size_t j = 1; j <= k; ++j) {
      if (g[j] != 0.0L) acc += g[j] * out.v[k - j];
    }
    out.v[k] = acc / static_cast<long double>(k);
    if (std::fabs(out.v[k]) > kBig) {
      for (std::size_t t = 0; t <= k; ++t) out.v[t] /= kBig;
      out.log_scale += kLogBig;
    }
  }
  return out;
}

Scaled by_convolution(const StructureSpec& spec, const IndexSet& B, int n_max,
                      const TiltedParams& params) {
  const auto N = static_cast<std::size_t>(n_max);
  Scaled out;
  out.v.assign(N + 1, 0.0L);
  out.v[0] = 1.0L;
  std::vector<long double> next(N + 1);
  for (int i : B) {
    if (spec.m_zero(i)) continue;
    if (i > n_max) {
      out.log_scale += log_prob_zero(spec, i, params);
      continue;
    }
    const DiscreteLaw law = z_law(spec, i, params);
    const auto iu = static_cast<std::size_t>(i);
    const std::vector<long double> q = law.pmf_table(static_cast<long>(N / iu));
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t r = 0; r <= N; ++r) {
      const long double base = out.v[r];
      if (base == 0.0L) continue;
      for (std::size_t k = 0; r + k * iu <= N && k < q.size(); ++k) {
        next[r + k * iu] += base * q[k];
      }
    }
    out.v.swap(next);
    out.normalize();
  }
  return out;
}

Scaled sum_scaled(const StructureSpec& spec, const IndexSet& B, int n_max,
                  const TiltedParams& params, SumMethod method) {
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  validate(spec, params);
  if (method == SumMethod::Auto) {
    method = spec.kind() == Kind::Selection ? SumMethod::Convolution : SumMethod::Recursion;
  }
  return method == SumMethod::Recursion ? by_recursion(spec, B, n_max, params)
                                        : by_convolution(spec, B, n_max, params);
}

PmfVector to_pmf(const Scaled& s) {
  PmfVector out;
  out.p.resize(s.v.size());
  CompensatedSum total;
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    double v = static_cast<double>(s.value(k));
    if (v < 0.0 || !std::isfinite(v)) v = 0.0;
    out.p[k] = v;
    total.add(v);
  }
  out.tail = std::max(0.0, 1.0 - total.value());
  if (out.tail < 1e-13) out.tail = 0.0;
  return out;
}

}  // namespace

PmfVector weighted_sum_pmf(const StructureSpec& spec, const IndexSet& B, int n_max,
                           const TiltedParams& params, SumMethod method) {
  return to_pmf(sum_scaled(spec, B, n_max, params, method));
}

std::vector<long double> weighted_sum_pmf_ld(const StructureSpec& spec, const IndexSet& B,
                                             int n_max, const TiltedParams& params,
                                             SumMethod method) {
  const Scaled s = sum_scaled(spec, B, n_max, params, method);
  std::vector<long double> out(s.v.size());
  for (std::size_t k = 0; k < s.v.size(); ++k) out[k] = s.value(k);
  return out;
}

double log_seed(const StructureSpec& spec, const IndexSet& B, const TiltedParams& params) {
  CompensatedSum s;
  for (int i : B) {
    if (!spec.m_zero(i)) s.add(log_prob_zero(spec, i, params));
  }
  return s.value();
}

double log_prob_T_eq_n(const StructureSpec& spec, int n, const TiltedParams& params,
                       SumMethod method) {
  if (n < 0) throw DomainError("n must be >= 0");
  const Scaled s = sum_scaled(spec, IndexSet::range(1, n), n, params, method);
  return s.log_at(static_cast<std::size_t>(n));
}

double prob_T_eq_n(const StructureSpec& spec, int n, const TiltedParams& params,
                   SumMethod method) {
  return std::exp(log_prob_T_eq_n(spec, n, params, method));
}

double prob_T_eq_n_closed_form(const StructureSpec& spec, int n, const TiltedParams& params) {
  validate(spec, params);
  const BigRational p = p_total_exact(spec, n, rational_from_double(params.theta));
  if (p == 0) return 0.0;
  double l = log_of(p) + log_seed(spec, IndexSet::range(1, n), params) + n * std::log(params.x);
  if (spec.kind() == Kind::Assembly) l -= std::lgamma(n + 1.0);
  return std::exp(l);
}

ProbTReport prob_T_report(const StructureSpec& spec, int n, const TiltedParams& params) {
  ProbTReport r;
  r.recursion = prob_T_eq_n(spec, n, params);
  r.closed_form = prob_T_eq_n_closed_form(spec, n, params);
  if (r.closed_form > 0.0) {
    r.relative_gap = std::fabs(r.recursion - r.closed_form) / r.closed_form;
  } else {
    r.relative_gap = r.recursion == 0.0 ? 0.0 : 1.0;
  }
  return r;
}

PmfVector conditioned_R_pmf(const StructureSpec& spec, const IndexSet& B, int n,
                            const TiltedParams& params) {
  if (n < 0) throw DomainError("n must be >= 0");
  const Scaled r = sum_scaled(spec, B, n, params, SumMethod::Auto);
  const Scaled s = sum_scaled(spec, B.complement(n), n, params, SumMethod::Auto);
  const auto N = static_cast<std::size_t>(n);
  std::vector<long double> joint(N + 1);
  long double total = 0.0L;
  for (std::size_t k = 0; k <= N; ++k) {
    joint[k] = std::max(0.0L, r.v[k]) * std::max(0.0L, s.v[N - k]);
    total += joint[k];
  }
  if (!(total > 0.0L)) throw DomainError("P(T_n = n) = 0");
  PmfVector out;
  out.p.resize(N + 1);
  for (std::size_t k = 0; k <= N; ++k) out.p[k] = static_cast<double>(joint[k] / total);
  return out;
}

JointPmf joint_sum_pmf(const StructureSpec& spec, const IndexSet& B, int n_max, int u_max,
                       const TiltedParams& params) {
  if (n_max < 0 || u_max < 0) throw DomainError("n_max and u_max must be >= 0");
  validate(spec, params);
  const auto N = static_cast<std::size_t>(n_max);
  const auto U = static_cast<std::size_t>(u_max);
  std::vector<std::vector<long double>> cur(U + 1, std::vector<long double>(N + 1, 0.0L));
  cur[0][0] = 1.0L;
  long double log_scale = 0.0L;
  for (int i : B) {
    if (spec.m_zero(i)) continue;
    if (i > n_max) {
      log_scale += log_prob_zero(spec, i, params);
      continue;
    }
    const auto iu = static_cast<std::size_t>(i);
    const std::vector<long double> q =
        z_law(spec, i, params).pmf_table(static_cast<long>(std::min(N / iu, U)));
    std::vector<std::vector<long double>> next(U + 1, std::vector<long double>(N + 1, 0.0L));
    long double peak = 0.0L;
    for (std::size_t u = 0; u <= U; ++u) {
      for (std::size_t r = 0; r <= N; ++r) {
        const long double base = cur[u][r];
        if (base == 0.0L) continue;
        for (std::size_t k = 0; k < q.size() && u + k <= U && r + k * iu <= N; ++k) {
          next[u + k][r + k * iu] += base * q[k];
        }
      }
    }
    for (const auto& row : next) {
      for (auto v : row) peak = std::max(peak, v);
    }
    if (peak > 0.0L) {
      for (auto& row : next) {
        for (auto& v : row) v /= peak;
      }
      log_scale += std::log(peak);
    }
    cur.swap(next);
  }
  JointPmf out;
  out.p.assign(U + 1, std::vector<double>(N + 1, 0.0));
  const long double scale = std::exp(log_scale);
  CompensatedSum total;
  for (std::size_t u = 0; u <= U; ++u) {
    for (std::size_t r = 0; r <= N; ++r) {
      out.p[u][r] = static_cast<double>(cur[u][r] * scale);
      total.add(out.p[u][r]);
    }
  }
  out.tail = std::max(0.0, 1.0 - total.value());
  return out;
}

SignedRecursionCheck check_signed_recursion(const StructureSpec& spec, const IndexSet& B,
                                            int n_max, const TiltedParams& params) {
  const PmfVector a = weighted_sum_pmf(spec, B, n_max, params, SumMethod::Recursion);
  const PmfVector b = weighted_sum_pmf(spec, B, n_max, params, SumMethod::Convolution);
  SignedRecursionCheck out;
  for (int k = 0; k <= n_max; ++k) out.max_gap = std::max(out.max_gap, std::fabs(a.at(k) - b.at(k)));
  out.flagged = out.max_gap > 1e-8;
  return out;
}

}  // namespace combstruct
