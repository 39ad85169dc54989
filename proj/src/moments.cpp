#include "combstruct/moments.hpp"

namespace combstruct {

long MomentSpec::weight() const {
  long m = 0;
  for (const auto& [j, order] : r) {
    if (j < 1 || order < 0) throw DomainError("moment orders need j >= 1 and r_j >= 0");
    m += static_cast<long>(j) * order;
  }
  return m;
}

namespace {

void check_n(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
}

/// Uses the tilt from params only to build the p_theta table; any valid x
/// gives the same values.
std::vector<double> p_table(const StructureSpec& spec, int n, const TiltedParams& params) {
  return log_p_total_table(spec, n, params.theta, params.x);
}

}  // namespace

double factorial_moment_assembly(const StructureSpec& spec, int n, const MomentSpec& r,
                                 const TiltedParams& params) {
  check_n(n);
  if (spec.kind() != Kind::Assembly) throw DomainError("joint moments are for assemblies");
  const long m = r.weight();
  if (m > n) return 0.0;
  double l = 0.0;
  for (const auto& [j, order] : r.r) {
    if (order == 0) continue;
    if (spec.m_zero(j)) return 0.0;
    l += order * (std::log(params.theta) + spec.log_m(j) - std::lgamma(j + 1.0));
  }
  const auto table = p_table(spec, n, params);
  const auto nm = static_cast<std::size_t>(n - m);
  if (table[nm] == kNegInf) return 0.0;
  l += std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(n - m) + 1.0) + table[nm] -
       table[static_cast<std::size_t>(n)];
  return std::exp(l);
}

double factorial_moment_single(const StructureSpec& spec, int n, int j, int r,
                               const TiltedParams& params) {
  check_n(n);
  if (j < 1 || r < 1) throw DomainError("need j >= 1 and r >= 1");
  if (spec.kind() == Kind::Assembly) {
    return factorial_moment_assembly(spec, n, MomentSpec::single(j, r), params);
  }
  if (static_cast<long>(j) * r > n || spec.m_zero(j)) return 0.0;
  const double mj = spec.m(j);
  double lead;
  if (spec.kind() == Kind::Multiset) {
    lead = log_rising(mj, r);
  } else {
    if (r > mj) return 0.0;
    lead = log_falling(mj, r);
  }
  const auto table = p_table(spec, n, params);
  const double log_pn = table[static_cast<std::size_t>(n)];
  const double log_theta = std::log(params.theta);
  CompensatedSum sum;
  for (int m = r; m <= n / j; ++m) {
    const double lp = table[static_cast<std::size_t>(n - j * m)];
    if (lp == kNegInf) continue;
    const double lbin = std::lgamma(static_cast<double>(m)) - std::lgamma(static_cast<double>(r)) -
                        std::lgamma(static_cast<double>(m - r) + 1.0);
    double term = std::exp(lead + lbin + m * log_theta + lp - log_pn);
    if (spec.kind() == Kind::Selection && (m - r) % 2 == 1) term = -term;
    sum.add(term);
  }
  return sum.value();
}

double esf_pmf(int n, double kappa, const ComponentVector& v) {
  check_n(n);
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  if (v.n != n || !v.complete()) return 0.0;
  double l = std::lgamma(n + 1.0) - log_rising(kappa, n);
  for (int j = 1; j <= n; ++j) {
    const auto a = static_cast<double>(v.at(j));
    if (a == 0.0) continue;
    l += a * (std::log(kappa) - std::log(static_cast<double>(j))) - std::lgamma(a + 1.0);
  }
  return std::exp(l);
}

double esf_moment(int n, double kappa, const MomentSpec& r) {
  check_n(n);
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  const long m = r.weight();
  if (m > n) return 0.0;
  // C(kappa + n - m - 1, n - m) / C(kappa + n - 1, n) prod (kappa / j)^{r_j}
  double l = log_rising(kappa, n - m) - std::lgamma(static_cast<double>(n - m) + 1.0) -
             log_rising(kappa, n) + std::lgamma(n + 1.0);
  for (const auto& [j, order] : r.r) l += order * (std::log(kappa) - std::log(static_cast<double>(j)));
  return std::exp(l);
}

double expected_theta_K(const StructureSpec& spec, int n, double theta) {
  check_n(n);
  return std::exp(log_p_total(spec, n, theta) - log_p_total(spec, n, 1.0));
}

}  // namespace combstruct
