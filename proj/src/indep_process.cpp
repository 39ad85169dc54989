#include "combstruct/indep_process.hpp"

#include <algorithm>
#include <numbers>

#include <boost/math/special_functions/lambert_w.hpp>

namespace combstruct {

void validate(const StructureSpec& spec, const TiltedParams& params) {
  if (!(params.x > 0.0) || !std::isfinite(params.x)) throw DomainError("x must be > 0");
  if (!(params.theta > 0.0) || !std::isfinite(params.theta)) {
    throw DomainError("theta must be > 0");
  }
  if (spec.kind() == Kind::Multiset && !(params.x < 1.0 && params.theta * params.x < 1.0)) {
    throw DomainError("multisets require x < 1 and theta * x < 1");
  }
}

DiscreteLaw DiscreteLaw::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("Poisson mean must be >= 0");
  DiscreteLaw d;
  d.family = Family::Poisson;
  d.lambda = lambda;
  return d;
}

DiscreteLaw DiscreteLaw::negative_binomial(double m, double p) {
  if (!(m >= 0.0) || !(p >= 0.0 && p < 1.0)) throw DomainError("bad negative binomial");
  DiscreteLaw d;
  d.family = Family::NegativeBinomial;
  d.m = m;
  d.p = p;
  d.log1mp = std::log1p(-p);
  return d;
}

DiscreteLaw DiscreteLaw::binomial(double m, double p) {
  if (!(m >= 0.0) || m != std::floor(m) || !(p >= 0.0 && p <= 1.0)) {
    throw DomainError("bad binomial");
  }
  DiscreteLaw d;
  d.family = Family::Binomial;
  d.m = m;
  d.p = p;
  d.log1mp = std::log1p(-p);
  return d;
}

DiscreteLaw DiscreteLaw::geometric(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("bad geometric");
  DiscreteLaw d;
  d.family = Family::Geometric;
  d.p = p;
  d.log1mp = std::log1p(-p);
  return d;
}

DiscreteLaw DiscreteLaw::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bad Bernoulli");
  DiscreteLaw d;
  d.family = Family::Bernoulli;
  d.p = p;
  d.log1mp = std::log1p(-p);
  return d;
}

DiscreteLaw DiscreteLaw::binomial_from_odds(double m, double odds) {
  if (!(odds >= 0.0)) throw DomainError("odds must be >= 0");
  DiscreteLaw d = m == 1.0 ? bernoulli(0.0) : binomial(m, 0.0);
  d.p = std::isinf(odds) ? 1.0 : odds / (1.0 + odds);
  d.log1mp = -std::log1p(odds);
  return d;
}

double DiscreteLaw::log_pmf(long k) const {
  if (k < 0) return kNegInf;
  const double dk = static_cast<double>(k);
  const double log_p = p > 0.0 ? std::log(p) : kNegInf;
  auto k_log_p = [&]() { return k == 0 ? 0.0 : dk * log_p; };
  switch (family) {
    case Family::Poisson:
      if (lambda == 0.0) return k == 0 ? 0.0 : kNegInf;
      return dk * std::log(lambda) - lambda - std::lgamma(dk + 1.0);
    case Family::NegativeBinomial:
      if (m == 0.0) return k == 0 ? 0.0 : kNegInf;
      return std::lgamma(m + dk) - std::lgamma(m) - std::lgamma(dk + 1.0) + m * log1mp + k_log_p();
    case Family::Binomial: {
      if (dk > m) return kNegInf;
      const double rest = (m - dk) == 0.0 ? 0.0 : (m - dk) * log1mp;
      return std::lgamma(m + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(m - dk + 1.0) + k_log_p() +
             rest;
    }
    case Family::Geometric:
      return log1mp + k_log_p();
    case Family::Bernoulli:
      if (k == 0) return log1mp;
      if (k == 1) return log_p;
      return kNegInf;
  }
  return kNegInf;
}

double DiscreteLaw::mean() const {
  const double q = std::exp(log1mp);  // 1 - p
  switch (family) {
    case Family::Poisson:
      return lambda;
    case Family::NegativeBinomial:
      return m * p / q;
    case Family::Binomial:
      return m * p;
    case Family::Geometric:
      return p / q;
    case Family::Bernoulli:
      return p;
  }
  return 0.0;
}

double DiscreteLaw::variance() const {
  const double q = std::exp(log1mp);  // 1 - p
  switch (family) {
    case Family::Poisson:
      return lambda;
    case Family::NegativeBinomial:
      return m * p / (q * q);
    case Family::Binomial:
      return m * p * q;
    case Family::Geometric:
      return p / (q * q);
    case Family::Bernoulli:
      return p * q;
  }
  return 0.0;
}

long DiscreteLaw::support_max() const {
  switch (family) {
    case Family::Poisson:
      return lambda == 0.0 ? 0 : -1;
    case Family::NegativeBinomial:
      return (m == 0.0 || p == 0.0) ? 0 : -1;
    case Family::Binomial:
      return p == 0.0 ? 0 : static_cast<long>(m);
    case Family::Geometric:
      return p == 0.0 ? 0 : -1;
    case Family::Bernoulli:
      return p == 0.0 ? 0 : 1;
  }
  return -1;
}

std::vector<long double> DiscreteLaw::pmf_table(long k_max) const {
  std::vector<long double> out(static_cast<std::size_t>(std::max(k_max, -1L) + 1), 0.0L);
  if (k_max < 0) return out;
  long top = k_max;
  if (const long s = support_max(); s >= 0) top = std::min(top, s);

  const long double q = std::exp(static_cast<long double>(log1mp));
  // ratio(k) = pmf(k+1) / pmf(k)
  auto ratio = [&](long k) -> long double {
    const auto dk = static_cast<long double>(k);
    switch (family) {
      case Family::Poisson:
        return static_cast<long double>(lambda) / (dk + 1.0L);
      case Family::NegativeBinomial:
        return (static_cast<long double>(m) + dk) / (dk + 1.0L) * static_cast<long double>(p);
      case Family::Binomial:
      case Family::Bernoulli:
        return (static_cast<long double>(m == 0.0 ? 1.0 : m) - dk) / (dk + 1.0L) *
               (static_cast<long double>(p) / q);
      case Family::Geometric:
        return static_cast<long double>(p);
    }
    return 0.0L;
  };

  long mode = 0;
  switch (family) {
    case Family::Poisson:
      mode = static_cast<long>(std::min(lambda, 1e15));
      break;
    case Family::NegativeBinomial:
      mode = m > 1.0 ? static_cast<long>(std::min((m - 1.0) * p / std::exp(log1mp), 1e15)) : 0;
      break;
    case Family::Binomial:
      mode = static_cast<long>(std::min((m + 1.0) * p, m));
      break;
    case Family::Geometric:
      mode = 0;
      break;
    case Family::Bernoulli:
      mode = p > 0.5 ? 1 : 0;
      break;
  }
  mode = std::clamp(mode, 0L, top);
  const long double at_mode = std::exp(static_cast<long double>(log_pmf(mode)));
  out[static_cast<std::size_t>(mode)] = at_mode;
  for (long k = mode; k < top; ++k) {
    out[static_cast<std::size_t>(k + 1)] = out[static_cast<std::size_t>(k)] * ratio(k);
  }
  for (long k = mode; k > 0; --k) {
    const long double r = ratio(k - 1);
    out[static_cast<std::size_t>(k - 1)] =
        r > 0.0L ? out[static_cast<std::size_t>(k)] / r : std::exp(static_cast<long double>(log_pmf(k - 1)));
  }
  return out;
}

namespace {

double log_weight(int i, const TiltedParams& params) {
  // log(theta x^i), the per-copy weight before any factorial.
  return std::log(params.theta) + i * std::log(params.x);
}

}  // namespace

DiscreteLaw z_law(const StructureSpec& spec, int i, const TiltedParams& params) {
  const double lm = spec.log_m(i);
  const double lw = log_weight(i, params);
  switch (spec.kind()) {
    case Kind::Assembly:
      if (lm == kNegInf) return DiscreteLaw::poisson(0.0);
      return DiscreteLaw::poisson(std::exp(lm + lw - std::lgamma(i + 1.0)));
    case Kind::Multiset:
      if (lm == kNegInf) return DiscreteLaw::negative_binomial(0.0, 0.0);
      return DiscreteLaw::negative_binomial(spec.m(i), std::exp(lw));
    case Kind::Selection:
      if (lm == kNegInf) return DiscreteLaw::binomial(0.0, 0.0);
      return DiscreteLaw::binomial_from_odds(spec.m(i), std::exp(lw));
  }
  return DiscreteLaw::poisson(0.0);
}

DiscreteLaw refined_y_law(const StructureSpec& spec, int i, const TiltedParams& params) {
  const double lw = log_weight(i, params);
  switch (spec.kind()) {
    case Kind::Assembly:
      return DiscreteLaw::poisson(std::exp(lw - std::lgamma(i + 1.0)));
    case Kind::Multiset:
      return DiscreteLaw::geometric(std::exp(lw));
    case Kind::Selection:
      return DiscreteLaw::binomial_from_odds(1.0, std::exp(lw));
  }
  return DiscreteLaw::poisson(0.0);
}

double log_prob_zero(const StructureSpec& spec, int i, const TiltedParams& params) {
  const DiscreteLaw law = z_law(spec, i, params);
  switch (law.family) {
    case DiscreteLaw::Family::Poisson:
      return -law.lambda;
    case DiscreteLaw::Family::NegativeBinomial:
    case DiscreteLaw::Family::Binomial:
      return law.m == 0.0 ? 0.0 : law.m * law.log1mp;
    case DiscreteLaw::Family::Bernoulli:
    case DiscreteLaw::Family::Geometric:
      return law.log1mp;
  }
  return 0.0;
}

SumMoments sum_moments(const StructureSpec& spec, int n, const TiltedParams& params) {
  CompensatedSum mean;
  CompensatedSum var;
  for (int i = 1; i <= n; ++i) {
    if (spec.m_zero(i)) continue;
    const DiscreteLaw law = z_law(spec, i, params);
    mean.add(i * law.mean());
    var.add(static_cast<double>(i) * i * law.variance());
  }
  return {mean.value(), var.value()};
}

XStrategy parse_strategy(std::string_view name) {
  if (name == "exact-mean" || name == "exact_mean") return XStrategy::ExactMean;
  if (name == "logarithmic") return XStrategy::Logarithmic;
  if (name == "logarithmic-tilted" || name == "logarithmic_tilted") {
    return XStrategy::LogarithmicTilted;
  }
  if (name == "set-partition" || name == "set_partition") return XStrategy::SetPartition;
  if (name == "integer-partition" || name == "integer_partition") {
    return XStrategy::IntegerPartition;
  }
  if (name == "distinct-partition" || name == "distinct_partition") {
    return XStrategy::DistinctPartition;
  }
  if (name == "distinct-odd-partition" || name == "distinct_odd_partition") {
    return XStrategy::DistinctOddPartition;
  }
  throw DomainError("unknown x strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(XStrategy s) {
  switch (s) {
    case XStrategy::ExactMean:
      return "exact-mean";
    case XStrategy::Logarithmic:
      return "logarithmic";
    case XStrategy::LogarithmicTilted:
      return "logarithmic-tilted";
    case XStrategy::SetPartition:
      return "set-partition";
    case XStrategy::IntegerPartition:
      return "integer-partition";
    case XStrategy::DistinctPartition:
      return "distinct-partition";
    case XStrategy::DistinctOddPartition:
      return "distinct-odd-partition";
  }
  return "?";
}

double solve_x_exp_x(double v) {
  if (!(v > 0.0)) throw DomainError("x e^x = v requires v > 0");
  return boost::math::lambert_w0(v);
}

namespace {

double exact_mean_x(const StructureSpec& spec, int n, double theta) {
  const double target = n;
  auto excess = [&](double lx) {
    return sum_moments(spec, n, {std::exp(lx), theta}).mean - target;
  };

  // Bracket the root of E T_n = n in log x; E T_n is increasing in x.
  double lo;
  double hi;
  if (spec.kind() == Kind::Multiset) {
    const double ub = std::min(0.0, -std::log(theta)) + std::log1p(-1e-12);
    hi = ub;
    double d = 1.0;
    lo = ub - d;
    if (excess(lo) > 0.0) {
      hi = lo;
      while (excess(lo) > 0.0) {
        hi = lo;
        d *= 2.0;
        lo = ub - d;
        if (d > 1e6) throw NumericGuard("cannot bracket E T_n = n");
      }
    } else {
      while (true) {
        d *= 0.5;
        const double probe = ub - d;
        if (d < 1e-12) {
          if (excess(ub) > 0.0) break;
          throw DomainError("E T_n = n has no root below the multiset bound; sup attained near x = " +
                             std::to_string(std::exp(ub)));
        }
        if (excess(probe) > 0.0) {
          hi = probe;
          break;
        }
        lo = probe;
      }
    }
  } else {
    const double f0 = excess(0.0);
    if (f0 == 0.0) return 1.0;
    double d = 1.0;
    if (f0 > 0.0) {
      hi = 0.0;
      lo = -d;
      while (excess(lo) > 0.0) {
        hi = lo;
        d *= 2.0;
        lo = -d;
        if (d > 1e6) throw NumericGuard("cannot bracket E T_n = n");
      }
    } else {
      lo = 0.0;
      hi = d;
      while (excess(hi) < 0.0) {
        lo = hi;
        d *= 2.0;
        hi = d;
        if (d > 1e6) throw NumericGuard("cannot bracket E T_n = n");
      }
    }
  }

  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double lx = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const SumMoments mom = sum_moments(spec, n, {std::exp(lx), theta});
    if (!(mom.variance > 0.0)) break;
    const double next = lx - (mom.mean - target) / mom.variance;
    if (!(next >= lo && next <= hi)) break;
    lx = next;
  }
  return std::exp(lx);
}

const LogClassMeta& require_meta(const StructureSpec& spec) {
  if (!spec.meta()) throw DomainError("strategy needs logarithmic-class constants (kappa, y)");
  return *spec.meta();
}

}  // namespace

double choose_x(const StructureSpec& spec, int n, double theta, XStrategy strategy) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  const double dn = n;
  switch (strategy) {
    case XStrategy::ExactMean:
      return exact_mean_x(spec, n, theta);
    case XStrategy::Logarithmic:
      return 1.0 / require_meta(spec).y;
    case XStrategy::LogarithmicTilted: {
      const LogClassMeta& meta = require_meta(spec);
      const double c = meta.kappa * theta - 1.0;
      return std::exp(-c / dn) / meta.y;
    }
    case XStrategy::SetPartition:
      return solve_x_exp_x(dn);
    case XStrategy::IntegerPartition:
      return std::exp(-std::numbers::pi / std::sqrt(6.0 * dn));
    case XStrategy::DistinctPartition:
      return std::exp(-std::numbers::pi / std::sqrt(12.0 * dn));
    case XStrategy::DistinctOddPartition:
      return std::exp(-std::numbers::pi / std::sqrt(24.0 * dn));
  }
  return 1.0;
}

}  // namespace combstruct
