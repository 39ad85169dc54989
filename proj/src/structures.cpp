#include "combstruct/structures.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include "combstruct/indep_process.hpp"
#include "combstruct/sumdist.hpp"

namespace combstruct {

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Assembly:
      return "assembly";
    case Kind::Multiset:
      return "multiset";
    case Kind::Selection:
      return "selection";
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  if (name == "assembly") return Kind::Assembly;
  if (name == "multiset") return Kind::Multiset;
  if (name == "selection") return Kind::Selection;
  throw DomainError("unknown structure kind '" + std::string(name) + "'");
}

std::int64_t ComponentVector::weight() const {
  std::int64_t w = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) w += static_cast<std::int64_t>(i + 1) * counts[i];
  return w;
}

std::int64_t ComponentVector::components() const {
  std::int64_t k = 0;
  for (auto c : counts) k += c;
  return k;
}

StructureSpec StructureSpec::permutations() {
  return {Kind::Assembly, Family::Permutations, "permutations", 0.0, LogClassMeta{1.0, 1.0}};
}

StructureSpec StructureSpec::mappings() {
  return {Kind::Assembly, Family::Mappings, "mappings", 0.0, LogClassMeta{0.5, std::exp(1.0)}};
}

StructureSpec StructureSpec::set_partitions() {
  return {Kind::Assembly, Family::SetPartitions, "set_partitions", 0.0, std::nullopt};
}

StructureSpec StructureSpec::two_regular_graphs() {
  return {Kind::Assembly, Family::TwoRegularGraphs, "two_regular_graphs", 0.0,
          LogClassMeta{0.5, 1.0}};
}

StructureSpec StructureSpec::integer_partitions() {
  return {Kind::Multiset, Family::IntegerPartitions, "integer_partitions", 0.0, std::nullopt};
}

StructureSpec StructureSpec::polynomials(unsigned long q) {
  if (q < 2) throw DomainError("polynomials require q >= 2");
  const auto qd = static_cast<double>(q);
  return {Kind::Multiset, Family::Polynomials, "polynomials", qd, LogClassMeta{1.0, qd}};
}

StructureSpec StructureSpec::distinct_partitions() {
  return {Kind::Selection, Family::DistinctPartitions, "distinct_partitions", 0.0, std::nullopt};
}

StructureSpec StructureSpec::distinct_odd_partitions() {
  return {Kind::Selection, Family::DistinctOddPartitions, "distinct_odd_partitions", 0.0,
          std::nullopt};
}

StructureSpec StructureSpec::squarefree_polynomials(unsigned long q) {
  if (q < 2) throw DomainError("square-free polynomials require q >= 2");
  const auto qd = static_cast<double>(q);
  return {Kind::Selection, Family::SquarefreePolynomials, "squarefree_polynomials", qd,
          LogClassMeta{1.0, qd}};
}

StructureSpec StructureSpec::esf(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("ESF requires kappa > 0");
  return {Kind::Assembly, Family::Esf, "esf", kappa, LogClassMeta{kappa, 1.0}};
}

StructureSpec StructureSpec::from_sequence(Kind kind, std::vector<double> m, std::string name,
                                           std::optional<LogClassMeta> meta) {
  for (double v : m) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("m_i must be finite and >= 0");
    if (kind == Kind::Selection && v != std::floor(v)) {
      throw DomainError("selections require integer m_i");
    }
  }
  if (meta && (!(meta->kappa > 0.0) || !(meta->y > 0.0))) {
    throw DomainError("meta requires kappa > 0 and y > 0");
  }
  StructureSpec s(kind, Family::Explicit, std::move(name), 0.0, meta);
  s.explicit_m_ = std::move(m);
  return s;
}

namespace {

void check_index(int i) {
  if (i < 1) throw DomainError("component size must be >= 1");
}

BigInt poly_count(unsigned long q, int i) {
  BigInt sum = 0;
  for (int k = 1; k <= i; ++k) {
    if (i % k != 0) continue;
    const int mu = mobius(static_cast<unsigned long>(i / k));
    if (mu == 0) continue;
    BigInt qk;
    mpz_ui_pow_ui(qk.get_mpz_t(), q, static_cast<unsigned long>(k));
    if (mu > 0) {
      sum += qk;
    } else {
      sum -= qk;
    }
  }
  return sum / i;
}

double log_poly_count(double q, int i) {
  // m_i = q^i / i * (1 + sum_{k | i, k < i} mu(i/k) q^{k-i})
  double corr = 0.0;
  for (int k = 1; k < i; ++k) {
    if (i % k != 0) continue;
    const int mu = mobius(static_cast<unsigned long>(i / k));
    if (mu != 0) corr += mu * std::exp((k - i) * std::log(q));
  }
  return i * std::log(q) - std::log(static_cast<double>(i)) + std::log1p(corr);
}

}  // namespace

BigRational StructureSpec::m_exact(int i) const {
  check_index(i);
  const auto iu = static_cast<unsigned long>(i);
  switch (family_) {
    case Family::Permutations:
      return BigRational(factorial(iu - 1));
    case Family::Mappings: {
      // (i-1)! sum_{j<i} i^j / j!  =  sum_j i^j (i-1)!/j!
      BigInt sum = 0;
      BigInt ratio = 1;  // (i-1)!/j! built downward from j = i-1
      BigInt power;
      for (long j = i - 1; j >= 0; --j) {
        mpz_ui_pow_ui(power.get_mpz_t(), iu, static_cast<unsigned long>(j));
        sum += power * ratio;
        ratio *= j;
      }
      return BigRational(sum);
    }
    case Family::SetPartitions:
    case Family::IntegerPartitions:
    case Family::DistinctPartitions:
      return BigRational(1);
    case Family::DistinctOddPartitions:
      return BigRational(i % 2 == 1 ? 1 : 0);
    case Family::TwoRegularGraphs:
      return i >= 3 ? BigRational(factorial(iu - 1) / 2) : BigRational(0);
    case Family::Polynomials:
    case Family::SquarefreePolynomials:
      return BigRational(poly_count(static_cast<unsigned long>(param_), i));
    case Family::Esf:
      return rational_from_double(param_) * BigRational(factorial(iu - 1));
    case Family::Explicit:
      if (static_cast<std::size_t>(i) > explicit_m_.size()) return BigRational(0);
      return rational_from_double(explicit_m_[iu - 1]);
  }
  return BigRational(0);
}

double StructureSpec::log_m(int i) const {
  check_index(i);
  const double di = i;
  switch (family_) {
    case Family::Permutations:
      return std::lgamma(di);
    case Family::Mappings:
      // e^i (i-1)! P(Po(i) < i), with P(Po(i) <= i-1) = Q(i, i).
      return std::lgamma(di) + di + std::log(boost::math::gamma_q(di, di));
    case Family::SetPartitions:
    case Family::IntegerPartitions:
    case Family::DistinctPartitions:
      return 0.0;
    case Family::DistinctOddPartitions:
      return i % 2 == 1 ? 0.0 : kNegInf;
    case Family::TwoRegularGraphs:
      return i >= 3 ? std::lgamma(di) - std::log(2.0) : kNegInf;
    case Family::Polynomials:
    case Family::SquarefreePolynomials:
      return log_poly_count(param_, i);
    case Family::Esf:
      return std::log(param_) + std::lgamma(di);
    case Family::Explicit: {
      if (static_cast<std::size_t>(i) > explicit_m_.size()) return kNegInf;
      const double v = explicit_m_[static_cast<std::size_t>(i - 1)];
      return v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  return kNegInf;
}

double StructureSpec::m(int i) const {
  const double l = log_m(i);
  if (l == kNegInf) return 0.0;
  if (family_ == Family::Explicit) return explicit_m_[static_cast<std::size_t>(i - 1)];
  if (l < 40.0) return to_double(m_exact(i));
  return std::exp(l);
}

bool StructureSpec::integral_m() const {
  switch (family_) {
    case Family::Esf:
      return param_ == std::floor(param_);
    case Family::Explicit:
      for (double v : explicit_m_) {
        if (v != std::floor(v)) return false;
      }
      return true;
    default:
      return true;
  }
}

BigRational count_N(const StructureSpec& spec, const ComponentVector& v) {
  if (static_cast<int>(v.counts.size()) != v.n) {
    throw DomainError("component vector length must equal n");
  }
  for (auto c : v.counts) {
    if (c < 0) throw DomainError("component counts must be nonnegative");
  }
  if (!v.complete()) return BigRational(0);

  BigRational result(1);
  if (spec.kind() == Kind::Assembly) result = BigRational(factorial(static_cast<unsigned long>(v.n)));
  for (int i = 1; i <= v.n; ++i) {
    const auto a = static_cast<unsigned long>(v.at(i));
    if (a == 0) continue;
    const BigRational mi = spec.m_exact(i);
    switch (spec.kind()) {
      case Kind::Assembly: {
        BigRational term = pow_rational(mi / BigRational(factorial(static_cast<unsigned long>(i))), a);
        term /= BigRational(factorial(a));
        result *= term;
        break;
      }
      case Kind::Multiset:
        result *= rising_factorial(mi, a) / BigRational(factorial(a));
        break;
      case Kind::Selection:
        result *= falling_factorial(mi, a) / BigRational(factorial(a));
        break;
    }
    if (result == 0) break;
  }
  result.canonicalize();
  return result;
}

std::vector<BigRational> p_total_exact_table(const StructureSpec& spec, int n_max,
                                             const BigRational& theta) {
  if (n_max < 0) throw DomainError("n must be >= 0");
  if (theta <= 0) throw DomainError("theta must be > 0");
  std::vector<BigRational> m(static_cast<std::size_t>(n_max) + 1);
  for (int i = 1; i <= n_max; ++i) m[static_cast<std::size_t>(i)] = spec.m_exact(i);

  std::vector<BigRational> p(static_cast<std::size_t>(n_max) + 1);
  p[0] = 1;
  if (spec.kind() == Kind::Assembly) {
    // Condition on the size i of the component containing the largest label.
    for (int k = 1; k <= n_max; ++k) {
      BigRational acc(0);
      for (int i = 1; i <= k; ++i) {
        const auto& mi = m[static_cast<std::size_t>(i)];
        if (mi == 0) continue;
        acc += BigRational(binomial(static_cast<unsigned long>(k - 1), static_cast<unsigned long>(i - 1))) *
               mi * p[static_cast<std::size_t>(k - i)];
      }
      acc *= theta;
      acc.canonicalize();
      p[static_cast<std::size_t>(k)] = acc;
    }
    return p;
  }

  // k p(k) = sum_j g(j) p(k - j) with g(j) = sum_{i | j} i m_i (+-theta)^{j/i}.
  std::vector<BigRational> theta_pow(static_cast<std::size_t>(n_max) + 1);
  theta_pow[0] = 1;
  for (int e = 1; e <= n_max; ++e) theta_pow[static_cast<std::size_t>(e)] = theta_pow[static_cast<std::size_t>(e - 1)] * theta;
  std::vector<BigRational> g(static_cast<std::size_t>(n_max) + 1);
  for (int i = 1; i <= n_max; ++i) {
    const auto& mi = m[static_cast<std::size_t>(i)];
    if (mi == 0) continue;
    for (int j = i; j <= n_max; j += i) {
      const int e = j / i;
      BigRational term = BigRational(i) * mi * theta_pow[static_cast<std::size_t>(e)];
      if (spec.kind() == Kind::Selection && e % 2 == 0) term = -term;
      g[static_cast<std::size_t>(j)] += term;
    }
  }
  for (int k = 1; k <= n_max; ++k) {
    BigRational acc(0);
    for (int j = 1; j <= k; ++j) {
      if (g[static_cast<std::size_t>(j)] == 0) continue;
      acc += g[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k - j)];
    }
    acc /= k;
    acc.canonicalize();
    p[static_cast<std::size_t>(k)] = acc;
  }
  return p;
}

BigRational p_total_exact(const StructureSpec& spec, int n, const BigRational& theta) {
  if (n < 0) throw DomainError("n must be >= 0");
  return p_total_exact_table(spec, n, theta)[static_cast<std::size_t>(n)];
}

double log_p_total(const StructureSpec& spec, int n, double theta, std::optional<double> x) {
  if (n < 1) throw DomainError("n must be >= 1");
  const double xv = x ? *x : choose_x(spec, n, theta, XStrategy::ExactMean);
  const TiltedParams params{xv, theta};
  validate(spec, params);
  const double log_prob = log_prob_T_eq_n(spec, n, params);
  if (log_prob == kNegInf) return kNegInf;
  double result = log_prob - log_seed(spec, IndexSet::range(1, n), params) - n * std::log(xv);
  if (spec.kind() == Kind::Assembly) result += std::lgamma(n + 1.0);
  return result;
}

std::vector<double> log_p_total_table(const StructureSpec& spec, int n, double theta,
                                      std::optional<double> x) {
  if (n < 0) throw DomainError("n must be >= 0");
  if (n == 0) return {0.0};
  const double xv = x ? *x : choose_x(spec, n, theta, XStrategy::ExactMean);
  const TiltedParams params{xv, theta};
  validate(spec, params);
  const IndexSet all = IndexSet::range(1, n);
  const auto t = weighted_sum_pmf_ld(spec, all, n, params);
  const double seed = log_seed(spec, all, params);
  const double log_x = std::log(xv);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const long double v = t[static_cast<std::size_t>(k)];
    if (!(v > 0.0L)) {
      out[static_cast<std::size_t>(k)] = kNegInf;
      continue;
    }
    double l = static_cast<double>(std::log(v)) - seed - k * log_x;
    if (spec.kind() == Kind::Assembly) l += std::lgamma(k + 1.0);
    out[static_cast<std::size_t>(k)] = l;
  }
  out[0] = 0.0;
  return out;
}

BigRational uniform_pmf(const StructureSpec& spec, const ComponentVector& v,
                        const BigRational& theta) {
  const BigRational count = count_N(spec, v);
  if (count == 0) return BigRational(0);
  const BigRational total = p_total_exact(spec, v.n, theta);
  if (total == 0) throw DomainError("no structures of this weight");
  BigRational r = pow_rational(theta, static_cast<unsigned long>(v.components())) * count / total;
  r.canonicalize();
  return r;
}

}  // namespace combstruct
