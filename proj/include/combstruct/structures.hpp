#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "combstruct/numeric.hpp"

namespace combstruct {

enum class Kind { Assembly, Multiset, Selection };

std::string_view kind_name(Kind kind);
Kind parse_kind(std::string_view name);

/// Logarithmic-class constants: m_i / i! ~ kappa y^i / i (assemblies) or
/// m_i ~ kappa y^i / i (multisets, selections).
struct LogClassMeta {
  double kappa = 1.0;
  double y = 1.0;
};

/// Component-size spectrum a = (a_1, ..., a_n). Stored zero-based:
/// counts[i - 1] is the number of components of size i.
struct ComponentVector {
  int n = 0;
  std::vector<std::int64_t> counts;

  ComponentVector() = default;
  ComponentVector(int n_, std::vector<std::int64_t> a) : n(n_), counts(std::move(a)) {}
  static ComponentVector zeros(int n) {
    return {n, std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)};
  }

  std::int64_t at(int i) const { return counts[static_cast<std::size_t>(i - 1)]; }
  std::int64_t& at(int i) { return counts[static_cast<std::size_t>(i - 1)]; }

  /// sum_i i * a_i
  std::int64_t weight() const;
  /// sum_i a_i (number of components K)
  std::int64_t components() const;
  bool complete() const { return weight() == n; }

  auto operator<=>(const ComponentVector&) const = default;
};

/// A decomposable combinatorial class: a construction kind plus the number
/// m_i of component structures of each size i.
///
/// Builtins are generated on demand from closed forms; user sequences are a
/// finite list with m_i = 0 past its end. Instances are immutable, so a
/// spec may be shared freely across threads.
class StructureSpec {
 public:
  enum class Family {
    Permutations,
    Mappings,
    SetPartitions,
    TwoRegularGraphs,
    IntegerPartitions,
    Polynomials,
    DistinctPartitions,
    DistinctOddPartitions,
    SquarefreePolynomials,
    Esf,
    Explicit,
  };

  static StructureSpec permutations();
  static StructureSpec mappings();
  static StructureSpec set_partitions();
  static StructureSpec two_regular_graphs();
  static StructureSpec integer_partitions();
  static StructureSpec polynomials(unsigned long q);
  static StructureSpec distinct_partitions();
  static StructureSpec distinct_odd_partitions();
  static StructureSpec squarefree_polynomials(unsigned long q);
  /// Ewens sampling formula as the generalized assembly m_i = kappa (i-1)!.
  static StructureSpec esf(double kappa);
  static StructureSpec from_sequence(Kind kind, std::vector<double> m, std::string name = "custom",
                                     std::optional<LogClassMeta> meta = std::nullopt);

  Kind kind() const { return kind_; }
  Family family() const { return family_; }
  const std::string& name() const { return name_; }
  const std::optional<LogClassMeta>& meta() const { return meta_; }
  /// q for the polynomial families, kappa for the ESF, 0 otherwise.
  double parameter() const { return param_; }
  const std::vector<double>& explicit_m() const { return explicit_m_; }

  /// Exact m_i (i >= 1).
  BigRational m_exact(int i) const;
  /// log m_i, -inf when m_i = 0. Never overflows.
  double log_m(int i) const;
  /// m_i as a double (may be +inf for very large i).
  double m(int i) const;
  bool m_zero(int i) const { return log_m(i) == kNegInf; }
  /// True when every m_i is a nonnegative integer.
  bool integral_m() const;

 private:
  StructureSpec(Kind kind, Family family, std::string name, double param,
                std::optional<LogClassMeta> meta)
      : kind_(kind), family_(family), name_(std::move(name)), param_(param), meta_(meta) {}

  Kind kind_;
  Family family_;
  std::string name_;
  double param_ = 0.0;
  std::optional<LogClassMeta> meta_;
  std::vector<double> explicit_m_;
};

/// m_of: the component count sequence.
inline BigRational m_of(const StructureSpec& spec, int i) { return spec.m_exact(i); }

/// N(n, a): number of structures of weight n with component spectrum a.
/// Zero unless sum i a_i = n. Exact (rational when m_i is not integral).
BigRational count_N(const StructureSpec& spec, const ComponentVector& v);

/// Exact p_theta(n) = sum_k p(n, k) theta^k for n = 0..n_max, via the
/// generating-function recursions (assemblies: p(n) = sum_i C(n-1, i-1)
/// theta m_i p(n-i); multisets / selections: logarithmic-derivative
/// recursion). p_theta(0) = 1.
std::vector<BigRational> p_total_exact_table(const StructureSpec& spec, int n_max,
                                             const BigRational& theta);
BigRational p_total_exact(const StructureSpec& spec, int n, const BigRational& theta);

/// log p_theta(n) computed in floating point by inverting the conditioning
/// identity P_theta(T_n = n) at the tilt x (chosen by exact mean when
/// absent). Any valid x gives the same value.
double log_p_total(const StructureSpec& spec, int n, double theta,
                   std::optional<double> x = std::nullopt);
inline double p_total(const StructureSpec& spec, int n, double theta,
                      std::optional<double> x = std::nullopt) {
  return std::exp(log_p_total(spec, n, theta, x));
}

/// log p_theta(k) for k = 0..n from a single law of T_n at the tilt x.
std::vector<double> log_p_total_table(const StructureSpec& spec, int n, double theta,
                                      std::optional<double> x = std::nullopt);

/// theta^{K} N(n, a) / p_theta(n); zero for incomplete a.
BigRational uniform_pmf(const StructureSpec& spec, const ComponentVector& v,
                        const BigRational& theta);

}  // namespace combstruct
