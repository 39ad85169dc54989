#pragma once

#include <string_view>
#include <vector>

#include "combstruct/structures.hpp"

namespace combstruct {

/// Free parameter x and component bias theta of the independent process.
struct TiltedParams {
  double x = 1.0;
  double theta = 1.0;
};

/// Throws DomainError unless x > 0, theta > 0, and (multisets) x < 1 and
/// theta * x < 1.
void validate(const StructureSpec& spec, const TiltedParams& params);

/// Law of a single Z_i or Y_ij. Parameters follow the usual conventions:
/// NegativeBinomial(m, p) has pmf C(m+k-1, k) (1-p)^m p^k, Geometric(p)
/// has pmf (1-p) p^k, Binomial(m, p) and Bernoulli(p) are standard.
/// `log1mp` carries log(1 - p) at full precision.
struct DiscreteLaw {
  enum class Family { Poisson, NegativeBinomial, Binomial, Geometric, Bernoulli };

  Family family = Family::Poisson;
  double lambda = 0.0;
  double m = 0.0;
  double p = 0.0;
  double log1mp = 0.0;

  static DiscreteLaw poisson(double lambda);
  static DiscreteLaw negative_binomial(double m, double p);
  static DiscreteLaw binomial(double m, double p);
  static DiscreteLaw geometric(double p);
  static DiscreteLaw bernoulli(double p);
  /// Binomial/Bernoulli from the odds t = p / (1 - p), accurate for large t.
  static DiscreteLaw binomial_from_odds(double m, double odds);

  double log_pmf(long k) const;
  double pmf(long k) const { return std::exp(log_pmf(k)); }
  double mean() const;
  double variance() const;
  /// Largest k with positive mass, or -1 when unbounded.
  long support_max() const;
  /// pmf(0..k_max), evaluated outward from the mode by ratio recurrences.
  std::vector<long double> pmf_table(long k_max) const;
};

/// Z_i under P_theta: Poisson(theta m_i x^i / i!), NegativeBinomial(m_i,
/// theta x^i) or Binomial(m_i, theta x^i / (1 + theta x^i)).
DiscreteLaw z_law(const StructureSpec& spec, int i, const TiltedParams& params);

/// Y_ij, one of the m_i i.i.d. summands of Z_i: Poisson(theta x^i / i!),
/// Geometric(theta x^i) or Bernoulli(theta x^i / (1 + theta x^i)).
DiscreteLaw refined_y_law(const StructureSpec& spec, int i, const TiltedParams& params);

/// log P_theta(Z_i = 0).
double log_prob_zero(const StructureSpec& spec, int i, const TiltedParams& params);

struct SumMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// E T_n and Var T_n for T_n = sum_{i<=n} i Z_i.
SumMoments sum_moments(const StructureSpec& spec, int n, const TiltedParams& params);

enum class XStrategy {
  ExactMean,
  Logarithmic,
  LogarithmicTilted,
  SetPartition,
  IntegerPartition,
  DistinctPartition,
  DistinctOddPartition,
};

XStrategy parse_strategy(std::string_view name);
std::string_view strategy_name(XStrategy s);

/// Positive root of x e^x = v.
double solve_x_exp_x(double v);

/// Pick the free parameter x.
///
/// ExactMean solves E_theta T_n = n by bracketing (doubling) and bisection
/// on log x followed by Newton polishing with d E T_n / d log x = Var T_n.
/// The closed-form strategies return the usual heuristics:
///   Logarithmic          x = 1/y
///   LogarithmicTilted    x = exp(-c/n)/y with c = kappa theta - 1
///   SetPartition         x e^x = n
///   IntegerPartition     x = exp(-pi / sqrt(6n))
///   DistinctPartition    x = exp(-pi / sqrt(12n))
///   DistinctOddPartition x = exp(-pi / sqrt(24n))
double choose_x(const StructureSpec& spec, int n, double theta, XStrategy strategy);

}  // namespace combstruct
