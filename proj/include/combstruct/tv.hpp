#pragma once

#include <optional>

#include "combstruct/limits.hpp"
#include "combstruct/sumdist.hpp"

namespace combstruct {

/// Total variation with unresolved tails: the common range 0..min(n_max)
/// is summed exactly, the remaining mass of each side is only known in
/// aggregate, giving [body + |T_p - T_q| / 2, body + (T_p + T_q) / 2].
struct TvBracket {
  double lower = 0.0;
  double upper = 0.0;
};

TvBracket tv_discrete(const PmfVector& p, const PmfVector& q);

/// sum_{i >= 1} |P(X >= i) - P(Y >= i)| over the represented range.
double wasserstein_discrete(const PmfVector& p, const PmfVector& q);

struct TvReport {
  double exact = 0.0;      // d_TV(C_B, Z_B)
  double lower = 0.0;      // P(R_B > n)
  double tail_term = 0.0;  // P(R_B > n) / 2
  double body_sum = 0.0;   // (1/2) sum_{r <= n} P(R_B = r) |P(S_B = n - r) / P(T_n = n) - 1|
  double prob_T = 0.0;
  std::optional<double> heuristic;
};

/// Exact d_TV between C_B(n) and Z_B from the laws of R_B and S_B.
TvReport tv_CB_ZB(const StructureSpec& spec, const IndexSet& B, int n, const TiltedParams& params);

struct ConditionedBounds {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Bounds on d_TV(C*_B, Z*_B) after conditioning on an event of
/// probability p under Z and q under C, from d_A and d_B.
ConditionedBounds tv_conditioned_bounds(double p, double q, double d_A, double d_B);

/// (1/2) |g'(1-) / g(1)| E|R_B - E R_B| / n with g'(1-)/g(1) = kappa - 1 - c.
double tv_heuristic(const StructureSpec& spec, const IndexSet& B, int n, const TiltedParams& params,
                    const LimitLaw& limit);

/// E h(Z) / P(T = t), an upper bound for E h(C) when h >= 0.
double overpower_bound(double expectation_Z, double prob_T);

/// sqrt(2 pi m) 2^{m-1} / (m-1)! + 1/m! + 3 (x/e)^{-x}, m = floor(x): the
/// known bound d_b(n) <= F(n/b) for permutations.
double permutation_tv_envelope(double x);

struct ComponentConditionedTv {
  double vs_independent = 0.0;  // d_TV(L_1(C_B | K = k), L_theta(Z_B))
  double vs_biased = 0.0;       // d_TV(L_1(C_B | K = k), L_theta(C_B))
};

/// Distances for structures conditioned on having k components, through
/// the joint laws of (U_B, R_B) = (sum_B Z_i, sum_B i Z_i).
ComponentConditionedTv tv_given_components(const StructureSpec& spec, const IndexSet& B, int n,
                                           int k, const TiltedParams& params);

}  // namespace combstruct
