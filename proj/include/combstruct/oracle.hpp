#pragma once

#include <functional>
#include <map>
#include <vector>

#include "combstruct/indep_process.hpp"
#include "combstruct/structures.hpp"
#include "combstruct/sumdist.hpp"

namespace combstruct {

inline constexpr int kDefaultEnumerationCap = 25;

/// All a with sum i a_i = n, each once, in lexicographic order of
/// (a_1, ..., a_n).
std::vector<ComponentVector> enumerate_complete(int n, int cap = kDefaultEnumerationCap);

using Outcome = std::vector<std::int64_t>;

/// Exact law on a finite set of outcomes.
struct ExactLaw {
  int n = 0;
  BigRational theta = 1;
  std::map<Outcome, BigRational> entries;

  BigRational total() const;
  BigRational prob(const Outcome& o) const;
};

/// theta^K N(n, a) / p_theta(n) over every complete a.
ExactLaw exact_joint_law(const StructureSpec& spec, int n, const BigRational& theta,
                         int cap = kDefaultEnumerationCap);

/// Pushforward of `law` through h.
ExactLaw exact_functional_law(const ExactLaw& law,
                              const std::function<Outcome(const Outcome&)>& h);

/// Marginal law of (a_i)_{i in B}.
ExactLaw restrict_law(const ExactLaw& law, const IndexSet& B);

/// Law conditioned on an event; throws DomainError on a null event.
ExactLaw condition_law(const ExactLaw& law, const std::function<bool(const Outcome&)>& event);

/// (1/2) sum |p - q| in rationals.
BigRational exact_tv(const ExactLaw& a, const ExactLaw& b);

/// d_TV between a finitely supported exact law and a probability q on a
/// superset of its support: (1/2) sum_supp |p - q| + (1/2)(1 - q(supp)).
double tv_against(const ExactLaw& law, const std::function<double(const Outcome&)>& q);

/// pmf of the independent vector (Z_i)_{i in B} at an outcome ordered as B.
std::function<double(const Outcome&)> product_pmf(const StructureSpec& spec, const IndexSet& B,
                                                  const TiltedParams& params);

/// Exact law of the refined process D(n) = (D_ij), flattened in order
/// (1,1), ..., (1,m_1), (2,1), ...; requires integral m_i.
ExactLaw exact_refined_law(const StructureSpec& spec, int n, const BigRational& theta,
                           int cap = kDefaultEnumerationCap);

/// pmf of the independent refined vector (Y_ij)_{i in B, j <= m_i}.
std::function<double(const Outcome&)> refined_product_pmf(const StructureSpec& spec,
                                                          const IndexSet& B,
                                                          const TiltedParams& params);

/// Positions of the coordinates (i, j), i in B, inside a flattened refined
/// outcome of weight n.
std::vector<std::size_t> refined_positions(const StructureSpec& spec, const IndexSet& B, int n);

/// p(n, k): structures of weight n with k components, k = 0..n.
std::vector<BigRational> p_nk(const StructureSpec& spec, int n, int cap = kDefaultEnumerationCap);

}  // namespace combstruct
