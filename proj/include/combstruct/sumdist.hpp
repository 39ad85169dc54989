#pragma once

#include <string_view>
#include <vector>

#include "combstruct/indep_process.hpp"
#include "combstruct/structures.hpp"

namespace combstruct {

/// Sorted set of distinct component sizes.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> indices);

  static IndexSet range(int lo, int hi);
  /// "1..5,7" style list; the empty string is the empty set.
  static IndexSet parse(std::string_view text);

  const std::vector<int>& indices() const { return indices_; }
  bool empty() const { return indices_.empty(); }
  std::size_t size() const { return indices_.size(); }
  bool contains(int i) const;
  int max() const { return indices_.empty() ? 0 : indices_.back(); }
  /// [n] minus this set.
  IndexSet complement(int n) const;
  std::string to_string() const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  bool operator==(const IndexSet&) const = default;

 private:
  std::vector<int> indices_;
};

/// pmf on {0..n_max} plus the mass above n_max.
struct PmfVector {
  std::vector<double> p;
  double tail = 0.0;

  int n_max() const { return static_cast<int>(p.size()) - 1; }
  double at(int k) const {
    return (k >= 0 && k < static_cast<int>(p.size())) ? p[static_cast<std::size_t>(k)] : 0.0;
  }
  double mean() const;
  double mean_abs_deviation() const;
  static PmfVector point_mass(int k, int n_max);
};

/// Joint pmf of (U_B, R_B) = (sum_B Z_i, sum_B i Z_i), u rows and r columns.
struct JointPmf {
  std::vector<std::vector<double>> p;
  double tail = 0.0;

  int u_max() const { return static_cast<int>(p.size()) - 1; }
  int n_max() const { return p.empty() ? -1 : static_cast<int>(p.front().size()) - 1; }
  double at(int u, int r) const;
  PmfVector r_marginal() const;
};

enum class SumMethod {
  Auto,         // recursion for assemblies and multisets, convolution for selections
  Recursion,    // logarithmic-derivative recursion (signed for selections)
  Convolution,  // direct truncated convolution of the per-index laws
};

/// Law of R_B = sum_{i in B} i Z_i on 0..n_max under P_theta.
PmfVector weighted_sum_pmf(const StructureSpec& spec, const IndexSet& B, int n_max,
                           const TiltedParams& params, SumMethod method = SumMethod::Auto);

/// Same law in extended precision and range (no clamping, no tail).
std::vector<long double> weighted_sum_pmf_ld(const StructureSpec& spec, const IndexSet& B,
                                             int n_max, const TiltedParams& params,
                                             SumMethod method = SumMethod::Auto);

/// log P_theta(Z_i = 0 for all i in B).
double log_seed(const StructureSpec& spec, const IndexSet& B, const TiltedParams& params);

/// P_theta(T_n = n) from the sum distribution.
double prob_T_eq_n(const StructureSpec& spec, int n, const TiltedParams& params,
                   SumMethod method = SumMethod::Auto);
double log_prob_T_eq_n(const StructureSpec& spec, int n, const TiltedParams& params,
                       SumMethod method = SumMethod::Auto);

/// P_theta(T_n = n) from the closed form with the exact p_theta(n).
double prob_T_eq_n_closed_form(const StructureSpec& spec, int n, const TiltedParams& params);

struct ProbTReport {
  double recursion = 0.0;
  double closed_form = 0.0;
  double relative_gap = 0.0;
};
ProbTReport prob_T_report(const StructureSpec& spec, int n, const TiltedParams& params);

/// Law of (R_B | T_n = n) on 0..n.
PmfVector conditioned_R_pmf(const StructureSpec& spec, const IndexSet& B, int n,
                            const TiltedParams& params);

/// Joint law of (U_B, R_B) truncated to u <= u_max, r <= n_max.
JointPmf joint_sum_pmf(const StructureSpec& spec, const IndexSet& B, int n_max, int u_max,
                       const TiltedParams& params);

struct SignedRecursionCheck {
  double max_gap = 0.0;
  bool flagged = false;
};

/// Compares the signed selection recursion against convolution; flags a
/// gap above 1e-8.
SignedRecursionCheck check_signed_recursion(const StructureSpec& spec, const IndexSet& B,
                                            int n_max, const TiltedParams& params);

}  // namespace combstruct
