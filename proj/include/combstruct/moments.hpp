#pragma once

#include <map>

#include "combstruct/indep_process.hpp"
#include "combstruct/structures.hpp"

namespace combstruct {

/// Orders r_j of a joint falling-factorial moment E prod_j (C_j)_[r_j].
struct MomentSpec {
  std::map<int, int> r;

  /// m = sum_j j r_j
  long weight() const;
  static MomentSpec single(int j, int order) { return MomentSpec{{{j, order}}}; }
};

/// Joint falling-factorial moment of C(n) for an assembly under P_theta.
double factorial_moment_assembly(const StructureSpec& spec, int n, const MomentSpec& r,
                                 const TiltedParams& params);

/// E (C_j(n))_[r] under P_theta for any kind (assemblies delegate to the
/// joint formula).
double factorial_moment_single(const StructureSpec& spec, int n, int j, int r,
                               const TiltedParams& params);

/// Ewens sampling formula: P(C(n) = a) and E prod_j (C_j)_[r_j].
double esf_pmf(int n, double kappa, const ComponentVector& v);
double esf_moment(int n, double kappa, const MomentSpec& r);

/// E theta^{K_n} under the uniform law = p_theta(n) / p(n).
double expected_theta_K(const StructureSpec& spec, int n, double theta);

}  // namespace combstruct
