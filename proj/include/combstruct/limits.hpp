#pragma once

#include <vector>

#include "combstruct/indep_process.hpp"
#include "combstruct/structures.hpp"

namespace combstruct {

/// X_{kappa,c}: the limit of T_n / n for a logarithmic class tilted by
/// x = e^{-c/n} / y. c = 0 gives X_kappa.
struct LimitLaw {
  double kappa = 1.0;
  double c = 0.0;
};

/// exp(-kappa int_0^1 (1 - e^{-s x}) e^{-c x} / x dx), the Laplace transform
/// psi_c(s) of X_{kappa,c}. Adaptive Gauss-Kronrod; throws NumericGuard when
/// the error estimate exceeds 1e-10.
double laplace_psi(const LimitLaw& law, double s);

/// psi(s) of the untilted law X_kappa (defined for any real s).
double psi(double kappa, double s);

/// e^{-gamma kappa} e^{-c z} z^{kappa-1} / (Gamma(kappa) psi(c)) on [0, 1].
double limit_density(const LimitLaw& law, double z);

/// int_0^z g_c(t) dt for z in [0, 1].
double limit_cdf(const LimitLaw& law, double z);

/// E X_{kappa,c} = kappa (1 - e^{-c}) / c (kappa at c = 0).
double limit_mean(const LimitLaw& law);

/// Law implied by a tilt: kappa theta and c = -n log(x y).
LimitLaw limit_law_for(const StructureSpec& spec, int n, const TiltedParams& params);

struct LimitCdfRow {
  double z = 0.0;
  double exact_cdf = 0.0;  // P(T_n <= z n)
  double limit_cdf = 0.0;  // int_0^z g_c
};

struct LimitCheck {
  LimitLaw law;
  double n_prob = 0.0;      // n P(T_n = n)
  double predicted = 0.0;   // g_c(1)
  double relative_gap = 0.0;
  std::vector<LimitCdfRow> rows;
};

/// Local-limit comparison of n P(T_n = n) with g_c(1), plus the cdf of T_n/n
/// against the limit cdf on `grid` (values in (0, 1]).
LimitCheck limit_law_check(const StructureSpec& spec, int n, const TiltedParams& params,
                           const std::vector<double>& grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7,
                                                              0.8, 0.9, 1.0});

}  // namespace combstruct
