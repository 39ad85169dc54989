#include "combstruct/limits.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "combstruct/sumdist.hpp"

namespace combstruct {

namespace {

using boost::math::quadrature::gauss_kronrod;

double integrate(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
  if (!(error <= 1e-10 * std::max(1.0, std::fabs(v))) || !std::isfinite(v)) {
    throw NumericGuard("quadrature did not converge");
  }
  return v;
}

/// int_0^1 (1 - e^{-s x}) e^{-c x} / x dx
double log_psi_integral(double c, double s) {
  if (s == 0.0) return 0.0;
  return integrate(
      [c, s](double x) {
        const double sx = s * x;
        const double ratio = sx == 0.0 ? 1.0 : -std::expm1(-sx) / sx;
        return s * ratio * std::exp(-c * x);
      },
      0.0, 1.0);
}

}  // namespace

double laplace_psi(const LimitLaw& law, double s) {
  if (!(law.kappa > 0.0)) throw DomainError("kappa must be > 0");
  if (!(s >= 0.0)) throw DomainError("s must be >= 0");
  return std::exp(-law.kappa * log_psi_integral(law.c, s));
}

double psi(double kappa, double s) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  return std::exp(-kappa * log_psi_integral(0.0, s));
}

double limit_density(const LimitLaw& law, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("density is explicit only on [0, 1]");
  const double k = law.kappa;
  if (z == 0.0) {
    if (k < 1.0) return std::numeric_limits<double>::infinity();
    if (k > 1.0) return 0.0;
  }
  const double log_z = z == 0.0 ? 0.0 : std::log(z);
  return std::exp(-kEulerGamma * k - law.c * z + (k - 1.0) * log_z - std::lgamma(k)) /
         psi(k, law.c);
}

double limit_cdf(const LimitLaw& law, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("cdf is explicit only on [0, 1]");
  if (z == 0.0) return 0.0;
  const double k = law.kappa;
  const double w = law.c * z;
  // int_0^z e^{-ct} t^{kappa-1} dt = (z^kappa / kappa) M(kappa, kappa + 1, -w); the series is
  // summed in whichever Kummer form has positive terms.
  double sum = 1.0;
  double term = 1.0;
  for (int j = 1; j < 100000; ++j) {
    term *= w >= 0.0 ? w / (k + j) : -w * (k + j - 1) / (j * (k + j));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  const double log_series = std::log(sum) - (w >= 0.0 ? w : 0.0);
  return std::exp(k * std::log(z) - std::log(k) - kEulerGamma * k - std::lgamma(k) + log_series) /
         psi(k, law.c);
}

double limit_mean(const LimitLaw& law) {
  if (law.c == 0.0) return law.kappa;
  return law.kappa * -std::expm1(-law.c) / law.c;
}

LimitLaw limit_law_for(const StructureSpec& spec, int n, const TiltedParams& params) {
  if (!spec.meta()) throw DomainError("limit law needs logarithmic-class constants (kappa, y)");
  const LogClassMeta& meta = *spec.meta();
  return {meta.kappa * params.theta, -n * std::log(params.x * meta.y)};
}

LimitCheck limit_law_check(const StructureSpec& spec, int n, const TiltedParams& params,
                           const std::vector<double>& grid) {
  LimitCheck out;
  out.law = limit_law_for(spec, n, params);
  const PmfVector t = weighted_sum_pmf(spec, IndexSet::range(1, n), n, params);
  out.n_prob = n * t.at(n);
  out.predicted = limit_density(out.law, 1.0);
  out.relative_gap = std::fabs(out.n_prob - out.predicted) / out.predicted;
  for (double z : grid) {
    LimitCdfRow row;
    row.z = z;
    const int top = static_cast<int>(std::floor(z * n + 1e-9));
    CompensatedSum s;
    for (int k = 0; k <= top; ++k) s.add(t.at(k));
    row.exact_cdf = s.value();
    row.limit_cdf = limit_cdf(out.law, z);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace combstruct
