#include "doctest.h"

#include "combstruct/moments.hpp"
#include "combstruct/oracle.hpp"

using namespace combstruct;

namespace {

double oracle_moment(const ExactLaw& law, const MomentSpec& r) {
  BigRational s(0);
  for (const auto& [a, p] : law.entries) {
    BigInt f = 1;
    for (const auto& [j, order] : r.r) {
      const auto c = j <= static_cast<int>(a.size()) ? a[static_cast<std::size_t>(j - 1)] : 0;
      for (int t = 0; t < order; ++t) f *= (c - t);
    }
    s += p * BigRational(f);
  }
  return s.get_d();
}

}  // namespace

TEST_CASE("assembly moments") {
  const auto perm = StructureSpec::permutations();
  CHECK(factorial_moment_assembly(perm, 5, MomentSpec{{{3, 2}}}, {1.0, 1.0}) == 0.0);
  for (int n = 1; n <= 8; ++n) {
    for (int j = 1; j <= n; ++j) {
      CHECK(factorial_moment_single(perm, n, j, 1, {1.0, 1.0}) == doctest::Approx(1.0 / j).epsilon(1e-12));
    }
  }
  CHECK(factorial_moment_single(StructureSpec::esf(1.0), 2, 1, 1, {1.0, 2.0}) == doctest::Approx(4.0 / 3).epsilon(1e-12));
}

TEST_CASE("joint assembly moments vs oracle") {
  const auto spec = StructureSpec::mappings();
  for (int n = 2; n <= 9; ++n) {
    const ExactLaw law = exact_joint_law(spec, n, BigRational(3, 2));
    const TiltedParams params{choose_x(spec, n, 1.5, XStrategy::ExactMean), 1.5};
    for (const MomentSpec& r : {MomentSpec{{{1, 1}, {2, 1}}}, MomentSpec{{{1, 2}, {3, 1}}}, MomentSpec{{{2, 2}}}}) {
      CHECK(factorial_moment_assembly(spec, n, r, params) == doctest::Approx(oracle_moment(law, r)).epsilon(1e-10));
    }
  }
}

TEST_CASE("single-index moments examples") {
  CHECK(factorial_moment_single(StructureSpec::integer_partitions(), 4, 2, 1, {0.5, 1.0}) ==
        doctest::Approx(0.6).epsilon(1e-12));
  const auto dp = StructureSpec::distinct_partitions();
  CHECK(factorial_moment_single(dp, 3, 3, 1, {0.8, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(factorial_moment_single(dp, 9, 2, 2, {0.8, 1.0}) == 0.0);
}

TEST_CASE("ESF formulas") {
  CHECK(esf_pmf(3, 1.0, {3, {0, 0, 1}}) == doctest::Approx(1.0 / 3));
  CHECK(esf_pmf(2, 2.0, {2, {2, 0}}) == doctest::Approx(2.0 / 3));
  for (double kappa : {0.5, 2.0, 5.0}) {
    for (int n = 1; n <= 10; ++n) {
      const ExactLaw law = exact_joint_law(StructureSpec::esf(1.0), n, rational_from_double(kappa));
      double total = 0;
      for (const auto& [a, p] : law.entries) {
        const double pmf = esf_pmf(n, kappa, {n, a});
        CHECK(pmf == doctest::Approx(p.get_d()).epsilon(1e-12));
        total += pmf;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 1; j <= n; ++j) {
        for (int r = 1; r <= 3; ++r) {
          CHECK(esf_moment(n, kappa, MomentSpec::single(j, r)) ==
                doctest::Approx(oracle_moment(law, MomentSpec::single(j, r))).epsilon(1e-10));
        }
      }
    }
  }
  // m = n: the binomial ratio reduces to 1 / C(kappa + n - 1, n)
  const double kappa = 2.5;
  const int n = 6;
  const double expected = std::pow(kappa / 6, 1) * std::exp(std::lgamma(n + 1.0) + std::lgamma(kappa) - std::lgamma(kappa + n));
  CHECK(esf_moment(n, kappa, MomentSpec::single(6, 1)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("expected theta^K") {
  CHECK(expected_theta_K(StructureSpec::set_partitions(), 20, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expected_theta_K(StructureSpec::permutations(), 3, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
  double last = 0;
  for (double theta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double v = expected_theta_K(StructureSpec::integer_partitions(), 30, theta);
    CHECK(v > last);
    last = v;
  }
}
