#include "doctest.h"

#include "combstruct/oracle.hpp"
#include "combstruct/sumdist.hpp"

using namespace combstruct;

TEST_CASE("IndexSet parsing") {
  CHECK(IndexSet::parse("1..3,7").indices() == std::vector<int>{1, 2, 3, 7});
  CHECK(IndexSet::parse("").empty());
  CHECK(IndexSet::parse("5,2,2").indices() == std::vector<int>{2, 5});
  CHECK(IndexSet::parse("1..4,6").to_string() == "1..4,6");
  CHECK(IndexSet::range(2, 4).complement(5).indices() == std::vector<int>{1, 5});
  CHECK_THROWS_AS(IndexSet::parse("0"), DomainError);
  CHECK_THROWS_AS(IndexSet::parse("3..1"), DomainError);
  CHECK_THROWS_AS(IndexSet::parse("a"), DomainError);
}

TEST_CASE("weighted_sum_pmf examples") {
  const auto perm = StructureSpec::permutations();
  const auto p = weighted_sum_pmf(perm, IndexSet::range(1, 1), 20, {1.0, 1.0});
  for (int k = 0; k <= 20; ++k) CHECK(p.at(k) == doctest::Approx(std::exp(-1.0 - std::lgamma(k + 1.0))).epsilon(1e-13));
  const auto q = weighted_sum_pmf(perm, IndexSet::range(1, 3), 3, {1.0, 1.0});
  CHECK(q.at(3) == doctest::Approx(std::exp(-11.0 / 6)).epsilon(1e-13));
  const auto e = weighted_sum_pmf(perm, IndexSet{}, 5, {1.0, 1.0});
  CHECK(e.at(0) == 1.0);
  CHECK(e.tail == 0.0);
}

TEST_CASE("sum laws are normalized") {
  for (const auto& spec : {StructureSpec::mappings(), StructureSpec::polynomials(2), StructureSpec::distinct_partitions()}) {
    const TiltedParams params{choose_x(spec, 40, 1.0, XStrategy::ExactMean), 1.0};
    const auto p = weighted_sum_pmf(spec, IndexSet::parse("1..3,9"), 40, params);
    double s = p.tail;
    for (double v : p.p) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("P(T_n = n)") {
  CHECK(prob_T_eq_n(StructureSpec::permutations(), 3, {1.0, 1.0}) == doctest::Approx(std::exp(-11.0 / 6)).epsilon(1e-13));
  const int n = 50;
  const auto sp = StructureSpec::set_partitions();
  const double p = prob_T_eq_n(sp, n, {solve_x_exp_x(n), 1.0});
  const double asymptotic = 1 / std::sqrt(2 * M_PI * n * std::log(n));
  CHECK(std::fabs(p / asymptotic - 1) < 0.15);
  for (const auto& spec : {StructureSpec::permutations(), StructureSpec::integer_partitions(), StructureSpec::squarefree_polynomials(2)}) {
    for (double theta : {0.5, 2.0}) {
      const double x = choose_x(spec, 120, theta, XStrategy::ExactMean);
      CHECK(prob_T_report(spec, 120, {x, theta}).relative_gap < 1e-9);
    }
  }
}

TEST_CASE("conditioned_R_pmf") {
  const auto perm = StructureSpec::permutations();
  const auto full = conditioned_R_pmf(perm, IndexSet::range(1, 6), 6, {1.0, 1.0});
  CHECK(full.at(6) == doctest::Approx(1.0));
  CHECK(conditioned_R_pmf(perm, IndexSet{}, 6, {1.0, 1.0}).at(0) == doctest::Approx(1.0));

  const IndexSet B = IndexSet::parse("3,4");
  const auto cond = conditioned_R_pmf(perm, B, 4, {1.0, 1.0});
  const ExactLaw law = exact_functional_law(exact_joint_law(perm, 4, 1), [](const Outcome& o) {
    return Outcome{3 * o[2] + 4 * o[3]};
  });
  for (int r = 0; r <= 4; ++r) CHECK(cond.at(r) == doctest::Approx(law.prob({r}).get_d()).epsilon(1e-12));
}

TEST_CASE("joint_sum_pmf") {
  const auto perm = StructureSpec::permutations();
  const auto j1 = joint_sum_pmf(perm, IndexSet::range(1, 1), 8, 8, {1.0, 1.0});
  for (int u = 0; u <= 8; ++u) {
    for (int r = 0; r <= 8; ++r) {
      if (u != r) CHECK(j1.at(u, r) == 0.0);
    }
  }
  const auto spec = StructureSpec::mappings();
  const TiltedParams params{choose_x(spec, 30, 1.0, XStrategy::ExactMean), 1.0};
  const IndexSet B = IndexSet::parse("1,2,5");
  const auto joint = joint_sum_pmf(spec, B, 30, 30, params);
  const auto marginal = joint.r_marginal();
  const auto direct = weighted_sum_pmf(spec, B, 30, params);
  for (int r = 0; r <= 30; ++r) CHECK(marginal.at(r) == doctest::Approx(direct.at(r)).epsilon(1e-12));

  // P(U = k | T = 4) for B = [4] is the law of the number of cycles.
  const auto j4 = joint_sum_pmf(perm, IndexSet::range(1, 4), 4, 4, {1.0, 1.0});
  const double norm = j4.r_marginal().at(4);
  const double cycles[] = {0, 6.0 / 24, 11.0 / 24, 6.0 / 24, 1.0 / 24};
  for (int k = 0; k <= 4; ++k) CHECK(j4.at(k, 4) / norm == doctest::Approx(cycles[k]).epsilon(1e-12));
}

TEST_CASE("recursion and convolution agree") {
  const auto spec = StructureSpec::polynomials(3);
  const TiltedParams params{choose_x(spec, 80, 1.5, XStrategy::ExactMean), 1.5};
  const IndexSet B = IndexSet::parse("2..7,11,40");
  const auto a = weighted_sum_pmf(spec, B, 80, params, SumMethod::Recursion);
  const auto b = weighted_sum_pmf(spec, B, 80, params, SumMethod::Convolution);
  for (int k = 0; k <= 80; ++k) CHECK(a.at(k) == doctest::Approx(b.at(k)).epsilon(1e-10));
  CHECK_FALSE(check_signed_recursion(StructureSpec::distinct_partitions(), IndexSet::range(1, 30), 30, {0.9, 1.0}).flagged);
}
