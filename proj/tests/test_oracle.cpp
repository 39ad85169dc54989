#include "doctest.h"

#include "combstruct/oracle.hpp"

using namespace combstruct;

TEST_CASE("enumeration") {
  CHECK(enumerate_complete(1).size() == 1);
  CHECK(enumerate_complete(4).size() == 5);
  CHECK(enumerate_complete(5).size() == 7);
  CHECK(enumerate_complete(20).size() == 627);
  for (const auto& a : enumerate_complete(9)) CHECK(a.complete());
  CHECK_THROWS_AS(enumerate_complete(26), DomainError);
}

TEST_CASE("exact joint law") {
  const ExactLaw perm = exact_joint_law(StructureSpec::permutations(), 3, 1);
  CHECK(perm.entries.size() == 3);
  CHECK(perm.prob({3, 0, 0}) == BigRational(1, 6));
  CHECK(perm.prob({1, 1, 0}) == BigRational(1, 2));
  CHECK(perm.prob({0, 0, 1}) == BigRational(1, 3));
  CHECK(perm.total() == 1);

  const ExactLaw ip = exact_joint_law(StructureSpec::integer_partitions(), 3, 1);
  for (const auto& [a, p] : ip.entries) CHECK(p == BigRational(1, 3));

  const BigRational theta(3);
  const ExactLaw tilted = exact_joint_law(StructureSpec::permutations(), 3, theta);
  BigRational norm(0);
  for (const auto& [a, p] : perm.entries) norm += p * pow_rational(theta, static_cast<unsigned long>(a[0] + a[1] + a[2]));
  for (const auto& [a, p] : perm.entries) {
    CHECK(tilted.prob(a) == p * pow_rational(theta, static_cast<unsigned long>(a[0] + a[1] + a[2])) / norm);
  }
}

TEST_CASE("functionals, restriction and tv") {
  const ExactLaw law = exact_joint_law(StructureSpec::set_partitions(), 6, BigRational(1, 2));
  const ExactLaw same = exact_functional_law(law, [](const Outcome& o) { return o; });
  CHECK(same.entries == law.entries);
  CHECK(exact_tv(law, law) == 0);

  const IndexSet B = IndexSet::parse("1,3");
  const ExactLaw restricted = restrict_law(law, B);
  BigRational p10(0);
  for (const auto& [a, p] : law.entries) {
    if (a[0] == 1 && a[2] == 0) p10 += p;
  }
  CHECK(restricted.prob({1, 0}) == p10);

  const ExactLaw derange = condition_law(exact_joint_law(StructureSpec::permutations(), 5, 1),
                                         [](const Outcome& o) { return o[0] == 0; });
  CHECK(derange.total() == 1);
  CHECK_THROWS_AS(condition_law(law, [](const Outcome&) { return false; }), DomainError);
}

TEST_CASE("p(n, k)") {
  // unsigned Stirling numbers of the first kind, n = 5
  const auto s = p_nk(StructureSpec::permutations(), 5);
  const int expected[] = {0, 24, 50, 35, 10, 1};
  for (int k = 0; k <= 5; ++k) CHECK(s[k] == expected[k]);
  // Stirling numbers of the second kind, n = 6
  const auto S = p_nk(StructureSpec::set_partitions(), 6);
  const int second[] = {0, 1, 31, 90, 65, 15, 1};
  for (int k = 0; k <= 6; ++k) CHECK(S[k] == second[k]);
}

TEST_CASE("refined law") {
  const auto spec = StructureSpec::from_sequence(Kind::Multiset, {2, 1});
  const ExactLaw fine = exact_refined_law(spec, 2, 1);
  // weight 2: {x,x}, {x,y}, {y,y}, {z} with equal weight
  CHECK(fine.entries.size() == 4);
  for (const auto& [o, p] : fine.entries) CHECK(p == BigRational(1, 4));
  const auto pos = refined_positions(spec, IndexSet::parse("1"), 2);
  CHECK(pos == std::vector<std::size_t>{0, 1});
}
