#include "doctest.h"

#include "combstruct/sampler.hpp"
#include "combstruct/sumdist.hpp"

using namespace combstruct;

TEST_CASE("rng is reproducible and uniform in range") {
  Rng a({9, 2}, 5), b({9, 2}, 5), c({9, 3}, 5);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(a.below(7) < 7);
  }
}

TEST_CASE("n = 1") {
  const auto spec = StructureSpec::set_partitions();
  const auto batch = sample_components(spec, 1, {0.7, 1.0}, 500, {1, 0});
  for (const auto& a : batch.samples) CHECK(a.at(1) == 1);
  CHECK(batch.prob_T == doctest::Approx(0.7 * std::exp(-0.7)).epsilon(1e-12));
}

TEST_CASE("acceptance rate for permutations of 3") {
  const auto batch = sample_components(StructureSpec::permutations(), 3, {1.0, 1.0}, 16000, {7, 0});
  const double p = std::exp(-11.0 / 6);
  CHECK(batch.prob_T == doctest::Approx(p).epsilon(1e-12));
  const double trials = static_cast<double>(batch.trials);
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::fabs(static_cast<double>(batch.accepted) / trials - p) < 3 * se);
}

TEST_CASE("determinism across thread counts") {
  const auto spec = StructureSpec::integer_partitions();
  const TiltedParams params{choose_x(spec, 40, 1.0, XStrategy::ExactMean), 1.0};
  const auto a = sample_components(spec, 40, params, 9000, {3, 1}, 1);
  const auto b = sample_components(spec, 40, params, 9000, {3, 1}, 3);
  const auto c = sample_components(spec, 40, params, 9000, {3, 2}, 1);
  CHECK(a.samples == b.samples);
  CHECK(a.trials == b.trials);
  CHECK(a.samples != c.samples);
  for (const auto& s : a.samples) CHECK(s.weight() == 40);
}

TEST_CASE("guard on tiny acceptance") {
  CHECK_THROWS_AS(sample_components(StructureSpec::permutations(), 200, {0.05, 1.0}, 1, {1, 0}), NumericGuard);
}

TEST_CASE("refined splits") {
  SUBCASE("m_i = 1 gives D = C") {
    const auto draws = sample_refined(StructureSpec::integer_partitions(), 12, {0.7, 1.0}, 200, {2, 0});
    for (const auto& d : draws) {
      for (int i = 1; i <= 12; ++i) {
        const auto& cells = d.cells[static_cast<std::size_t>(i - 1)];
        if (d.c.at(i) == 0) {
          CHECK(cells.empty());
        } else {
          REQUIRE(cells.size() == 1);
          CHECK(cells[0].first == 0);
          CHECK(cells[0].second == d.c.at(i));
        }
      }
    }
  }
  const auto split_freq = [](Kind kind) {
    const auto spec = StructureSpec::from_sequence(kind, {2});
    const auto draws = sample_refined(spec, 2, {0.5, 1.0}, 60000, {4, 0});
    std::array<double, 3> f{};  // count in cell 0 = 2, 1, 0
    for (const auto& d : draws) {
      std::int64_t first = 0;
      for (const auto& [cell, count] : d.cells[0]) {
        if (cell == 0) first = count;
      }
      f[static_cast<std::size_t>(2 - first)] += 1.0 / draws.size();
    }
    return f;
  };
  const auto a = split_freq(Kind::Assembly);
  CHECK(a[0] == doctest::Approx(0.25).epsilon(0.03));
  CHECK(a[1] == doctest::Approx(0.5).epsilon(0.03));
  CHECK(a[2] == doctest::Approx(0.25).epsilon(0.03));
  const auto m = split_freq(Kind::Multiset);
  for (double v : m) CHECK(v == doctest::Approx(1.0 / 3).epsilon(0.03));
  const auto s = split_freq(Kind::Selection);
  CHECK(s[1] == doctest::Approx(1.0));
}

TEST_CASE("statistics") {
  const int n = 9;
  const auto stats = statistics({ComponentVector(n, {n, 0, 0, 0, 0, 0, 0, 0, 0})});
  CHECK(stats[0].name == "K");
  CHECK(stats[0].mean == n);
  CHECK(stats[1].mean == 1);
  CHECK(stats[2].mean == 1);
  CHECK(stats[3].mean == 1);
  CHECK(stats[4].mean == 1);
  CHECK_THROWS(statistics({}));

  const int m = 30;
  const auto batch = sample_components(StructureSpec::permutations(), m, {1.0, 1.0}, 20000, {11, 0});
  const auto perm = statistics(batch.samples);
  CHECK(std::fabs(perm[4].mean - (m + 1) / 2.0) < 4 * perm[4].std_error);
  double harmonic = 0;
  for (int i = 1; i <= m; ++i) harmonic += 1.0 / i;
  CHECK(std::fabs(perm[0].mean - harmonic) < 4 * perm[0].std_error);
}

TEST_CASE("distinct block sizes of set partitions") {
  const int n = 400;
  const auto spec = StructureSpec::set_partitions();
  const double x = solve_x_exp_x(n);
  const auto batch = sample_components(spec, n, {x, 1.0}, 2000, {13, 0});
  const double J = statistics(batch.samples)[2].mean;
  double independent = 0;
  for (int i = 1; i <= n; ++i) independent += -std::expm1(log_prob_zero(spec, i, {x, 1.0}));
  CHECK(std::fabs(J / independent - 1) < 0.05);
  // J_n / log n tends to e only slowly; at n = 400 the ratio is still near 1.66
  MESSAGE("J_n / log n = " << J / std::log(n));
}
