// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "combstruct/limits.hpp"
#include "combstruct/moments.hpp"
#include "combstruct/oracle.hpp"
#include "combstruct/sampler.hpp"
#include "combstruct/tv.hpp"

using namespace combstruct;

namespace {

struct Outcome1 {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<StructureSpec> kinds() {
  return {StructureSpec::permutations(), StructureSpec::integer_partitions(), StructureSpec::distinct_partitions()};
}

std::vector<StructureSpec> builtins() {
  return {StructureSpec::permutations(),        StructureSpec::mappings(),
          StructureSpec::set_partitions(),      StructureSpec::two_regular_graphs(),
          StructureSpec::integer_partitions(),  StructureSpec::polynomials(2),
          StructureSpec::distinct_partitions(), StructureSpec::distinct_odd_partitions(),
          StructureSpec::squarefree_polynomials(2), StructureSpec::esf(0.5)};
}

const std::vector<BigRational> kThetas{BigRational(1, 2), BigRational(1), BigRational(2)};

TiltedParams tilt(const StructureSpec& spec, int n, double theta) {
  try {
    return {choose_x(spec, n, theta, XStrategy::ExactMean), theta};
  } catch (const DomainError&) {
    return {0.5 / std::max(1.0, theta), theta};
  }
}

IndexSet from_mask(unsigned mask, int n) {
  std::vector<int> idx;
  for (int i = 1; i <= n; ++i) {
    if (mask & (1u << (i - 1))) idx.push_back(i);
  }
  return IndexSet(idx);
}

Outcome1 conditioning_identity() {
  double worst = 0;
  for (const auto& spec : kinds()) {
    for (const auto& theta : kThetas) {
      for (int n = 1; n <= 10; ++n) {
        const TiltedParams params = tilt(spec, n, theta.get_d());
        const ExactLaw law = exact_joint_law(spec, n, theta);
        const double pT = prob_T_eq_n(spec, n, params);
        std::vector<DiscreteLaw> z;
        for (int i = 1; i <= n; ++i) z.push_back(z_law(spec, i, params));
        for (const auto& a : enumerate_complete(n)) {
          double log_p = 0;
          for (int i = 1; i <= n; ++i) log_p += z[static_cast<std::size_t>(i - 1)].log_pmf(static_cast<long>(a.at(i)));
          worst = std::max(worst, std::fabs(std::exp(log_p) / pT - law.prob(a.counts).get_d()));
        }
      }
    }
  }
  return {worst <= 1e-10, "max abs gap " + fmt("%.3g", worst)};
}

Outcome1 prob_T_identities() {
  double worst = 0;
  for (const auto& spec : builtins()) {
    for (int n : {50, 200}) {
      const double x = choose_x(spec, n, 1.0, XStrategy::ExactMean);
      for (double xx : {x, 0.9 * x}) worst = std::max(worst, prob_T_report(spec, n, {xx, 1.0}).relative_gap);
    }
  }
  return {worst <= 1e-9, "max relative gap " + fmt("%.3g", worst)};
}

Outcome1 tv_identity() {
  double worst = 0;
  int count = 0;
  std::mt19937_64 gen(20240601);
  for (const auto& spec : kinds()) {
    for (const auto& theta : kThetas) {
      for (int n = 1; n <= 6; ++n) {
        const ExactLaw law = exact_joint_law(spec, n, theta);
        const TiltedParams params = tilt(spec, n, theta.get_d());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          const IndexSet B = from_mask(mask, n);
          const double oracle = tv_against(restrict_law(law, B), product_pmf(spec, B, params));
          worst = std::max(worst, std::fabs(oracle - tv_CB_ZB(spec, B, n, params).exact));
          ++count;
        }
      }
    }
    for (int n : {8, 10}) {
      const ExactLaw law = exact_joint_law(spec, n, 1);
      const TiltedParams params = tilt(spec, n, 1.0);
      for (int rep = 0; rep < 50; ++rep) {
        const IndexSet B = from_mask(static_cast<unsigned>(gen() % (1u << n)), n);
        const double oracle = tv_against(restrict_law(law, B), product_pmf(spec, B, params));
        worst = std::max(worst, std::fabs(oracle - tv_CB_ZB(spec, B, n, params).exact));
        ++count;
      }
    }
  }
  return {worst <= 1e-10, std::to_string(count) + " sets, max abs gap " + fmt("%.3g", worst)};
}

Outcome1 refined_chain() {
  double worst = 0;
  const std::vector<StructureSpec> specs{StructureSpec::from_sequence(Kind::Multiset, {2, 1, 1, 1, 1, 1}),
                                         StructureSpec::from_sequence(Kind::Assembly, {1, 2, 1, 1, 1, 1})};
  for (const auto& spec : specs) {
    const TiltedParams params{spec.kind() == Kind::Multiset ? 0.5 : 1.0, 1.0};
    for (int n = 1; n <= 6; ++n) {
      const ExactLaw coarse = exact_joint_law(spec, n, 1);
      const ExactLaw fine = exact_refined_law(spec, n, 1);
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const IndexSet B = from_mask(mask, n);
        const auto positions = refined_positions(spec, B, n);
        const ExactLaw fine_B = exact_functional_law(fine, [&](const Outcome& o) {
          Outcome r;
          for (auto p : positions) r.push_back(o[p]);
          return r;
        });
        const double d_refined = tv_against(fine_B, refined_product_pmf(spec, B, params));
        const double d_coarse = tv_against(restrict_law(coarse, B), product_pmf(spec, B, params));
        const double d_sum =
            tv_discrete(conditioned_R_pmf(spec, B, n, params), weighted_sum_pmf(spec, B, n, params)).lower;
        worst = std::max({worst, std::fabs(d_refined - d_coarse), std::fabs(d_coarse - d_sum)});
      }
    }
  }
  return {worst <= 1e-10, "max abs gap " + fmt("%.3g", worst)};
}

Outcome1 conditioned_bounds() {
  int violations = 0;
  int cases = 0;
  const auto check = [&](const StructureSpec& spec, const IndexSet& A, int n, int b) {
    const TiltedParams params{1.0, 1.0};
    const IndexSet B = IndexSet::range(1, b);
    const auto event = [&A](const Outcome& o) {
      for (std::size_t k = 0; k < A.size(); ++k) {
        if (o[k] != 0) return false;
      }
      return true;
    };
    const ExactLaw cb = restrict_law(exact_joint_law(spec, n, 1), B);
    BigRational q(0);
    for (const auto& [o, pr] : cb.entries) {
      if (event(o)) q += pr;
    }
    if (q == 0) return;
    const ExactLaw cstar = condition_law(cb, event);
    double p = 1;
    for (int i : A) p *= std::exp(log_prob_zero(spec, i, params));
    const auto zb = product_pmf(spec, B, params);
    const double d_star = tv_against(cstar, [&](const Outcome& o) { return event(o) ? zb(o) / p : 0.0; });
    const auto bounds =
        tv_conditioned_bounds(p, q.get_d(), tv_CB_ZB(spec, A, n, params).exact, tv_CB_ZB(spec, B, n, params).exact);
    const double slack = 1e-12;
    ++cases;
    if (!(d_star <= bounds.b0 + slack && bounds.b0 <= bounds.b2 + slack)) ++violations;
  };
  for (int n = 2; n <= 10; ++n) {
    for (int b = 1; b <= n; ++b) check(StructureSpec::permutations(), IndexSet::range(1, 1), n, b);
    for (int b = 2; b <= n; ++b) check(StructureSpec::esf(0.5), IndexSet::range(1, 2), n, b);
  }
  double worst = 0;
  const double p = std::exp(-0.75);
  for (int n : {20, 100, 1000}) {
    for (int b = 2; b <= 6; ++b) {
      const double b1 = tv_conditioned_bounds(p, p, 4.0 / n, 2.0 * b / n).b1;
      const double target = std::exp(0.75) * 2 * (b + 1) / n;
      worst = std::max(worst, std::fabs(b1 / target - 1));
    }
  }
  return {violations == 0 && worst <= 1e-14,
          std::to_string(cases) + " cases, " + std::to_string(violations) + " violations, worked bound rel err " +
              fmt("%.3g", worst)};
}

double oracle_moment(const ExactLaw& law, const MomentSpec& r) {
  BigRational s(0);
  for (const auto& [a, p] : law.entries) {
    BigInt f = 1;
    for (const auto& [j, order] : r.r) {
      const auto c = a[static_cast<std::size_t>(j - 1)];
      for (int t = 0; t < order; ++t) f *= (c - t);
    }
    s += p * BigRational(f);
  }
  return s.get_d();
}

Outcome1 moments() {
  double worst = 0;
  const std::vector<StructureSpec> specs{StructureSpec::permutations(),       StructureSpec::set_partitions(),
                                         StructureSpec::mappings(),           StructureSpec::integer_partitions(),
                                         StructureSpec::polynomials(2),       StructureSpec::distinct_partitions(),
                                         StructureSpec::squarefree_polynomials(2)};
  const auto gap = [](double engine, double exact) { return std::fabs(engine - exact) / std::max(1.0, std::fabs(exact)); };
  for (const auto& spec : specs) {
    for (const auto& theta : kThetas) {
      for (int n = 1; n <= 10; ++n) {
        const ExactLaw law = exact_joint_law(spec, n, theta);
        const TiltedParams params = tilt(spec, n, theta.get_d());
        for (int j = 1; j <= n; ++j) {
          for (int r = 1; r <= 3; ++r) {
            const MomentSpec m = MomentSpec::single(j, r);
            worst = std::max(worst, gap(factorial_moment_single(spec, n, j, r, params), oracle_moment(law, m)));
          }
        }
        if (spec.kind() != Kind::Assembly) continue;
        for (int j = 1; j < n; ++j) {
          for (int r1 = 1; r1 <= 3; ++r1) {
            for (int r2 = 1; r2 <= 3; ++r2) {
              const MomentSpec m{{{j, r1}, {j + 1, r2}}};
              worst = std::max(worst, gap(factorial_moment_assembly(spec, n, m, params), oracle_moment(law, m)));
            }
          }
        }
      }
    }
  }
  for (const auto& theta : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(5)}) {
    for (int n = 1; n <= 10; ++n) {
      const ExactLaw law = exact_joint_law(StructureSpec::esf(1.0), n, theta);
      for (int j = 1; j <= n; ++j) {
        for (int r = 1; r <= 3; ++r) {
          const MomentSpec m = MomentSpec::single(j, r);
          worst = std::max(worst, gap(esf_moment(n, theta.get_d(), m), oracle_moment(law, m)));
        }
      }
    }
  }
  bool rising = true;
  for (const auto& theta : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(5)}) {
    const auto table = p_total_exact_table(StructureSpec::esf(1.0), 20, theta);
    for (int n = 0; n <= 20; ++n) rising = rising && table[static_cast<std::size_t>(n)] == rising_factorial(theta, n);
  }
  return {worst <= 1e-10 && rising,
          "max gap " + fmt("%.3g", worst) + (rising ? ", ESF p_theta(n) exact" : ", ESF p_theta(n) MISMATCH")};
}

Outcome1 local_limit() {
  const double target = std::exp(-kEulerGamma);
  const auto perm = limit_law_check(StructureSpec::permutations(), 2000, {1.0, 1.0});
  double harmonic = 0;
  for (int i = 1; i <= 2000; ++i) harmonic += 1.0 / i;
  const double closed = 2000 * std::exp(-harmonic);
  const double perm_err = std::fabs(closed / target - 1);
  const double engine_err = std::fabs(perm.n_prob / closed - 1);
  const auto poly = limit_law_check(StructureSpec::polynomials(2), 500, {0.5, 1.0});
  const double poly_err = std::fabs(poly.n_prob / target - 1);
  return {perm_err < 0.02 && engine_err < 1e-9 && poly_err < 0.10,
          "permutations " + fmt("%.4f", closed) + " (" + fmt("%.2f%%", 100 * perm_err) + "), polynomials " +
              fmt("%.4f", poly.n_prob) + " (" + fmt("%.2f%%", 100 * poly_err) + ")"};
}

Outcome1 functional_equation() {
  double psi_gap = 0, slope_gap = 0, flat = 0;
  const double h = 1e-5;
  // difference over [1 - 2h, 1]: centred at 1 - h, converging to g'(1-)
  const auto derivative = [h](const LimitLaw& law) {
    return (limit_density(law, 1.0) - limit_density(law, 1.0 - 2 * h)) / (2 * h);
  };
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (double c : {0.0, kappa - 1}) {
      for (double s : {0.1, 1.0, 5.0}) {
        psi_gap = std::max(psi_gap, std::fabs(laplace_psi({kappa, c}, s) * psi(kappa, c) - psi(kappa, c + s)));
      }
    }
    const LimitLaw plain{kappa, 0.0};
    slope_gap = std::max(slope_gap, std::fabs(derivative(plain) / limit_density(plain, 1.0) - (kappa - 1)));
    flat = std::max(flat, std::fabs(derivative({kappa, kappa - 1})));
  }
  return {psi_gap <= 1e-8 && slope_gap <= 1e-4 && flat <= 1e-4,
          "psi gap " + fmt("%.3g", psi_gap) + ", slope gap " + fmt("%.3g", slope_gap) + ", g_c'(1-) " + fmt("%.3g", flat)};
}

Outcome1 sampler_exactness() {
  const int n = 6;
  const std::size_t count = 100000;
  double worst_p = 1;
  double worst_se = 0;
  std::uint64_t stream = 0;
  for (const auto& spec : kinds()) {
    for (const auto& theta : {BigRational(1), BigRational(2)}) {
      const TiltedParams params = tilt(spec, n, theta.get_d());
      const ExactLaw law = exact_joint_law(spec, n, theta);
      const SampleBatch batch = sample_components(spec, n, params, count, {20240917, stream++});
      std::map<Outcome, double> observed;
      for (const auto& a : batch.samples) observed[a.counts] += 1;
      // merge cells in increasing order of expected count until each has >= 5
      std::vector<std::pair<double, double>> cells;
      for (const auto& [o, p] : law.entries) cells.emplace_back(p.get_d() * count, observed[o]);
      std::sort(cells.begin(), cells.end());
      std::vector<std::pair<double, double>> merged;
      std::pair<double, double> acc{0, 0};
      for (const auto& c : cells) {
        acc.first += c.first;
        acc.second += c.second;
        if (acc.first >= 5) {
          merged.push_back(acc);
          acc = {0, 0};
        }
      }
      if (acc.first > 0) {
        if (merged.empty()) merged.push_back(acc);
        else merged.back().first += acc.first, merged.back().second += acc.second;
      }
      double chi2 = 0;
      for (const auto& [e, o] : merged) chi2 += (o - e) * (o - e) / e;
      const double dof = static_cast<double>(merged.size()) - 1;
      const double pvalue = dof > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), chi2)) : 1.0;
      worst_p = std::min(worst_p, pvalue);

      const double trials = static_cast<double>(batch.trials);
      const double p = batch.prob_T;
      const double se = std::sqrt(trials * p * (1 - p));
      worst_se = std::max(worst_se, std::fabs(static_cast<double>(batch.accepted) - trials * p) / se);
    }
  }
  return {worst_p > 1e-3 && worst_se < 4,
          "min chi-square p-value " + fmt("%.3g", worst_p) + ", max acceptance deviation " + fmt("%.2f", worst_se) + " SE"};
}

Outcome1 heuristic_trend() {
  const auto spec = StructureSpec::esf(2.0);
  const IndexSet B = IndexSet::parse("1,2");
  const TiltedParams params{1.0, 1.0};
  std::vector<double> ratios;
  for (int n : {200, 400, 800}) {
    const double exact = tv_CB_ZB(spec, B, n, params).exact;
    const double predicted = 0.5 * std::fabs(2.0 - 1) * weighted_sum_pmf(spec, B, 4 * n, params).mean_abs_deviation();
    ratios.push_back(n * exact / predicted);
  }
  bool envelope = true;
  for (double r : ratios) envelope = envelope && r >= 0.5 && r <= 2.0;
  const bool monotone = std::fabs(ratios[1] - 1) < std::fabs(ratios[0] - 1) && std::fabs(ratios[2] - 1) < std::fabs(ratios[1] - 1);
  return {envelope, "n d_TV / estimate = " + fmt("%.4f", ratios[0]) + ", " + fmt("%.4f", ratios[1]) + ", " +
                        fmt("%.4f", ratios[2]) + (monotone ? " (monotone toward 1)" : " (not monotone)")};
}

Outcome1 permutation_envelope() {
  const int n = 20;
  bool ok = true;
  std::string detail;
  for (int b : {2, 3, 4}) {
    const double d = tv_CB_ZB(StructureSpec::permutations(), IndexSet::range(1, b), n, {1.0, 1.0}).exact;
    const double F = permutation_tv_envelope(static_cast<double>(n) / b);
    ok = ok && d <= F;
    detail += (detail.empty() ? "" : ", ") + ("b=" + std::to_string(b) + ": " + fmt("%.3g", d) + " <= " + fmt("%.3g", F));
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome1()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {"conditioning identity", conditioning_identity, 10},
      {"P(T_n = n) identities", prob_T_identities, 5},
      {"d_TV(C_B, Z_B) vs oracle", tv_identity, 60},
      {"refined equality chain", refined_chain, 0},
      {"conditioned bounds", conditioned_bounds, 0},
      {"factorial moments", moments, 0},
      {"logarithmic local limit", local_limit, 5},
      {"limit-law functional equation", functional_equation, 0},
      {"sampler exactness", sampler_exactness, 0},
      {"heuristic trend", heuristic_trend, 30},
      {"permutation TV envelope", permutation_envelope, 0},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto start = std::chrono::steady_clock::now();
    Outcome1 out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      out.pass = false;
      out.detail += "; over time budget";
    }
    if (!out.pass) ++failures;
    std::printf("%s  %2zu  %-30s %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", k + 1, c.name, out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
