#include "combstruct/oracle.hpp"

#include <algorithm>

namespace combstruct {

namespace {

void partitions(int remaining, int max_part, ComponentVector& cur, std::vector<ComponentVector>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    ++cur.at(part);
    partitions(remaining - part, part, cur, out);
    --cur.at(part);
  }
}

void check_cap(int n, int cap) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (n > cap) throw DomainError("enumeration cap exceeded (n > " + std::to_string(cap) + ")");
}

}  // namespace

std::vector<ComponentVector> enumerate_complete(int n, int cap) {
  check_cap(n, cap);
  std::vector<ComponentVector> out;
  ComponentVector cur = ComponentVector::zeros(n);
  partitions(n, n, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

BigRational ExactLaw::total() const {
  BigRational s(0);
  for (const auto& [o, p] : entries) s += p;
  return s;
}

BigRational ExactLaw::prob(const Outcome& o) const {
  const auto it = entries.find(o);
  return it == entries.end() ? BigRational(0) : it->second;
}

ExactLaw exact_joint_law(const StructureSpec& spec, int n, const BigRational& theta, int cap) {
  check_cap(n, cap);
  ExactLaw law;
  law.n = n;
  law.theta = theta;
  BigRational total(0);
  for (const auto& a : enumerate_complete(n, cap)) {
    const BigRational w = pow_rational(theta, static_cast<unsigned long>(a.components())) * count_N(spec, a);
    if (w == 0) continue;
    law.entries.emplace(a.counts, w);
    total += w;
  }
  if (total == 0) throw DomainError("no structures of weight " + std::to_string(n));
  for (auto& [o, p] : law.entries) {
    p /= total;
    p.canonicalize();
  }
  return law;
}

ExactLaw exact_functional_law(const ExactLaw& law,
                              const std::function<Outcome(const Outcome&)>& h) {
  ExactLaw out;
  out.n = law.n;
  out.theta = law.theta;
  for (const auto& [o, p] : law.entries) out.entries[h(o)] += p;
  for (auto& [o, p] : out.entries) p.canonicalize();
  return out;
}

ExactLaw restrict_law(const ExactLaw& law, const IndexSet& B) {
  return exact_functional_law(law, [&](const Outcome& o) {
    Outcome r;
    r.reserve(B.size());
    for (int i : B) r.push_back(static_cast<std::size_t>(i) <= o.size() ? o[static_cast<std::size_t>(i - 1)] : 0);
    return r;
  });
}

ExactLaw condition_law(const ExactLaw& law, const std::function<bool(const Outcome&)>& event) {
  ExactLaw out;
  out.n = law.n;
  out.theta = law.theta;
  BigRational mass(0);
  for (const auto& [o, p] : law.entries) {
    if (event(o)) {
      out.entries.emplace(o, p);
      mass += p;
    }
  }
  if (mass == 0) throw DomainError("conditioning on a null event");
  for (auto& [o, p] : out.entries) {
    p /= mass;
    p.canonicalize();
  }
  return out;
}

BigRational exact_tv(const ExactLaw& a, const ExactLaw& b) {
  BigRational s(0);
  for (const auto& [o, p] : a.entries) s += abs(p - b.prob(o));
  for (const auto& [o, q] : b.entries) {
    if (!a.entries.contains(o)) s += abs(q);
  }
  s /= 2;
  s.canonicalize();
  return s;
}

double tv_against(const ExactLaw& law, const std::function<double(const Outcome&)>& q) {
  CompensatedSum body;
  CompensatedSum covered;
  for (const auto& [o, p] : law.entries) {
    const double qo = q(o);
    body.add(std::fabs(p.get_d() - qo));
    covered.add(qo);
  }
  return 0.5 * body.value() + 0.5 * std::max(0.0, 1.0 - covered.value());
}

std::function<double(const Outcome&)> product_pmf(const StructureSpec& spec, const IndexSet& B,
                                                  const TiltedParams& params) {
  std::vector<DiscreteLaw> laws;
  for (int i : B) laws.push_back(z_law(spec, i, params));
  return [laws](const Outcome& o) {
    double lp = 0.0;
    for (std::size_t k = 0; k < laws.size(); ++k) lp += laws[k].log_pmf(o[k]);
    return std::exp(lp);
  };
}

namespace {

long integral_m(const StructureSpec& spec, int i) {
  const BigRational m = spec.m_exact(i);
  if (m.get_den() != 1) throw DomainError("refinement requires integral m_i");
  return m.get_num().get_si();
}

/// All ways to split a into m cells, with the conditional probability of
/// each split given the sum.
void splits(const StructureSpec& spec, long a, long m,
            std::vector<std::pair<Outcome, BigRational>>& out) {
  Outcome cells(static_cast<std::size_t>(m), 0);
  const Kind kind = spec.kind();
  BigRational uniform(1);
  if (kind == Kind::Multiset) {
    uniform = BigRational(1, 1) / BigRational(binomial(static_cast<unsigned long>(m + a - 1), static_cast<unsigned long>(a)));
  } else if (kind == Kind::Selection) {
    uniform = BigRational(1, 1) / BigRational(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(a)));
  }
  const BigRational m_pow = pow_rational(BigRational(m), static_cast<unsigned long>(a));
  const BigInt a_fact = factorial(static_cast<unsigned long>(a));

  std::function<void(long, long)> rec = [&](long cell, long left) {
    if (cell == m - 1) {
      if (kind == Kind::Selection && left > 1) return;
      cells[static_cast<std::size_t>(cell)] = left;
      BigRational p = uniform;
      if (kind == Kind::Assembly) {
        BigInt denom = 1;
        for (auto d : cells) denom *= factorial(static_cast<unsigned long>(d));
        p = BigRational(a_fact) / (BigRational(denom) * m_pow);
      }
      p.canonicalize();
      out.emplace_back(cells, p);
      return;
    }
    const long top = kind == Kind::Selection ? std::min(left, 1L) : left;
    for (long d = 0; d <= top; ++d) {
      cells[static_cast<std::size_t>(cell)] = d;
      rec(cell + 1, left - d);
    }
  };
  if (m == 0) {
    if (a == 0) out.emplace_back(Outcome{}, BigRational(1));
    return;
  }
  rec(0, a);
}

}  // namespace

ExactLaw exact_refined_law(const StructureSpec& spec, int n, const BigRational& theta, int cap) {
  const ExactLaw coarse = exact_joint_law(spec, n, theta, cap);
  std::vector<long> m(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) m[static_cast<std::size_t>(i)] = integral_m(spec, i);

  ExactLaw out;
  out.n = n;
  out.theta = theta;
  for (const auto& [a, pa] : coarse.entries) {
    std::vector<std::pair<Outcome, BigRational>> acc{{Outcome{}, pa}};
    for (int i = 1; i <= n; ++i) {
      std::vector<std::pair<Outcome, BigRational>> parts;
      splits(spec, a[static_cast<std::size_t>(i - 1)], m[static_cast<std::size_t>(i)], parts);
      std::vector<std::pair<Outcome, BigRational>> next;
      next.reserve(acc.size() * parts.size());
      for (const auto& [prefix, pp] : acc) {
        for (const auto& [cells, pc] : parts) {
          Outcome o = prefix;
          o.insert(o.end(), cells.begin(), cells.end());
          BigRational p = pp * pc;
          p.canonicalize();
          next.emplace_back(std::move(o), std::move(p));
        }
      }
      acc.swap(next);
    }
    for (auto& [o, p] : acc) out.entries[o] += p;
  }
  return out;
}

std::vector<std::size_t> refined_positions(const StructureSpec& spec, const IndexSet& B, int n) {
  std::vector<std::size_t> out;
  std::size_t offset = 0;
  for (int i = 1; i <= n; ++i) {
    const auto mi = static_cast<std::size_t>(integral_m(spec, i));
    if (B.contains(i)) {
      for (std::size_t j = 0; j < mi; ++j) out.push_back(offset + j);
    }
    offset += mi;
  }
  return out;
}

std::function<double(const Outcome&)> refined_product_pmf(const StructureSpec& spec,
                                                          const IndexSet& B,
                                                          const TiltedParams& params) {
  std::vector<DiscreteLaw> laws;
  for (int i : B) {
    const long mi = integral_m(spec, i);
    for (long j = 0; j < mi; ++j) laws.push_back(refined_y_law(spec, i, params));
  }
  return [laws](const Outcome& o) {
    double lp = 0.0;
    for (std::size_t k = 0; k < laws.size(); ++k) lp += laws[k].log_pmf(o[k]);
    return std::exp(lp);
  };
}

std::vector<BigRational> p_nk(const StructureSpec& spec, int n, int cap) {
  std::vector<BigRational> out(static_cast<std::size_t>(n) + 1, BigRational(0));
  for (const auto& a : enumerate_complete(n, cap)) {
    out[static_cast<std::size_t>(a.components())] += count_N(spec, a);
  }
  return out;
}

}  // namespace combstruct
