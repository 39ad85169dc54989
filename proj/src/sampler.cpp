#include "combstruct/sampler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

#include "combstruct/sumdist.hpp"

namespace combstruct {

Rng::Rng(RngState state, std::uint64_t chunk) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(state.seed), hi(state.seed), lo(state.stream), hi(state.stream), lo(chunk), hi(chunk)};
  engine_.seed(seq);
}

double Rng::uniform() {
  while (true) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

namespace {

/// cdf of Z_i on 0..floor(n / i); values past the table exceed n anyway.
struct IndexTable {
  int i = 0;
  std::vector<double> cdf;
};

std::vector<IndexTable> build_tables(const StructureSpec& spec, int n, const TiltedParams& params) {
  std::vector<IndexTable> tables;
  for (int i = n; i >= 1; --i) {
    if (spec.m_zero(i)) continue;
    IndexTable t;
    t.i = i;
    const auto pmf = z_law(spec, i, params).pmf_table(n / i);
    long double acc = 0.0L;
    for (auto v : pmf) {
      acc += v;
      t.cdf.push_back(static_cast<double>(std::min(acc, 1.0L)));
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

/// One trial; returns true and fills a on acceptance.
bool trial(const std::vector<IndexTable>& tables, int n, Rng& rng, ComponentVector& a) {
  std::fill(a.counts.begin(), a.counts.end(), 0);
  long sum = 0;
  for (const auto& t : tables) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(t.cdf.begin(), t.cdf.end(), u);
    if (it == t.cdf.end()) return false;
    const long z = it - t.cdf.begin();
    sum += z * t.i;
    if (sum > n) return false;
    a.at(t.i) = z;
  }
  return sum == n;
}

struct ChunkResult {
  std::vector<ComponentVector> samples;
  std::uint64_t trials = 0;
};

ChunkResult run_chunk(const std::vector<IndexTable>& tables, int n, std::size_t want, RngState state,
                      std::uint64_t chunk) {
  Rng rng(state, chunk);
  ChunkResult out;
  out.samples.reserve(want);
  ComponentVector a = ComponentVector::zeros(n);
  while (out.samples.size() < want) {
    ++out.trials;
    if (trial(tables, n, rng, a)) out.samples.push_back(a);
  }
  return out;
}

}  // namespace

SampleBatch sample_components(const StructureSpec& spec, int n, const TiltedParams& params,
                              std::size_t count, RngState rng, int threads) {
  if (n < 1) throw DomainError("n must be >= 1");
  validate(spec, params);
  SampleBatch batch;
  batch.prob_T = prob_T_eq_n(spec, n, params);
  if (!(batch.prob_T >= 1e-12)) {
    throw NumericGuard("acceptance probability P(T_n = n) = " + std::to_string(batch.prob_T) +
                       " is below 1e-12; choose a better x");
  }
  const auto tables = build_tables(spec, n, params);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  std::vector<ChunkResult> results(chunks);
  auto work = [&](std::size_t c) {
    const std::size_t want = std::min(kSampleChunk, count - c * kSampleChunk);
    results[c] = run_chunk(tables, n, want, rng, c);
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t c = w; c < chunks; c += workers) work(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  batch.samples.reserve(count);
  for (auto& r : results) {
    batch.trials += r.trials;
    for (auto& s : r.samples) batch.samples.push_back(std::move(s));
  }
  batch.accepted = batch.samples.size();
  return batch;
}

namespace {

std::uint64_t cell_count(const StructureSpec& spec, int i) {
  const BigRational m = spec.m_exact(i);
  if (m.get_den() != 1) throw DomainError("refinement requires integral m_i");
  const BigInt& num = m.get_num();
  if (num > BigInt("4611686018427387904")) {
    throw DomainError("m_" + std::to_string(i) + " too large to index cells");
  }
  return num.get_ui();
}

/// Floyd's algorithm: a uniform k-subset of {0, ..., m-1}, sorted.
std::vector<std::uint64_t> floyd_subset(std::uint64_t m, std::uint64_t k, Rng& rng) {
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = m - k; j < m; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

std::vector<std::pair<std::uint64_t, std::int64_t>> split(Kind kind, std::uint64_t m, std::int64_t a,
                                                          Rng& rng) {
  std::map<std::uint64_t, std::int64_t> cells;
  const auto ua = static_cast<std::uint64_t>(a);
  switch (kind) {
    case Kind::Assembly:
      for (std::int64_t b = 0; b < a; ++b) ++cells[rng.below(m)];
      break;
    case Kind::Multiset: {
      // Stars and bars: the sorted k-th chosen slot of m + a - 1 maps to
      // cell (slot - k).
      const auto slots = floyd_subset(m + ua - 1, ua, rng);
      for (std::uint64_t k = 0; k < slots.size(); ++k) ++cells[slots[k] - k];
      break;
    }
    case Kind::Selection: {
      if (ua > m) throw NumericGuard("selection split with a_i > m_i");
      for (auto c : floyd_subset(m, ua, rng)) cells[c] = 1;
      break;
    }
  }
  return {cells.begin(), cells.end()};
}

}  // namespace

std::vector<RefinedSample> sample_refined(const StructureSpec& spec, int n,
                                          const TiltedParams& params, std::size_t count,
                                          RngState rng) {
  const SampleBatch batch = sample_components(spec, n, params, count, rng);
  // The splitting stream is distinct from every rejection chunk.
  Rng split_rng(RngState{rng.seed, rng.stream}, std::numeric_limits<std::uint64_t>::max());
  std::vector<RefinedSample> out;
  out.reserve(batch.samples.size());
  for (const auto& c : batch.samples) {
    RefinedSample r;
    r.c = c;
    r.cells.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
      const std::int64_t a = c.at(i);
      if (a == 0) continue;
      r.cells[static_cast<std::size_t>(i - 1)] = split(spec.kind(), cell_count(spec, i), a, split_rng);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<StatSummary> statistics(const std::vector<ComponentVector>& samples) {
  if (samples.empty()) throw DomainError("statistics of an empty batch");
  const char* names[] = {"K", "L", "J", "D", "Dstar"};
  std::vector<std::vector<double>> values(5);
  for (const auto& a : samples) {
    double k = 0.0;
    double l = 0.0;
    double j = 0.0;
    double sq = 0.0;
    for (int i = 1; i <= a.n; ++i) {
      const auto c = static_cast<double>(a.at(i));
      if (c == 0.0) continue;
      k += c;
      l = i;
      j += 1.0;
      sq += static_cast<double>(i) * i * c;
    }
    values[0].push_back(k);
    values[1].push_back(l);
    values[2].push_back(j);
    values[3].push_back(a.n / k);
    values[4].push_back(sq / a.n);
  }
  std::vector<StatSummary> out;
  const double count = static_cast<double>(samples.size());
  for (std::size_t s = 0; s < values.size(); ++s) {
    CompensatedSum sum;
    for (double v : values[s]) sum.add(v);
    const double mean = sum.value() / count;
    CompensatedSum dev;
    for (double v : values[s]) dev.add((v - mean) * (v - mean));
    StatSummary st;
    st.name = names[s];
    st.mean = mean;
    st.variance = samples.size() > 1 ? dev.value() / (count - 1.0) : 0.0;
    st.std_error = std::sqrt(st.variance / count);
    out.push_back(st);
  }
  return out;
}

}  // namespace combstruct
