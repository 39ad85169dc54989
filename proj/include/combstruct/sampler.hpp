#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "combstruct/indep_process.hpp"
#include "combstruct/structures.hpp"

namespace combstruct {

/// Identifies an independent random stream.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// std::mt19937_64 seeded through std::seed_seq with the 32-bit words of
/// (seed, stream, chunk). Both algorithms are fixed by the standard, and
/// uniforms are built from the top 53 bits, so draws are reproducible
/// across platforms.
class Rng {
 public:
  Rng(RngState state, std::uint64_t chunk = 0);
  std::uint64_t next() { return engine_(); }
  /// Uniform on (0, 1).
  double uniform();
  /// Uniform on {0, ..., bound - 1}, bound >= 1.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

struct SampleBatch {
  std::vector<ComponentVector> samples;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  double prob_T = 0.0;  // exact P_theta(T_n = n)
};

/// Samples are produced in chunks of this size; chunk c draws from
/// Rng(state, c), so output does not depend on the thread count.
inline constexpr std::size_t kSampleChunk = 4096;

/// Exact draws of C(n) under P_theta by rejection: Z_n, ..., Z_1 are drawn
/// largest index first and a trial is abandoned as soon as the partial
/// weighted sum exceeds n. Throws NumericGuard when P_theta(T_n = n) < 1e-12.
SampleBatch sample_components(const StructureSpec& spec, int n, const TiltedParams& params,
                              std::size_t count, RngState rng, int threads = 1);

/// A refined draw: for each size i with a_i > 0, the occupied cells j (of
/// m_i) with their counts D_ij > 0.
struct RefinedSample {
  ComponentVector c;
  std::vector<std::vector<std::pair<std::uint64_t, std::int64_t>>> cells;
};

/// Exact draws of D(n): C(n) by rejection, then each a_i split over m_i
/// cells from the conditional law given the sum (multinomial for
/// assemblies, uniform composition for multisets, uniform subset for
/// selections). Needs integral m_i below 2^62 wherever a_i > 0.
std::vector<RefinedSample> sample_refined(const StructureSpec& spec, int n,
                                          const TiltedParams& params, std::size_t count,
                                          RngState rng);

struct StatSummary {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};

/// Per-sample K_n (components), L_n (largest size), J_n (distinct sizes),
/// D_n (size of a uniformly chosen component) and D*_n (size-biased
/// component). D_n and D*_n enter through their conditional means given
/// the sample, n / K_n and sum_i i^2 a_i / n.
std::vector<StatSummary> statistics(const std::vector<ComponentVector>& samples);

}  // namespace combstruct
