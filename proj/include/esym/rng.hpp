#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace esym {

/// Master seed plus a stream id. Distinct streams under the same seed give
/// statistically independent draws (disjoint Philox counters).
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// One Philox4x32-10 block (Salmon et al., SC'11). Pure function of
/// counter and key; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), so parallel replications can own disjoint
/// streams and results never depend on scheduling.
class CounterRng {
 public:
  explicit CounterRng(RngSeed s) : key_(s.seed), stream_(s.stream) {}

  CounterRng with_stream(std::uint64_t stream) const {
    return CounterRng(RngSeed{key_, stream});
  }
  CounterRng derive(std::uint64_t offset) const {
    return with_stream(stream_ + offset);
  }

  std::uint64_t stream() const { return stream_; }

  /// 128 random bits as two u64 words.
  std::array<std::uint64_t, 2> block(std::uint64_t index) const;

  /// index-th u64.
  std::uint64_t bits(std::uint64_t index) const {
    return block(index >> 1)[index & 1];
  }

  /// index-th uniform draw, strictly inside (0, 1).
  double uniform(std::uint64_t index) const;

  /// Box-Muller pair from block pair_index.
  std::array<double, 2> normal_pair(std::uint64_t pair_index) const;

  /// index-th standard normal draw.
  double normal(std::uint64_t index) const {
    return normal_pair(index >> 1)[index & 1];
  }

  /// Fills out with normals of the given mean (unit variance), draws
  /// indexed 0..out.size()-1 within this stream.
  void fill_normal(std::span<double> out, double mean) const;

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
};

}  // namespace esym
