#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace bulinc {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). A block
// is a pure function of (counter, key), so any draw can be recomputed from
// (seed, stream, position) without replaying earlier draws.
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Counter block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

constexpr Key key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Counter layout shared by every consumer: words 0-1 are the block index
/// within a stream, words 2-3 the stream id.
constexpr Counter counter_for(std::uint64_t stream, std::uint64_t block_index) {
  return {static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(block_index >> 32),
          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

/// 32-bit word `position` of stream `stream` under `key`.
constexpr std::uint32_t word_at(Key key, std::uint64_t stream, std::uint64_t position) {
  return block(counter_for(stream, position / 4), key)[position % 4];
}

}  // namespace philox

/// Sequential reader over one Philox stream.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) : key_(philox::key_from_seed(seed)), stream_(stream) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  /// Uniform integer on [0, bound) without modulo bias. bound > 0.
  std::uint64_t next_below(std::uint64_t bound);
  /// Standard normal via Box-Muller (one variate per call, the pair's second half is cached).
  double next_normal();

 private:
  philox::Key key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  philox::Counter block_{};
  std::uint64_t cached_index_ = 0;
  bool cached_ = false;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a parent seed with a label into a child seed (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label);

}  // namespace bulinc
