#include "bulinc/philox.hpp"

#include <cmath>
#include <numbers>

namespace bulinc {

std::uint32_t PhiloxStream::next_u32() {
  const std::uint64_t index = position_ / 4;
  if (!cached_ || index != cached_index_) {
    block_ = philox::block(philox::counter_for(stream_, index), key_);
    cached_index_ = index;
    cached_ = true;
  }
  return block_[position_++ % 4];
}

std::uint64_t PhiloxStream::next_u64() {
  std::uint64_t hi = next_u32();
  std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double PhiloxStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t PhiloxStream::next_below(std::uint64_t bound) {
  // Rejection on the top of the range keeps every residue equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

double PhiloxStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = next_unit();
  double u2 = next_unit();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ull * (label + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace bulinc
