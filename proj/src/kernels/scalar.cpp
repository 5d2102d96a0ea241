#include "bulinc/kernels.hpp"

namespace bulinc::kernels::scalar {

std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit) {
  std::size_t k = 0;
  while (k < costs.size() && costs[k] * static_cast<std::int64_t>(k + 1) <= limit) ++k;
  return k;
}

std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start) {
  for (std::size_t i = 0; i < slot_finish.size(); ++i) {
    if (slot_finish[i] < start) return i;
  }
  return slot_finish.size();
}

std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold) {
  std::uint64_t hits = 0;
  const std::uint64_t full_blocks = n / 4;
  for (std::uint64_t b = 0; b < full_blocks; ++b) {
    auto words = philox::block(philox::counter_for(stream, b), key);
    for (auto w : words) hits += w < threshold;
  }
  if (auto rest = n % 4; rest != 0) {
    auto words = philox::block(philox::counter_for(stream, full_blocks), key);
    for (std::uint64_t j = 0; j < rest; ++j) hits += words[j] < threshold;
  }
  return hits;
}

}  // namespace bulinc::kernels::scalar
