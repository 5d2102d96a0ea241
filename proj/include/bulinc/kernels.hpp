#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "bulinc/philox.hpp"

// Integer inner loops with a scalar reference and an AVX2 variant. The
// variant in use is picked once from CPUID; every variant must return results
// identical to the scalar one (tests/kernels_test.cpp checks this).
namespace bulinc::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best variant this CPU and build support.
Isa detected_isa();
/// Variant currently used by the dispatching entry points below.
Isa active_isa();
/// Pin the dispatch to `isa` (falls back to scalar if unsupported). The
/// BULINC_KERNELS environment variable ("scalar" / "avx2") does the same at
/// startup.
void force_isa(Isa isa);

/// Largest cost that the proportional-share kernel accepts; keeps cost * k
/// inside 63 bits for k < 2^31.
inline constexpr std::int64_t kMaxScaledCost = (std::int64_t{1} << 31) - 1;

/// Number of leading positions k = 1, 2, ... with costs[k-1] * k <= limit,
/// stopping at the first failure. Costs must lie in [0, kMaxScaledCost].
std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit);

/// Index of the first slot whose latest finish is strictly before `start`,
/// or slot_finish.size() when every slot is still busy at `start`.
std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start);

/// Number of positions i in [0, n) of Philox stream `stream` whose 32-bit
/// word is below `threshold`, i.e. successes of n Bernoulli(threshold / 2^32)
/// trials.
std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold);

// Explicit variants, for equivalence tests and benchmarks.
namespace scalar {
std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit);
std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start);
std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold);
}  // namespace scalar

namespace avx2 {
bool available();
std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit);
std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start);
std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold);
}  // namespace avx2

}  // namespace bulinc::kernels
