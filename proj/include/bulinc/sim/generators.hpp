#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bulinc/market.hpp"
#include "bulinc/sim/config.hpp"

namespace bulinc::sim {

struct GeneratedProfile {
  PreferenceProfile profile;
  std::vector<std::string> warnings;
};

/// Each ballot is a uniformly random ordered subset (size uniform in
/// 1..N) cut back from the tail until its budget sum fits.
GeneratedProfile gen_preferences(const std::vector<Requester>& requesters, std::size_t n_dwellers,
                                 const Money& government_budget, std::uint64_t seed);

/// Costs rounded to cents; normal draws are redrawn until positive.
/// Ids run first_id, first_id + 1, ...
std::vector<Executor> gen_executors(std::size_t count, const BidDistribution& dist, std::uint64_t seed,
                                    std::uint32_t first_id = 1);

/// Requesters 1..n with integer budgets in [lo, hi] and random task windows.
std::vector<Requester> gen_requesters(const Tier1Spec& spec, std::uint64_t seed);

}  // namespace bulinc::sim
