#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "bulinc/market.hpp"

namespace bulinc {

/// First-choice vote counts. Requesters never ranked first map to 0.
using Tally = std::map<RequesterId, std::uint64_t>;

/// Counts, for each requester, the ballots that rank it first.
/// Throws std::invalid_argument naming the ballot if it mentions an unknown id.
Tally tally_votes(const PreferenceProfile& profile, const std::vector<Requester>& requesters);

/// Scan order used by select_funded: votes descending, then id ascending.
std::vector<RequesterId> funding_order(const std::vector<Requester>& requesters, const Tally& tally);

/// Greedy knapsack-voting allocation. Walks funding_order() and funds every
/// requester whose full budget still fits, without stopping at the first
/// requester that does not.
FundingDecision select_funded(const std::vector<Requester>& requesters, const Tally& tally,
                              const Money& government_budget);

/// Average dweller gain over the funded set: for each funded requester j,
/// B_j is credited to every dweller whose ballot lists j, and the total is
/// divided by the number of dwellers.
Money dweller_welfare(const FundingDecision& decision, const PreferenceProfile& profile,
                      const std::vector<Requester>& requesters);

/// Gain of a single dweller: sum of B_j over funded j on `ballot`.
Money ballot_welfare(const FundingDecision& decision, const Ballot& ballot,
                     const std::vector<Requester>& requesters);

struct KnapsackSolution {
  std::vector<RequesterId> funded;  // ascending id
  std::uint64_t total_tally = 0;
  Money total_cost;
};

inline constexpr std::size_t kKnapsackOracleLimit = 25;

/// Exhaustive maximiser of total tally under the budget. Among optimal sets
/// the lexicographically smallest ascending id sequence is returned. Throws
/// std::length_error above kKnapsackOracleLimit requesters.
KnapsackSolution knapsack_oracle(const std::vector<Requester>& requesters, const Tally& tally,
                                 const Money& government_budget);

/// Total first-choice votes held by the funded set.
std::uint64_t funded_tally(const FundingDecision& decision, const Tally& tally);

}  // namespace bulinc
