#include "bulinc/participatory_budgeting.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <string>

namespace bulinc {
namespace {

const Money& budget_of(const std::vector<Requester>& requesters, RequesterId id) {
  for (const auto& r : requesters) {
    if (r.id == id) return r.budget;
  }
  throw std::invalid_argument("unknown requester " + std::to_string(id.value));
}

}  // namespace

Tally tally_votes(const PreferenceProfile& profile, const std::vector<Requester>& requesters) {
  Tally tally;
  for (const auto& r : requesters) tally[r.id] = 0;
  for (std::size_t i = 0; i < profile.ballots.size(); ++i) {
    const auto& ballot = profile.ballots[i];
    for (auto id : ballot) {
      if (!tally.contains(id)) {
        throw std::invalid_argument("ballot " + std::to_string(i + 1) + " names unknown requester " +
                                    std::to_string(id.value));
      }
    }
    if (!ballot.empty()) ++tally[ballot.front()];
  }
  return tally;
}

std::vector<RequesterId> funding_order(const std::vector<Requester>& requesters, const Tally& tally) {
  std::vector<std::pair<std::uint64_t, RequesterId>> keyed;
  keyed.reserve(requesters.size());
  for (const auto& r : requesters) {
    auto it = tally.find(r.id);
    keyed.emplace_back(it == tally.end() ? 0 : it->second, r.id);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<RequesterId> order;
  order.reserve(keyed.size());
  for (const auto& k : keyed) order.push_back(k.second);
  return order;
}

FundingDecision select_funded(const std::vector<Requester>& requesters, const Tally& tally,
                              const Money& government_budget) {
  FundingDecision decision;
  decision.tally = tally;
  for (const auto& r : requesters) decision.tally.try_emplace(r.id, 0);
  decision.residual_budget = government_budget;
  for (auto id : funding_order(requesters, tally)) {
    const Money& need = budget_of(requesters, id);
    if (need <= decision.residual_budget) {
      decision.funded.push_back(id);
      decision.residual_budget -= need;
    }
  }
  return decision;
}

Money ballot_welfare(const FundingDecision& decision, const Ballot& ballot, const std::vector<Requester>& requesters) {
  std::set<RequesterId> listed(ballot.begin(), ballot.end());
  Money gain;
  for (auto id : decision.funded) {
    if (listed.contains(id)) gain += budget_of(requesters, id);
  }
  return gain;
}

Money dweller_welfare(const FundingDecision& decision, const PreferenceProfile& profile,
                      const std::vector<Requester>& requesters) {
  if (profile.ballots.empty() || decision.funded.empty()) return Money(0);
  Money total;
  for (const auto& ballot : profile.ballots) total += ballot_welfare(decision, ballot, requesters);
  return total / Money(static_cast<std::int64_t>(profile.ballots.size()));
}

KnapsackSolution knapsack_oracle(const std::vector<Requester>& requesters, const Tally& tally,
                                 const Money& government_budget) {
  const std::size_t n = requesters.size();
  if (n > kKnapsackOracleLimit) {
    throw std::length_error("knapsack oracle supports at most " + std::to_string(kKnapsackOracleLimit) +
                            " requesters, got " + std::to_string(n));
  }

  // Bit i of a mask stands for the i-th smallest id.
  std::vector<const Requester*> by_id;
  for (const auto& r : requesters) by_id.push_back(&r);
  std::sort(by_id.begin(), by_id.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::vector<std::uint64_t> votes(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = tally.find(by_id[i]->id);
    votes[i] = it == tally.end() ? 0 : it->second;
  }

  // Lexicographic order on ascending id sequences: the set holding the
  // smallest differing element is smaller iff the other set continues past it.
  auto lex_less = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    int d = std::countr_zero(diff);
    bool a_has = (a >> d) & 1u;
    std::uint64_t other = a_has ? b : a;
    bool other_continues = (other >> (d + 1)) != 0;
    return a_has == other_continues;
  };

  std::uint64_t best_mask = 0;
  std::uint64_t best_votes = 0;
  Money best_cost;
  const std::uint64_t total = std::uint64_t{1} << n;
  // Gray-code walk: consecutive masks differ in one requester.
  Money cost;
  std::uint64_t v = 0;
  std::uint64_t mask = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    int flip = std::countr_zero(step);
    mask ^= std::uint64_t{1} << flip;
    if ((mask >> flip) & 1u) {
      cost += by_id[static_cast<std::size_t>(flip)]->budget;
      v += votes[static_cast<std::size_t>(flip)];
    } else {
      cost -= by_id[static_cast<std::size_t>(flip)]->budget;
      v -= votes[static_cast<std::size_t>(flip)];
    }
    if (cost > government_budget) continue;
    if (v > best_votes || (v == best_votes && lex_less(mask, best_mask))) {
      best_mask = mask;
      best_votes = v;
      best_cost = cost;
    }
  }

  KnapsackSolution out;
  out.total_tally = best_votes;
  out.total_cost = best_cost;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best_mask >> i) & 1u) out.funded.push_back(by_id[i]->id);
  }
  return out;
}

std::uint64_t funded_tally(const FundingDecision& decision, const Tally& tally) {
  std::uint64_t sum = 0;
  for (auto id : decision.funded) {
    if (auto it = tally.find(id); it != tally.end()) sum += it->second;
  }
  return sum;
}

}  // namespace bulinc
