#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bulinc/rational.hpp"

namespace bulinc {

struct RequesterId {
  std::uint32_t value = 0;
  friend auto operator<=>(const RequesterId&, const RequesterId&) = default;
};

struct ExecutorId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ExecutorId&, const ExecutorId&) = default;
};

/// Integer time ticks. Task windows are closed intervals [start, finish].
using Tick = std::int64_t;

struct Task {
  RequesterId requester;
  std::uint32_t index = 1;  // 1-based position within the owner's task list
  Tick start = 0;
  Tick finish = 0;

  friend bool operator==(const Task&, const Task&) = default;
};

struct Requester {
  RequesterId id;
  Money budget;
  std::vector<Task> tasks;
};

/// One dweller's ranking, most preferred first.
using Ballot = std::vector<RequesterId>;

struct PreferenceProfile {
  std::vector<Ballot> ballots;
};

struct Executor {
  ExecutorId id;
  Money true_cost;
  Money reported_cost;

  static Executor truthful(ExecutorId id, Money cost) { return {id, cost, cost}; }
};

struct SlotPool {
  std::uint32_t slot_index = 1;
  std::vector<Task> tasks;
  std::vector<Executor> executors;
};

struct FundingDecision {
  std::vector<RequesterId> funded;  // admission order
  Money residual_budget;
  std::map<RequesterId, std::uint64_t> tally;
};

/// Closed-interval overlap: tasks that share even an endpoint conflict.
bool incompatible(const Task& a, const Task& b);

/// Human-readable label such as "t_2^5" (task 2 of requester 5).
std::string task_label(const Task& task);

/// One entry per violated invariant; empty means the market is well formed.
using ValidationReport = std::vector<std::string>;

ValidationReport validate_market(const std::vector<Requester>& requesters,
                                 const std::vector<Executor>& executors,
                                 const Money& government_budget);

/// Ballots must name known requesters without repeats and fit the budget.
ValidationReport validate_profile(const PreferenceProfile& profile,
                                  const std::vector<Requester>& requesters,
                                  const Money& government_budget);

}  // namespace bulinc
