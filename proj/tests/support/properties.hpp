#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bulinc/budget_auction.hpp"
#include "bulinc/market.hpp"

// Fuzz drivers shared by the unit suites and the acceptance binary. Each one
// counts violations and keeps the first counterexample as text.
namespace bulinc::testing {

struct AuctionInstance {
  std::vector<Executor> pool;
  Money budget;
};

/// m in [1, max_m]; costs on a cent grid or small integers (to force ties);
/// budgets are B / n with B in [0, 120] and n in [1, 6].
AuctionInstance random_auction_instance(std::uint64_t seed, std::uint64_t index, std::size_t max_m = 12);

/// Misreports tried for `focal`: a grid around its true cost, the thresholds
/// c_k, c_{k+1}, budget / k of the truthful run and their neighbours, and the
/// other bidders' costs. Always at least `min_probes` distinct positive values.
std::vector<Money> misreport_probes(const AuctionInstance& inst, std::size_t focal, std::size_t min_probes = 20);

struct TruthfulnessSummary {
  std::size_t instances = 0;
  std::size_t probes = 0;
  std::size_t min_probes_per_focal = 0;
  std::size_t violations = 0;             // utility(probe) > utility(truth)
  std::size_t inflation_violations = 0;   // the subset with probe = 1.3 * true cost
  std::string first_violation;
};

TruthfulnessSummary probe_truthfulness(const Mechanism& mechanism, std::size_t instances, std::uint64_t seed);

struct MonotonicitySummary {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

/// Lowers each winner's reported cost and checks it still wins.
MonotonicitySummary probe_monotonicity(std::size_t instances, std::uint64_t seed);

struct FeasibilitySummary {
  std::size_t outcomes = 0;
  std::size_t winners = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

/// run_task_auction over fuzzed requesters (both budget modes): k * payment
/// within the per-task budget, payment at least every winner's reported cost,
/// and each requester's payout within n_i * per-task budget <= B_i.
FeasibilitySummary check_budget_and_ir(std::size_t requesters, std::uint64_t seed);
/// Same checks on a given outcome; appends messages for violations.
void check_outcome(const TaskAuctionOutcome& outcome, std::span<const Executor> pool, FeasibilitySummary& summary);

struct SchedulerSummary {
  std::size_t sets = 0;
  std::size_t max_size = 0;
  std::size_t count_violations = 0;      // slot_count != depth
  std::size_t soundness_violations = 0;  // incompatible pair inside a slot
  std::size_t endpoint_sharing_sets = 0; // sets where some task starts exactly when another finishes
  std::string first_violation;
};

/// Random task sets of 1..max_tasks tasks on a small time grid, so endpoint
/// sharing is common.
SchedulerSummary check_scheduler(std::size_t sets, std::size_t max_tasks, std::uint64_t seed);

/// Depth by counting, at every task start, the tasks whose closed interval
/// contains it. Independent of the event sweep in the library.
std::size_t overlap_depth_oracle(const std::vector<Task>& tasks);

}  // namespace bulinc::testing
