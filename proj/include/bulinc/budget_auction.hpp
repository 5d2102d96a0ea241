#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bulinc/market.hpp"

namespace bulinc {

/// Equal split of a requester's budget over its tasks: B / n exactly, or
/// floor(B / n) when `floor_mode` is set.
Money per_task_budget(const Money& requester_budget, std::uint32_t n_tasks, bool floor_mode = false);

/// Executors ordered by (reported cost, id). Every allocation rule in this
/// module scans this order. Sorting happens once so that all tasks of a slot
/// can share it.
class SortedPool {
 public:
  explicit SortedPool(std::span<const Executor> pool);

  std::span<const Executor> executors() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

  /// Proportional-share winner count: the longest prefix in which the k-th
  /// cheapest reported cost satisfies c_k <= budget / k. Runs on the integer
  /// kernel when all costs share a small common denominator.
  std::size_t admitted_count(const Money& budget) const;
  /// Same rule evaluated one rational comparison at a time.
  std::size_t admitted_count_exact(const Money& budget) const;

  /// Whether admitted_count() can use the integer kernel for this pool.
  bool uses_kernel() const { return !scaled_costs_.empty() || sorted_.empty(); }

  const Executor* find(ExecutorId id) const;

 private:
  std::vector<Executor> sorted_;
  std::vector<std::int64_t> scaled_costs_;  // reported cost * scale_, when exact
  std::int64_t scale_ = 1;
};

struct Allocation {
  std::vector<ExecutorId> winners;  // in sorted order
  std::size_t k = 0;
  std::optional<Money> next_cost;   // reported cost of the (k+1)-th cheapest
};

/// Greedy proportional-share allocation over `pool` with `budget`.
Allocation allocate_winners(std::span<const Executor> pool, const Money& budget);
Allocation allocate_winners(const SortedPool& pool, const Money& budget);

/// Uniform threshold payment min(budget / k, next_cost); budget / k when the
/// whole pool won. Throws std::invalid_argument for k == 0.
Money compute_payment(std::size_t k, const Money& budget, const std::optional<Money>& next_cost);

struct TaskAuctionOutcome {
  Task task;
  Money per_task_budget;
  std::vector<ExecutorId> winners;
  Money payment;                  // paid to every winner; 0 without winners
  std::optional<Money> next_cost;

  Money total_payout() const { return payment * Money(static_cast<std::int64_t>(winners.size())); }
  bool is_winner(ExecutorId id) const;
};

TaskAuctionOutcome run_task_auction(const Task& task, std::span<const Executor> pool, const Money& requester_budget,
                                    std::uint32_t n_tasks, bool floor_mode = false);
TaskAuctionOutcome run_task_auction(const Task& task, const SortedPool& pool, const Money& requester_budget,
                                    std::uint32_t n_tasks, bool floor_mode = false);

struct SlotAuctionReport {
  std::uint32_t slot_index = 0;
  std::vector<TaskAuctionOutcome> outcomes;
  Money total_payment;
  Money total_utility;   // sum over wins of payment - true cost
  Money total_budget;    // sum of per-task budgets
  std::size_t n_winners = 0;

  Money budget_utilized() const { return total_payment; }
};

/// One independent auction per task of the slot, each over the slot's full
/// executor pool; an executor may win several tasks of the same slot.
/// Throws std::invalid_argument if a slot task belongs to no funded requester.
SlotAuctionReport run_slot_auction(const SlotPool& slot, const std::vector<Requester>& funded, bool floor_mode = false);

/// Recomputes the report totals from its outcomes and the pool's true costs.
SlotAuctionReport summarize_slot(std::uint32_t slot_index, std::vector<TaskAuctionOutcome> outcomes,
                                 std::span<const Executor> pool);

/// Payment minus TRUE cost for a winner, zero otherwise.
Money executor_utility(const TaskAuctionOutcome& outcome, const Executor& executor);

// ---------------------------------------------------------------------------
// Pluggable mechanisms

struct MechanismResult {
  std::vector<ExecutorId> winners;
  std::vector<Money> payments;  // parallel to winners

  Money total_payment() const;
};

/// A named auction rule. `run` performs one auction per entry of
/// `task_budgets` over the same pool of reported costs. No truthfulness is
/// assumed; callers check budget feasibility and individual rationality with
/// check_mechanism_result().
struct Mechanism {
  std::string name;
  std::function<std::vector<MechanismResult>(std::span<const Executor> pool, std::span<const Money> task_budgets)> run;
};

/// Budget feasibility (sum of payments <= budget), payments at least the
/// winner's reported cost, winners drawn from the pool without repeats.
std::vector<std::string> check_mechanism_result(const MechanismResult& result, std::span<const Executor> pool,
                                                const Money& budget);

/// Pay-as-bid greedy: cheapest reported costs are admitted while their
/// running sum stays within budget; each winner is paid its reported cost.
MechanismResult greedy_baseline(std::span<const Executor> pool, const Money& budget);

/// The proportional-share rule behind run_task_auction, as a Mechanism.
Mechanism proportional_share_mechanism();
/// greedy_baseline as a Mechanism.
Mechanism greedy_mechanism();

MechanismResult run_single(const Mechanism& mechanism, std::span<const Executor> pool, const Money& budget);

/// Sum of payment - true cost over the executor's wins.
Money executor_utility(const MechanismResult& result, const Executor& executor);

/// Inflates the reported cost of ceil(fraction * m) executors, chosen
/// deterministically from `seed`, to true_cost * (1 + inflation).
std::vector<Executor> manipulate_bids(std::span<const Executor> pool, const Money& fraction, const Money& inflation,
                                      std::uint64_t seed);

}  // namespace bulinc
