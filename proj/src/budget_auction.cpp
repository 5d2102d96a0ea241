#include "bulinc/budget_auction.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "bulinc/kernels.hpp"
#include "bulinc/philox.hpp"

namespace bulinc {
namespace {

// Common denominators above this fall back to rational comparisons.
constexpr std::int64_t kMaxKernelScale = 1'000'000'000;

bool cheaper(const Executor& a, const Executor& b) {
  if (a.reported_cost != b.reported_cost) return a.reported_cost < b.reported_cost;
  return a.id < b.id;
}

const Money* budget_lookup(const std::vector<Requester>& funded, RequesterId id, std::uint32_t& n_tasks) {
  for (const auto& r : funded) {
    if (r.id == id) {
      n_tasks = static_cast<std::uint32_t>(r.tasks.size());
      return &r.budget;
    }
  }
  return nullptr;
}

}  // namespace

Money per_task_budget(const Money& requester_budget, std::uint32_t n_tasks, bool floor_mode) {
  if (n_tasks == 0) throw std::invalid_argument("per_task_budget: requester has no tasks");
  Money share = requester_budget / Money(static_cast<std::int64_t>(n_tasks));
  return floor_mode ? Money(share.floor()) : share;
}

// ---------------------------------------------------------------------------

SortedPool::SortedPool(std::span<const Executor> pool) : sorted_(pool.begin(), pool.end()) {
  std::sort(sorted_.begin(), sorted_.end(), cheaper);

  std::int64_t scale = 1;
  for (const auto& e : sorted_) {
    if (e.reported_cost.is_negative()) return;
    std::int64_t d = e.reported_cost.den();
    std::int64_t g = std::gcd(scale, d);
    if (scale / g > kMaxKernelScale / d) return;
    scale = scale / g * d;
  }
  std::vector<std::int64_t> scaled;
  scaled.reserve(sorted_.size());
  for (const auto& e : sorted_) {
    __int128 v = __int128(e.reported_cost.num()) * (scale / e.reported_cost.den());
    if (v > kernels::kMaxScaledCost) return;
    scaled.push_back(static_cast<std::int64_t>(v));
  }
  scaled_costs_ = std::move(scaled);
  scale_ = scale;
}

std::size_t SortedPool::admitted_count(const Money& budget) const {
  if (sorted_.empty()) return 0;
  if (scaled_costs_.empty()) return admitted_count_exact(budget);
  // c_k <= B / k  <=>  scaled_k * k <= B * scale  <=>  scaled_k * k <= floor(B * scale).
  __int128 prod = __int128(budget.num()) * scale_;
  __int128 limit = prod / budget.den();
  if (prod % budget.den() != 0 && prod < 0) --limit;
  constexpr __int128 kCap = std::numeric_limits<std::int64_t>::max();
  if (limit > kCap) limit = kCap;
  if (limit < -kCap) limit = -kCap;
  return kernels::proportional_share_prefix(scaled_costs_, static_cast<std::int64_t>(limit));
}

std::size_t SortedPool::admitted_count_exact(const Money& budget) const {
  std::size_t k = 0;
  while (k < sorted_.size() && sorted_[k].reported_cost * Money(static_cast<std::int64_t>(k + 1)) <= budget) ++k;
  return k;
}

const Executor* SortedPool::find(ExecutorId id) const {
  auto it = std::find_if(sorted_.begin(), sorted_.end(), [id](const Executor& e) { return e.id == id; });
  return it == sorted_.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------

Allocation allocate_winners(const SortedPool& pool, const Money& budget) {
  Allocation out;
  out.k = pool.admitted_count(budget);
  auto sorted = pool.executors();
  out.winners.reserve(out.k);
  for (std::size_t i = 0; i < out.k; ++i) out.winners.push_back(sorted[i].id);
  if (out.k < sorted.size()) out.next_cost = sorted[out.k].reported_cost;
  return out;
}

Allocation allocate_winners(std::span<const Executor> pool, const Money& budget) {
  return allocate_winners(SortedPool(pool), budget);
}

Money compute_payment(std::size_t k, const Money& budget, const std::optional<Money>& next_cost) {
  if (k == 0) throw std::invalid_argument("compute_payment: no winners to pay");
  Money share = budget / Money(static_cast<std::int64_t>(k));
  return next_cost ? min(share, *next_cost) : share;
}

bool TaskAuctionOutcome::is_winner(ExecutorId id) const {
  return std::find(winners.begin(), winners.end(), id) != winners.end();
}

TaskAuctionOutcome run_task_auction(const Task& task, const SortedPool& pool, const Money& requester_budget,
                                    std::uint32_t n_tasks, bool floor_mode) {
  TaskAuctionOutcome out;
  out.task = task;
  out.per_task_budget = per_task_budget(requester_budget, n_tasks, floor_mode);
  Allocation alloc = allocate_winners(pool, out.per_task_budget);
  out.next_cost = alloc.next_cost;
  if (alloc.k > 0) out.payment = compute_payment(alloc.k, out.per_task_budget, alloc.next_cost);
  out.winners = std::move(alloc.winners);
  return out;
}

TaskAuctionOutcome run_task_auction(const Task& task, std::span<const Executor> pool, const Money& requester_budget,
                                    std::uint32_t n_tasks, bool floor_mode) {
  return run_task_auction(task, SortedPool(pool), requester_budget, n_tasks, floor_mode);
}

SlotAuctionReport summarize_slot(std::uint32_t slot_index, std::vector<TaskAuctionOutcome> outcomes,
                                 std::span<const Executor> pool) {
  std::vector<std::pair<ExecutorId, Money>> true_costs;
  true_costs.reserve(pool.size());
  for (const auto& e : pool) true_costs.emplace_back(e.id, e.true_cost);
  std::sort(true_costs.begin(), true_costs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto true_cost_of = [&](ExecutorId id) -> const Money& {
    auto it = std::lower_bound(true_costs.begin(), true_costs.end(), id,
                               [](const auto& entry, ExecutorId key) { return entry.first < key; });
    if (it == true_costs.end() || it->first != id) {
      throw std::invalid_argument("winner " + std::to_string(id.value) + " is not in the slot pool");
    }
    return it->second;
  };

  SlotAuctionReport report;
  report.slot_index = slot_index;
  for (const auto& o : outcomes) {
    Money payout = o.total_payout();
    Money costs;
    for (auto id : o.winners) costs += true_cost_of(id);
    report.total_payment += payout;
    report.total_utility += payout - costs;
    report.total_budget += o.per_task_budget;
    report.n_winners += o.winners.size();
  }
  report.outcomes = std::move(outcomes);
  return report;
}

SlotAuctionReport run_slot_auction(const SlotPool& slot, const std::vector<Requester>& funded, bool floor_mode) {
  SortedPool pool(slot.executors);
  std::vector<TaskAuctionOutcome> outcomes;
  outcomes.reserve(slot.tasks.size());
  for (const auto& task : slot.tasks) {
    std::uint32_t n_tasks = 0;
    const Money* budget = budget_lookup(funded, task.requester, n_tasks);
    if (budget == nullptr) {
      throw std::invalid_argument("slot " + std::to_string(slot.slot_index) + ": task " + task_label(task) +
                                  " belongs to no funded requester");
    }
    outcomes.push_back(run_task_auction(task, pool, *budget, n_tasks, floor_mode));
  }
  return summarize_slot(slot.slot_index, std::move(outcomes), slot.executors);
}

Money executor_utility(const TaskAuctionOutcome& outcome, const Executor& executor) {
  return outcome.is_winner(executor.id) ? outcome.payment - executor.true_cost : Money(0);
}

// ---------------------------------------------------------------------------

Money MechanismResult::total_payment() const {
  Money sum;
  for (const auto& p : payments) sum += p;
  return sum;
}

std::vector<std::string> check_mechanism_result(const MechanismResult& result, std::span<const Executor> pool,
                                                const Money& budget) {
  std::vector<std::string> problems;
  if (result.winners.size() != result.payments.size()) {
    problems.push_back("winners and payments differ in length");
    return problems;
  }
  std::set<ExecutorId> seen;
  for (std::size_t i = 0; i < result.winners.size(); ++i) {
    auto id = result.winners[i];
    const std::string who = "executor " + std::to_string(id.value);
    if (!seen.insert(id).second) problems.push_back(who + " wins twice");
    auto it = std::find_if(pool.begin(), pool.end(), [id](const Executor& e) { return e.id == id; });
    if (it == pool.end()) {
      problems.push_back(who + " is not in the pool");
      continue;
    }
    if (result.payments[i] < it->reported_cost) {
      problems.push_back(who + " paid " + result.payments[i].to_string() + " below its bid " +
                         it->reported_cost.to_string());
    }
  }
  if (Money total = result.total_payment(); total > budget) {
    problems.push_back("payments " + total.to_string() + " exceed budget " + budget.to_string());
  }
  return problems;
}

namespace {

MechanismResult greedy_on_sorted(const SortedPool& pool, const Money& budget) {
  MechanismResult out;
  Money spent;
  for (const auto& e : pool.executors()) {
    if (spent + e.reported_cost > budget) break;
    spent += e.reported_cost;
    out.winners.push_back(e.id);
    out.payments.push_back(e.reported_cost);
  }
  return out;
}

}  // namespace

MechanismResult greedy_baseline(std::span<const Executor> pool, const Money& budget) {
  return greedy_on_sorted(SortedPool(pool), budget);
}

Mechanism proportional_share_mechanism() {
  return {"BULINC", [](std::span<const Executor> pool, std::span<const Money> budgets) {
            SortedPool sorted(pool);
            std::vector<MechanismResult> out;
            out.reserve(budgets.size());
            for (const auto& budget : budgets) {
              Allocation alloc = allocate_winners(sorted, budget);
              MechanismResult r;
              if (alloc.k > 0) {
                r.payments.assign(alloc.k, compute_payment(alloc.k, budget, alloc.next_cost));
              }
              r.winners = std::move(alloc.winners);
              out.push_back(std::move(r));
            }
            return out;
          }};
}

Mechanism greedy_mechanism() {
  return {"GM", [](std::span<const Executor> pool, std::span<const Money> budgets) {
            SortedPool sorted(pool);
            std::vector<MechanismResult> out;
            out.reserve(budgets.size());
            for (const auto& budget : budgets) out.push_back(greedy_on_sorted(sorted, budget));
            return out;
          }};
}

MechanismResult run_single(const Mechanism& mechanism, std::span<const Executor> pool, const Money& budget) {
  auto results = mechanism.run(pool, std::span<const Money>(&budget, 1));
  return std::move(results.at(0));
}

Money executor_utility(const MechanismResult& result, const Executor& executor) {
  Money u;
  for (std::size_t i = 0; i < result.winners.size(); ++i) {
    if (result.winners[i] == executor.id) u += result.payments[i] - executor.true_cost;
  }
  return u;
}

std::vector<Executor> manipulate_bids(std::span<const Executor> pool, const Money& fraction, const Money& inflation,
                                      std::uint64_t seed) {
  if (fraction < Money(0) || fraction > Money(1)) throw std::invalid_argument("manipulate_bids: fraction outside [0, 1]");
  if (inflation < Money(0)) throw std::invalid_argument("manipulate_bids: negative inflation");

  std::vector<Executor> out(pool.begin(), pool.end());
  const auto m = static_cast<std::int64_t>(out.size());
  const auto count = static_cast<std::size_t>((fraction * Money(m)).ceil());

  // Partial Fisher-Yates: the first `count` positions of `index` are the picks.
  std::vector<std::size_t> index(out.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  PhiloxStream rng(seed, /*stream=*/0x4D474D);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(out.size() - i));
    std::swap(index[i], index[j]);
  }
  const Money factor = Money(1) + inflation;
  for (std::size_t i = 0; i < count; ++i) {
    auto& e = out[index[i]];
    e.reported_cost = e.true_cost * factor;
  }
  return out;
}

}  // namespace bulinc
