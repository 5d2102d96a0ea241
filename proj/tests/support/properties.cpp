#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "bulinc/interval_scheduler.hpp"
#include "bulinc/philox.hpp"

namespace bulinc::testing {
namespace {

std::string describe(const AuctionInstance& inst) {
  std::ostringstream os;
  os << "budget " << inst.budget << ", costs [";
  for (std::size_t i = 0; i < inst.pool.size(); ++i) os << (i ? " " : "") << inst.pool[i].reported_cost;
  os << "]";
  return os.str();
}

Money utility_under(const Mechanism& mech, std::span<const Executor> pool, const Money& budget, const Executor& who) {
  return executor_utility(run_single(mech, pool, budget), who);
}

}  // namespace

AuctionInstance random_auction_instance(std::uint64_t seed, std::uint64_t index, std::size_t max_m) {
  std::mt19937_64 rng(derive_seed(seed, index));
  AuctionInstance inst;
  const auto m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
  const bool small_ints = rng() % 2 == 0;
  for (std::size_t i = 0; i < m; ++i) {
    Money cost = small_ints ? Money(std::uniform_int_distribution<std::int64_t>(1, 10)(rng))
                            : Money(std::uniform_int_distribution<std::int64_t>(1, 2500)(rng), 100);
    inst.pool.push_back(Executor::truthful(ExecutorId{static_cast<std::uint32_t>(i + 1)}, cost));
  }
  std::shuffle(inst.pool.begin(), inst.pool.end(), rng);
  auto total = std::uniform_int_distribution<std::int64_t>(0, 120)(rng);
  auto n = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
  inst.budget = Money(total, n);
  return inst;
}

std::vector<Money> misreport_probes(const AuctionInstance& inst, std::size_t focal, std::size_t min_probes) {
  const Money c = inst.pool[focal].true_cost;
  std::set<Money> probes;
  auto add = [&](const Money& v) {
    if (v > Money(0) && v != c) probes.insert(v);
  };
  const Money cent(1, 100);

  for (auto [num, den] : {std::pair{1, 4}, {1, 2}, {3, 4}, {9, 10}, {99, 100}, {101, 100}, {11, 10}, {13, 10},
                          {3, 2}, {2, 1}, {4, 1}}) {
    add(c * Money(num, den));
  }
  add(c + cent);
  add(c - cent);

  // thresholds of the truthful run
  Allocation truth = allocate_winners(inst.pool, inst.budget);
  std::vector<Money> edges;
  auto sorted = SortedPool(inst.pool).executors();
  if (truth.k > 0) {
    edges.push_back(sorted[truth.k - 1].reported_cost);
    edges.push_back(inst.budget / Money(static_cast<std::int64_t>(truth.k)));
  }
  if (truth.next_cost) edges.push_back(*truth.next_cost);
  if (truth.k + 1 <= sorted.size()) edges.push_back(inst.budget / Money(static_cast<std::int64_t>(truth.k + 1)));
  for (const auto& e : edges) {
    add(e);
    add(e + cent);
    add(e - cent);
  }
  for (const auto& e : inst.pool) add(e.reported_cost);

  for (std::int64_t j = 1; probes.size() < min_probes; ++j) add(c + Money(j, 7));
  return {probes.begin(), probes.end()};
}

TruthfulnessSummary probe_truthfulness(const Mechanism& mechanism, std::size_t instances, std::uint64_t seed) {
  TruthfulnessSummary s;
  s.min_probes_per_focal = SIZE_MAX;
  for (std::size_t idx = 0; idx < instances; ++idx) {
    AuctionInstance inst = random_auction_instance(seed, idx);
    ++s.instances;
    for (std::size_t f = 0; f < inst.pool.size(); ++f) {
      const Executor me = inst.pool[f];
      const Money honest = utility_under(mechanism, inst.pool, inst.budget, me);
      auto probes = misreport_probes(inst, f);
      s.min_probes_per_focal = std::min(s.min_probes_per_focal, probes.size());
      std::vector<Executor> lied = inst.pool;
      for (const auto& bid : probes) {
        lied[f].reported_cost = bid;
        ++s.probes;
        Money u = utility_under(mechanism, lied, inst.budget, me);
        if (u > honest) {
          ++s.violations;
          if (bid == me.true_cost * Money(13, 10)) ++s.inflation_violations;
          if (s.first_violation.empty()) {
            std::ostringstream os;
            os << mechanism.name << ": executor " << me.id.value << " (true cost " << me.true_cost << ") bidding "
               << bid << " gets " << u << " > " << honest << "; " << describe(inst);
            s.first_violation = os.str();
          }
        }
      }
    }
  }
  if (s.min_probes_per_focal == SIZE_MAX) s.min_probes_per_focal = 0;
  return s;
}

MonotonicitySummary probe_monotonicity(std::size_t instances, std::uint64_t seed) {
  MonotonicitySummary s;
  for (std::size_t idx = 0; idx < instances; ++idx) {
    AuctionInstance inst = random_auction_instance(seed ^ 0x5eed, idx);
    Allocation base = allocate_winners(inst.pool, inst.budget);
    for (auto id : base.winners) {
      auto f = static_cast<std::size_t>(
          std::find_if(inst.pool.begin(), inst.pool.end(), [&](const Executor& e) { return e.id == id; }) -
          inst.pool.begin());
      for (auto [num, den] : {std::pair{99, 100}, {1, 2}, {1, 10}}) {
        std::vector<Executor> lower = inst.pool;
        lower[f].reported_cost = lower[f].reported_cost * Money(num, den);
        Allocation again = allocate_winners(lower, inst.budget);
        ++s.checks;
        if (std::find(again.winners.begin(), again.winners.end(), id) == again.winners.end()) {
          ++s.violations;
          if (s.first_violation.empty()) {
            s.first_violation = "executor " + std::to_string(id.value) + " ejected after lowering; " + describe(inst);
          }
        }
      }
    }
  }
  return s;
}

void check_outcome(const TaskAuctionOutcome& o, std::span<const Executor> pool, FeasibilitySummary& s) {
  ++s.outcomes;
  s.winners += o.winners.size();
  auto flag = [&](const std::string& what) {
    ++s.violations;
    if (s.first_violation.empty()) s.first_violation = task_label(o.task) + ": " + what;
  };
  if (o.total_payout() > o.per_task_budget) {
    flag("payout " + o.total_payout().to_string() + " exceeds " + o.per_task_budget.to_string());
  }
  for (auto id : o.winners) {
    auto it = std::find_if(pool.begin(), pool.end(), [&](const Executor& e) { return e.id == id; });
    if (it == pool.end()) {
      flag("winner " + std::to_string(id.value) + " not in pool");
    } else if (o.payment < it->reported_cost) {
      flag("payment " + o.payment.to_string() + " below bid " + it->reported_cost.to_string());
    }
  }
}

FeasibilitySummary check_budget_and_ir(std::size_t requesters, std::uint64_t seed) {
  FeasibilitySummary s;
  std::mt19937_64 rng(seed);
  for (std::size_t r = 0; r < requesters; ++r) {
    AuctionInstance inst = random_auction_instance(seed, r, 40);
    const auto id = static_cast<std::uint32_t>(r + 1);
    const Money budget(std::uniform_int_distribution<std::int64_t>(0, 50'000)(rng), 100);
    const auto n = std::uniform_int_distribution<std::uint32_t>(1, 7)(rng);
    for (bool floor_mode : {false, true}) {
      SortedPool pool(inst.pool);
      Money payout;
      for (std::uint32_t k = 1; k <= n; ++k) {
        Task t{RequesterId{id}, k, 0, 1};
        auto o = run_task_auction(t, pool, budget, n, floor_mode);
        check_outcome(o, inst.pool, s);
        payout += o.total_payout();
      }
      Money cap = per_task_budget(budget, n, floor_mode) * Money(n);
      if (payout > cap || cap > budget) {
        ++s.violations;
        if (s.first_violation.empty()) {
          s.first_violation = "requester " + std::to_string(id) + " paid " + payout.to_string() + " against " +
                              budget.to_string();
        }
      }
    }
  }
  return s;
}

std::size_t overlap_depth_oracle(const std::vector<Task>& tasks) {
  std::size_t best = 0;
  for (const auto& probe : tasks) {
    std::size_t covering = 0;
    for (const auto& t : tasks) covering += (t.start <= probe.start && probe.start <= t.finish) ? 1 : 0;
    best = std::max(best, covering);
  }
  return best;
}

SchedulerSummary check_scheduler(std::size_t sets, std::size_t max_tasks, std::uint64_t seed) {
  SchedulerSummary s;
  std::mt19937_64 rng(seed);
  for (std::size_t set = 0; set < sets; ++set) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, max_tasks)(rng);
    const Tick horizon = std::uniform_int_distribution<Tick>(5, 400)(rng);
    const Tick max_len = std::uniform_int_distribution<Tick>(0, 40)(rng);
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < n; ++i) {
      Tick start = std::uniform_int_distribution<Tick>(0, horizon)(rng);
      Tick len = std::uniform_int_distribution<Tick>(0, max_len)(rng);
      auto req = static_cast<std::uint32_t>(i % 17 + 1);
      tasks.push_back(Task{RequesterId{req}, static_cast<std::uint32_t>(i + 1), start, start + len});
    }
    ++s.sets;
    s.max_size = std::max(s.max_size, n);
    std::multiset<Tick> finishes;
    for (const auto& t : tasks) finishes.insert(t.finish);
    auto shares = [&](const Task& t) { return finishes.count(t.start) > (t.start == t.finish ? 1u : 0u); };
    if (std::any_of(tasks.begin(), tasks.end(), shares)) {
      ++s.endpoint_sharing_sets;
    }

    SlotAssignment a = partition_into_slots(tasks);
    const std::size_t depth = overlap_depth_oracle(tasks);
    if (a.slot_count != depth || a.order.size() != tasks.size()) {
      ++s.count_violations;
      if (s.first_violation.empty()) {
        s.first_violation = "set " + std::to_string(set) + ": " + std::to_string(a.slot_count) + " slots, depth " +
                            std::to_string(depth);
      }
    }
    for (std::uint32_t slot = 1; slot <= a.slot_count; ++slot) {
      auto members = a.slot_tasks(slot);
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if (incompatible(members[i], members[j])) {
            ++s.soundness_violations;
            if (s.first_violation.empty()) {
              s.first_violation = "slot " + std::to_string(slot) + " holds " + task_label(members[i]) + " and " +
                                  task_label(members[j]);
            }
          }
        }
      }
    }
  }
  return s;
}

}  // namespace bulinc::testing
