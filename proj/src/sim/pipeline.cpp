#include "bulinc/sim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "bulinc/philox.hpp"
#include "bulinc/sim/generators.hpp"
#include "bulinc/sim/io.hpp"

namespace bulinc::sim {
namespace {

constexpr std::uint64_t kPoolLabel = 0x706f6f6c;  // "pool"
constexpr std::uint64_t kMgmLabel = 0x6d676d;     // "mgm"
constexpr std::uint64_t kMonteCarloLabel = 0x6d63;
constexpr std::uint64_t kTimingLabel = 0x74696d65;

template <class F>
auto in_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

std::uint64_t pool_seed(std::uint64_t round_seed, std::uint32_t slot) {
  return derive_seed(derive_seed(round_seed, kPoolLabel), slot);
}

std::uint64_t mgm_seed(std::uint64_t round_seed, std::uint32_t slot) {
  return derive_seed(derive_seed(round_seed, kMgmLabel), slot);
}

std::map<ExecutorId, Money> true_costs(std::span<const Executor> pool) {
  std::map<ExecutorId, Money> out;
  for (const auto& e : pool) out.emplace(e.id, e.true_cost);
  return out;
}

const Mechanism& rule_for(const std::string& name) {
  static const Mechanism bulinc = proportional_share_mechanism();
  static const Mechanism greedy = greedy_mechanism();
  return name == "BULINC" ? bulinc : greedy;
}

std::vector<Executor> mgm_pool(const SlotInstance& slot, const ExperimentConfig& config, std::uint64_t round_seed) {
  return manipulate_bids(slot.pool, config.mgm_fraction, config.mgm_inflation, mgm_seed(round_seed, slot.slot));
}

// Gain of the manipulated executors under `rule`, manipulated pool against truthful pool.
Money slot_utility(const std::vector<MechanismResult>& results, const Executor& e) {
  Money u;
  for (const auto& r : results) u += executor_utility(r, e);
  return u;
}

ManipulationGain manipulation_gain(const std::string& rule, const SlotInstance& slot,
                                   const std::vector<Executor>& manipulated, bool unilateral) {
  ManipulationGain g;
  g.slot = slot.slot;
  g.rule = rule;
  const Mechanism& mech = rule_for(rule);
  auto truthful = mech.run(slot.pool, slot.budgets);
  auto lied = mech.run(manipulated, slot.budgets);
  if (unilateral) g.unilateral_gainers = 0;
  std::vector<Executor> alone = slot.pool;
  for (std::size_t i = 0; i < manipulated.size(); ++i) {
    const Executor& e = manipulated[i];
    if (e.reported_cost == e.true_cost) continue;
    ++g.manipulators;
    const Money honest = slot_utility(truthful, e);
    const Money gain = slot_utility(lied, e) - honest;
    if (gain > Money(0)) ++g.gainers;
    g.total_gain += gain;
    if (g.manipulators == 1 || gain > g.max_gain) g.max_gain = gain;
    if (unilateral) {
      alone[i].reported_cost = e.reported_cost;
      const Money solo = slot_utility(mech.run(alone, slot.budgets), e) - honest;
      alone[i].reported_cost = alone[i].true_cost;
      if (solo > Money(0)) ++*g.unilateral_gainers;
      if (g.manipulators == 1 || solo > g.unilateral_max_gain) g.unilateral_max_gain = solo;
    }
  }
  return g;
}

std::vector<Requester> load_or_generate_requesters(const ExperimentConfig& c) {
  if (c.inputs.requesters.empty()) return gen_requesters(c.tier1, c.seed);
  auto requesters = read_requesters_csv(c.inputs.requesters);
  if (!c.inputs.tasks.empty()) attach_tasks(requesters, read_tasks_csv(c.inputs.tasks));
  return requesters;
}

void fill_tier1(RunReport& report) {
  const auto& c = report.config;
  in_stage("tier1", [&] {
    report.requesters = load_or_generate_requesters(c);
    if (!c.inputs.ballots.empty()) {
      report.profile = read_ballots_csv(c.inputs.ballots);
    } else {
      auto gen = gen_preferences(report.requesters, c.tier1.n_dwellers, c.tier1.government_budget, c.seed);
      report.profile = std::move(gen.profile);
      for (auto& w : gen.warnings) report.warnings.push_back("tier1: " + w);
    }
    auto problems = validate_market(report.requesters, {}, c.tier1.government_budget);
    auto profile_problems = validate_profile(report.profile, report.requesters, c.tier1.government_budget);
    problems.insert(problems.end(), profile_problems.begin(), profile_problems.end());
    if (!problems.empty()) {
      std::string msg = "invalid market:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw std::invalid_argument(msg);
    }
    report.tally = tally_votes(report.profile, report.requesters);
    report.funding = select_funded(report.requesters, report.tally, c.tier1.government_budget);
    report.dweller_welfare = dweller_welfare(report.funding, report.profile, report.requesters);
    return 0;
  });
}

std::vector<SlotInstance> build_slots(const RunReport& report, std::uint64_t round_seed,
                                      const std::optional<std::vector<Executor>>& fixed_pool) {
  const auto& c = report.config;
  std::vector<SlotInstance> out;
  auto pool_for = [&](std::uint32_t slot) {
    if (fixed_pool) return *fixed_pool;
    const SlotSpec& spec = c.slot_spec(slot);
    return gen_executors(spec.n_executors, spec.bids, pool_seed(round_seed, slot));
  };

  if (c.mode == ExperimentConfig::Mode::tier2) {
    for (const auto& spec : c.slots) {
      SlotInstance s;
      s.slot = spec.index;
      s.tasks.push_back(Task{RequesterId{spec.index}, 1, 0, 0});
      s.budgets.push_back(per_task_budget(spec.budget, 1, c.floor_mode));
      s.pool = pool_for(spec.index);
      out.push_back(std::move(s));
    }
    return out;
  }

  if (!report.schedule) return out;
  std::map<RequesterId, const Requester*> owner;
  for (const auto& r : report.requesters) owner[r.id] = &r;
  for (std::uint32_t slot = 1; slot <= report.schedule->slot_count; ++slot) {
    SlotInstance s;
    s.slot = slot;
    s.tasks = report.schedule->slot_tasks(slot);
    for (const auto& t : s.tasks) {
      const Requester& r = *owner.at(t.requester);
      s.budgets.push_back(per_task_budget(r.budget, static_cast<std::uint32_t>(r.tasks.size()), c.floor_mode));
    }
    s.pool = pool_for(slot);
    out.push_back(std::move(s));
  }
  return out;
}

void check_conservation(RunReport& report, const RoundReport& round, const std::vector<SlotInstance>& slots) {
  std::map<std::pair<std::string, RequesterId>, Money> paid;  // (mechanism, requester) -> payments
  for (const auto& run : round.runs) {
    const std::string where = "round " + std::to_string(round.round) + " slot " + std::to_string(run.slot) + " " +
                              run.mechanism;
    if (run.budget_utilized > run.slot_budget) {
      report.conservation_problems.push_back(where + ": paid " + run.budget_utilized.to_string() + " of " +
                                             run.slot_budget.to_string());
    }
    const SlotInstance& inst = *std::find_if(slots.begin(), slots.end(), [&](auto& s) { return s.slot == run.slot; });
    for (std::size_t t = 0; t < run.per_task.size(); ++t) {
      for (const auto& p : check_mechanism_result(run.per_task[t], run.pool, inst.budgets[t])) {
        report.conservation_problems.push_back(where + " " + task_label(inst.tasks[t]) + ": " + p);
      }
      paid[{run.mechanism, inst.tasks[t].requester}] += run.per_task[t].total_payment();
    }
  }
  if (report.config.mode != ExperimentConfig::Mode::pipeline) return;
  for (const auto& [key, amount] : paid) {
    auto it = std::find_if(report.requesters.begin(), report.requesters.end(),
                           [&](const Requester& r) { return r.id == key.second; });
    if (it != report.requesters.end() && amount > it->budget) {
      report.conservation_problems.push_back("round " + std::to_string(round.round) + " " + key.first +
                                             ": requester " + std::to_string(key.second.value) + " paid out " +
                                             amount.to_string() + " of " + it->budget.to_string());
    }
  }
}

}  // namespace

MechanismSlotRun run_mechanism(const std::string& mechanism, const SlotInstance& slot, const ExperimentConfig& config,
                               std::uint64_t round_seed) {
  MechanismSlotRun run;
  run.mechanism = mechanism;
  run.slot = slot.slot;
  run.pool = mechanism == "MGM" ? mgm_pool(slot, config, round_seed) : slot.pool;
  run.per_task = rule_for(mechanism).run(run.pool, slot.budgets);
  const auto costs = true_costs(run.pool);
  for (const auto& b : slot.budgets) run.slot_budget += b;
  for (const auto& r : run.per_task) {
    run.budget_utilized += r.total_payment();
    run.n_winners += r.winners.size();
    for (std::size_t i = 0; i < r.winners.size(); ++i) run.sum_te_utility += r.payments[i] - costs.at(r.winners[i]);
  }
  return run;
}

std::vector<MonteCarloRow> run_montecarlo(const ExperimentConfig& c) {
  std::vector<std::uint64_t> ns = c.mc_n;
  if (ns.empty() && !c.inputs.categories.empty()) {
    for (const auto& [name, count] : ingest_category_csv(c.inputs.categories)) {
      if (count > 0) ns.push_back(count);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  }
  std::vector<MonteCarloRow> out;
  std::uint64_t cell = 0;
  for (auto n : ns) {
    for (const auto& p : c.mc_p) {
      auto model = BernoulliFundingModel::make(n, p);
      MonteCarloRow row;
      row.n = n;
      row.p = p;
      row.estimate = simulate_funded(model, c.trials, derive_seed(derive_seed(c.seed, kMonteCarloLabel), cell++));
      row.exact = expected_funded_exact(model);
      out.push_back(row);
    }
  }
  return out;
}

std::vector<TimingRow> run_timings(const ExperimentConfig& c) {
  std::vector<TimingRow> out;
  for (auto n : c.timing.agent_counts) {
    const auto seed = derive_seed(derive_seed(c.seed, kTimingLabel), n);
    SlotInstance slot;
    slot.slot = 1;
    slot.pool = gen_executors(n, c.default_slot.bids, seed);
    slot.budgets = {c.timing.budget_per_agent * Money(static_cast<std::int64_t>(n))};
    for (const auto& name : c.mechanisms) {
      // MGM bids are part of the input, so inflate outside the timed region.
      const std::vector<Executor> pool = name == "MGM" ? mgm_pool(slot, c, seed) : slot.pool;
      const Mechanism& mech = rule_for(name);
      std::vector<double> samples;
      for (std::size_t r = 0; r < c.timing.repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        auto result = mech.run(pool, slot.budgets);
        auto t1 = std::chrono::steady_clock::now();
        if (result.size() != 1) throw std::logic_error("mechanism returned the wrong number of results");
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
      std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2),
                       samples.end());
      out.push_back({name, n, samples[samples.size() / 2]});
    }
  }
  return out;
}

RunReport run_tier1(const ExperimentConfig& config) {
  RunReport report;
  report.config = config;
  fill_tier1(report);
  report.montecarlo = in_stage("montecarlo", [&] { return run_montecarlo(config); });
  report.agent_count = report.requesters.size() + report.profile.ballots.size();
  return report;
}

RunReport run_pipeline(const ExperimentConfig& config) {
  if (auto problems = validate_config(config); !problems.empty()) {
    throw std::invalid_argument("config: " + problems.front());
  }
  RunReport report;
  report.config = config;

  if (config.mode == ExperimentConfig::Mode::pipeline) {
    fill_tier1(report);
    in_stage("tier2 scheduling", [&] {
      std::vector<Task> funded_tasks;
      for (auto id : report.funding.funded) {
        const auto& r = *std::find_if(report.requesters.begin(), report.requesters.end(),
                                      [&](const Requester& x) { return x.id == id; });
        funded_tasks.insert(funded_tasks.end(), r.tasks.begin(), r.tasks.end());
      }
      report.schedule = partition_into_slots(std::move(funded_tasks));
      return 0;
    });
  }

  std::optional<std::vector<Executor>> fixed_pool;
  if (!config.inputs.pool.empty()) fixed_pool = in_stage("tier2", [&] { return read_pool_csv(config.inputs.pool); });

  const bool want_gains = std::find(config.mechanisms.begin(), config.mechanisms.end(), "MGM") !=
                          config.mechanisms.end();
  in_stage("tier2 auctions", [&] {
    for (std::uint32_t r = 1; r <= config.rounds; ++r) {
      RoundReport round;
      round.round = r;
      round.seed = derive_seed(config.seed, r);
      auto slots = build_slots(report, round.seed, fixed_pool);
      for (const auto& slot : slots) {
        for (const auto& name : config.mechanisms) round.runs.push_back(run_mechanism(name, slot, config, round.seed));
        if (want_gains) {
          auto manipulated = mgm_pool(slot, config, round.seed);
          round.gains.push_back(manipulation_gain("GM", slot, manipulated, config.mgm_unilateral));
          round.gains.push_back(manipulation_gain("BULINC", slot, manipulated, config.mgm_unilateral));
        }
      }
      check_conservation(report, round, slots);
      if (r == 1) report.slots = std::move(slots);
      report.rounds.push_back(std::move(round));
    }
    return 0;
  });

  report.montecarlo = in_stage("montecarlo", [&] { return run_montecarlo(config); });
  report.timings = in_stage("timing", [&] { return run_timings(config); });

  report.agent_count = report.requesters.size() + report.profile.ballots.size();
  for (const auto& s : report.slots) report.agent_count += s.pool.size();
  return report;
}

std::vector<MetricRow> metrics(const RunReport& report) {
  std::vector<MetricRow> rows;
  std::map<std::pair<std::uint32_t, std::size_t>, MetricRow> totals;  // (slot, mechanism position)
  auto position = [&](const std::string& name) {
    auto& m = report.config.mechanisms;
    return static_cast<std::size_t>(std::find(m.begin(), m.end(), name) - m.begin());
  };
  for (const auto& round : report.rounds) {
    for (const auto& run : round.runs) {
      MetricRow row;
      row.round = round.round;
      row.slot = run.slot;
      row.mechanism = run.mechanism;
      const auto costs = true_costs(run.pool);
      std::int64_t winners = 0;
      for (const auto& r : run.per_task) {
        for (std::size_t i = 0; i < r.winners.size(); ++i) {
          row.budget_utilized += r.payments[i];
          row.sum_te_utility += r.payments[i] - costs.at(r.winners[i]);
          ++winners;
        }
      }
      row.n_winners = Money(winners);
      rows.push_back(row);

      auto& total = totals[{run.slot, position(run.mechanism)}];
      total.slot = run.slot;
      total.mechanism = run.mechanism;
      total.sum_te_utility += row.sum_te_utility;
      total.budget_utilized += row.budget_utilized;
      total.n_winners += row.n_winners;
    }
  }
  if (!report.rounds.empty()) {
    const Money n_rounds(static_cast<std::int64_t>(report.rounds.size()));
    for (auto& [key, total] : totals) {
      total.sum_te_utility = total.sum_te_utility / n_rounds;
      total.budget_utilized = total.budget_utilized / n_rounds;
      total.n_winners = total.n_winners / n_rounds;
      rows.push_back(total);
    }
  }
  return rows;
}

}  // namespace bulinc::sim
