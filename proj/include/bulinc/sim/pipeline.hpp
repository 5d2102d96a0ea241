#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bulinc/budget_auction.hpp"
#include "bulinc/interval_scheduler.hpp"
#include "bulinc/market.hpp"
#include "bulinc/participatory_budgeting.hpp"
#include "bulinc/sim/config.hpp"
#include "bulinc/stochastic.hpp"

namespace bulinc::sim {

/// One auction per task of the slot. `budgets[i]` belongs to `tasks[i]`.
struct SlotInstance {
  std::uint32_t slot = 0;
  std::vector<Task> tasks;
  std::vector<Money> budgets;
  std::vector<Executor> pool;  // truthful costs
};

/// Outcome of one mechanism on one slot. The pool is the one the mechanism
/// saw (inflated bids for MGM); utilities always use true costs.
struct MechanismSlotRun {
  std::string mechanism;
  std::uint32_t slot = 0;
  std::vector<Executor> pool;
  std::vector<MechanismResult> per_task;
  Money slot_budget;
  Money sum_te_utility;
  Money budget_utilized;
  std::size_t n_winners = 0;
};

/// Utility change of the MGM manipulators relative to the truthful run of
/// the same pool, under one allocation rule. `gainers` compares the joint
/// deviation (all manipulators inflate together); `unilateral_gainers`
/// lets each manipulator inflate alone against truthful rivals.
struct ManipulationGain {
  std::uint32_t slot = 0;
  std::string rule;           // "GM" or "BULINC"
  std::size_t manipulators = 0;
  std::size_t gainers = 0;    // strictly better off than when truthful
  Money total_gain;
  Money max_gain;
  std::optional<std::size_t> unilateral_gainers;  // unset when [mgm] unilateral = false
  Money unilateral_max_gain;
};

struct RoundReport {
  std::uint32_t round = 0;  // 1-based
  std::uint64_t seed = 0;
  std::vector<MechanismSlotRun> runs;
  std::vector<ManipulationGain> gains;
};

struct MonteCarloRow {
  std::uint64_t n = 0;
  Rational p;
  MonteCarloEstimate estimate;
  Rational exact;  // n p
};

struct TimingRow {
  std::string mechanism;
  std::size_t n_agents = 0;
  double millis = 0.0;
};

struct RunReport {
  ExperimentConfig config;

  // tier 1 (empty in tier-2 mode)
  std::vector<Requester> requesters;
  PreferenceProfile profile;
  Tally tally;
  FundingDecision funding;
  Money dweller_welfare;

  // tier 2
  std::optional<SlotAssignment> schedule;
  std::vector<SlotInstance> slots;  // the round-1 instances
  std::vector<RoundReport> rounds;

  std::vector<MonteCarloRow> montecarlo;
  std::vector<TimingRow> timings;

  std::size_t agent_count = 0;  // requesters + dwellers + executors of round 1
  std::vector<std::string> warnings;
  /// Harness-level budget checks per slot and per requester; empty when all hold.
  std::vector<std::string> conservation_problems;
};

/// Tier 1, tier 2 over `config.rounds` derived seeds, Monte Carlo grid and
/// timings. Errors from components are rethrown prefixed with the stage.
RunReport run_pipeline(const ExperimentConfig& config);

/// Tier 1 only (generation or files, tally, funding), plus the Monte Carlo grid.
RunReport run_tier1(const ExperimentConfig& config);

/// Monte Carlo grid of the config.
std::vector<MonteCarloRow> run_montecarlo(const ExperimentConfig& config);

/// Median wall-clock of each configured mechanism over a generated pool of
/// every configured size. Only the mechanism call is timed.
std::vector<TimingRow> run_timings(const ExperimentConfig& config);

/// Runs `mechanism` ("BULINC", "GM" or "MGM") on one slot instance.
MechanismSlotRun run_mechanism(const std::string& mechanism, const SlotInstance& slot, const ExperimentConfig& config,
                               std::uint64_t round_seed);

struct MetricRow {
  std::optional<std::uint32_t> round;  // nullopt: average over rounds
  std::uint32_t slot = 0;
  std::string mechanism;
  Money sum_te_utility;
  Money budget_utilized;
  Money n_winners;  // a rational on the averaged rows
};

/// Per-round rows recomputed from the raw outcomes and true costs, followed
/// by the per-(slot, mechanism) averages.
std::vector<MetricRow> metrics(const RunReport& report);

/// Writes metrics.csv, funding.csv, schedule.csv, montecarlo.csv and
/// timings.csv into `out_dir`, creating it if needed. Throws
/// std::runtime_error naming the path on I/O failure.
void emit_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

}  // namespace bulinc::sim
