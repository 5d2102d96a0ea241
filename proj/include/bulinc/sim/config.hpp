#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bulinc/market.hpp"

namespace bulinc::sim {

struct BidDistribution {
  enum class Kind { uniform, normal };
  Kind kind = Kind::uniform;
  Money lo{10};   // uniform bounds, inclusive
  Money hi{25};
  double mean = 17.0;  // normal parameters
  double sd = 5.0;
};

struct SlotSpec {
  std::uint32_t index = 1;
  std::size_t n_executors = 0;
  BidDistribution bids;
  Money budget;  // tier-2 mode only: the slot's single task budget
};

struct Tier1Spec {
  std::size_t n_requesters = 0;
  std::size_t n_dwellers = 0;
  Money budget_lo{10};
  Money budget_hi{50};
  Money government_budget;
  std::uint32_t tasks_lo = 1;  // tasks per generated requester
  std::uint32_t tasks_hi = 3;
  Tick horizon = 100;          // task starts in [0, horizon]
  Tick max_duration = 10;      // finish - start in [0, max_duration]
};

struct InputFiles {
  std::filesystem::path requesters;  // requester_id,budget
  std::filesystem::path tasks;       // requester_id,task_index,start,finish
  std::filesystem::path ballots;     // dweller,ranking
  std::filesystem::path pool;        // executor_id,true_cost,reported_cost
  std::filesystem::path categories;  // category,count
};

struct TimingSpec {
  std::vector<std::size_t> agent_counts;  // empty: no timing rows
  std::size_t repeats = 3;                // median of this many runs
  Money budget_per_agent{5};
};

struct ExperimentConfig {
  enum class Mode { pipeline, tier2 };

  std::uint64_t seed = 1;
  Mode mode = Mode::pipeline;
  std::size_t rounds = 10;
  bool floor_mode = false;
  std::uint64_t trials = 100'000;

  Tier1Spec tier1;
  /// Pipeline mode: per-slot pool overrides, falling back to `default_slot`.
  /// Tier-2 mode: the slot table itself.
  std::vector<SlotSpec> slots;
  SlotSpec default_slot{0, 50, {}, Money(0)};

  std::vector<std::string> mechanisms{"BULINC", "GM", "MGM"};
  Money mgm_fraction{3, 10};
  Money mgm_inflation{3, 10};
  bool mgm_unilateral = true;  // also test each manipulator alone

  std::vector<std::uint64_t> mc_n;  // Monte Carlo grid; empty disables
  std::vector<Rational> mc_p;

  InputFiles inputs;
  TimingSpec timing;

  /// Pool spec for slot `index` (1-based): explicit entry or the default.
  const SlotSpec& slot_spec(std::uint32_t index) const;
};

/// Reads an INI file. Relative input paths resolve against the file's
/// directory. Throws std::runtime_error with the offending key on bad values.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Problems with the config (empty when valid).
std::vector<std::string> validate_config(const ExperimentConfig& config);

std::string to_string(ExperimentConfig::Mode mode);

}  // namespace bulinc::sim
