#pragma once

#include <cstdint>

#include "bulinc/rational.hpp"

namespace bulinc {

/// Every one of n requesters is funded independently with probability p.
/// The funded count Z is then Binomial(n, p).
struct BernoulliFundingModel {
  std::uint64_t n_requesters = 0;
  Rational p_fund{1};

  /// Throws std::invalid_argument unless n >= 1 and 0 < p <= 1.
  static BernoulliFundingModel make(std::uint64_t n_requesters, Rational p_fund);
  /// p = 1 / lambda.
  static BernoulliFundingModel from_lambda(std::uint64_t n_requesters, std::uint64_t lambda);
};

/// E[Z] = n p.
double expected_funded(const BernoulliFundingModel& model);
/// E[Z] = n p as an exact rational.
Rational expected_funded_exact(const BernoulliFundingModel& model);

/// ceil(3 n p), the Markov threshold at three times the mean.
std::uint64_t markov_threshold(const BernoulliFundingModel& model);

/// Pr{Z >= threshold}, summing binomial terms in log space so that
/// n in the hundreds does not underflow individual terms.
double tail_probability(const BernoulliFundingModel& model, std::uint64_t threshold);

struct AtLeastOneFunded {
  double exact;  // 1 - (1 - p)^n
  double bound;  // 1 - e^{-n p}; never above `exact`
};

AtLeastOneFunded prob_at_least_one(const BernoulliFundingModel& model);

/// Balls-into-bins mean load: total_tasks / slot_count.
double expected_tasks_per_slot(std::uint64_t total_tasks, std::uint64_t slot_count);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Draws Z for `trials` independent trials. Trial t reads Philox stream t
/// under key `seed`, so the estimate does not depend on evaluation order.
MonteCarloEstimate simulate_funded(const BernoulliFundingModel& model, std::uint64_t trials, std::uint64_t seed);

/// Funded count of a single trial (stream `trial`).
std::uint64_t simulate_funded_trial(const BernoulliFundingModel& model, std::uint64_t trial, std::uint64_t seed);

}  // namespace bulinc
