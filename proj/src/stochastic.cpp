#include "bulinc/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bulinc/kernels.hpp"
#include "bulinc/philox.hpp"

namespace bulinc {
namespace {

bool is_certain(const BernoulliFundingModel& m) { return m.p_fund == Rational(1); }

// floor(p * 2^32); p < 1 so this fits in 32 bits.
std::uint32_t bernoulli_threshold(const Rational& p) {
  __int128 scaled = (__int128(p.num()) << 32) / p.den();
  return static_cast<std::uint32_t>(scaled);
}

}  // namespace

BernoulliFundingModel BernoulliFundingModel::make(std::uint64_t n_requesters, Rational p_fund) {
  if (n_requesters == 0) throw std::invalid_argument("funding model needs at least one requester");
  if (p_fund <= Rational(0) || p_fund > Rational(1)) {
    throw std::invalid_argument("funding probability must lie in (0, 1], got " + p_fund.to_string());
  }
  return {n_requesters, p_fund};
}

BernoulliFundingModel BernoulliFundingModel::from_lambda(std::uint64_t n_requesters, std::uint64_t lambda) {
  if (lambda == 0) throw std::invalid_argument("lambda must be positive");
  return make(n_requesters, Rational(1, static_cast<std::int64_t>(lambda)));
}

double expected_funded(const BernoulliFundingModel& model) { return expected_funded_exact(model).to_double(); }

Rational expected_funded_exact(const BernoulliFundingModel& model) {
  return Rational(static_cast<std::int64_t>(model.n_requesters)) * model.p_fund;
}

std::uint64_t markov_threshold(const BernoulliFundingModel& model) {
  return static_cast<std::uint64_t>((Rational(3) * expected_funded_exact(model)).ceil());
}

double tail_probability(const BernoulliFundingModel& model, std::uint64_t threshold) {
  const std::uint64_t n = model.n_requesters;
  if (threshold == 0) return 1.0;
  if (threshold > n) return 0.0;
  if (is_certain(model)) return 1.0;

  const long double p = static_cast<long double>(model.p_fund.num()) / model.p_fund.den();
  const long double log_p = std::log(p);
  const long double log_q = std::log1p(-p);
  const long double log_n_fact = std::lgamma(static_cast<long double>(n) + 1);

  std::vector<long double> logs;
  logs.reserve(n - threshold + 1);
  for (std::uint64_t k = threshold; k <= n; ++k) {
    const auto kk = static_cast<long double>(k);
    const auto rest = static_cast<long double>(n - k);
    logs.push_back(log_n_fact - std::lgamma(kk + 1) - std::lgamma(rest + 1) + kk * log_p + rest * log_q);
  }
  const long double peak = *std::max_element(logs.begin(), logs.end());
  long double sum = 0;
  for (auto l : logs) sum += std::exp(l - peak);
  return static_cast<double>(std::min<long double>(1.0L, std::exp(peak) * sum));
}

AtLeastOneFunded prob_at_least_one(const BernoulliFundingModel& model) {
  const double p = model.p_fund.to_double();
  const auto n = static_cast<double>(model.n_requesters);
  AtLeastOneFunded out{};
  out.exact = is_certain(model) ? 1.0 : -std::expm1(n * std::log1p(-p));
  out.bound = -std::expm1(-n * p);
  return out;
}

double expected_tasks_per_slot(std::uint64_t total_tasks, std::uint64_t slot_count) {
  if (slot_count == 0) throw std::invalid_argument("slot count must be positive");
  return static_cast<double>(total_tasks) / static_cast<double>(slot_count);
}

std::uint64_t simulate_funded_trial(const BernoulliFundingModel& model, std::uint64_t trial, std::uint64_t seed) {
  if (is_certain(model)) return model.n_requesters;
  return kernels::count_below(philox::key_from_seed(seed), trial, model.n_requesters,
                              bernoulli_threshold(model.p_fund));
}

MonteCarloEstimate simulate_funded(const BernoulliFundingModel& model, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("simulate_funded needs at least one trial");
  // Integer sums are exact, so the result is independent of summation order.
  unsigned __int128 sum = 0;
  unsigned __int128 sum_sq = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t z = simulate_funded_trial(model, t, seed);
    sum += z;
    sum_sq += static_cast<unsigned __int128>(z) * z;
  }
  MonteCarloEstimate est;
  est.trials = trials;
  est.seed = seed;
  const auto t = static_cast<long double>(trials);
  const auto s = static_cast<long double>(sum);
  est.mean = static_cast<double>(s / t);
  if (trials > 1) {
    // (sum_sq - sum^2 / T) / (T - 1), numerator formed exactly first.
    const auto centered = static_cast<long double>(sum_sq * trials - sum * sum) / t;
    const long double var = centered / (t - 1);
    est.standard_error = static_cast<double>(std::sqrt(std::max<long double>(var, 0) / t));
  }
  return est;
}

}  // namespace bulinc
