#include "bulinc/sim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bulinc/philox.hpp"

namespace bulinc::sim {
namespace {

constexpr std::uint64_t kPreferenceLabel = 0x70726566;  // "pref"
constexpr std::uint64_t kRequesterLabel = 0x72657173;   // "reqs"

std::int64_t cents_ceil(const Money& m) { return (m * Money(100)).ceil(); }
std::int64_t cents_floor(const Money& m) { return (m * Money(100)).floor(); }

}  // namespace

GeneratedProfile gen_preferences(const std::vector<Requester>& requesters, std::size_t n_dwellers,
                                 const Money& government_budget, std::uint64_t seed) {
  GeneratedProfile out;
  out.profile.ballots.resize(n_dwellers);
  const std::size_t n = requesters.size();
  if (n == 0 || n_dwellers == 0) return out;

  const bool any_fits = std::any_of(requesters.begin(), requesters.end(),
                                    [&](const Requester& r) { return r.budget <= government_budget; });
  if (!any_fits) {
    out.warnings.push_back("no requester budget fits the government budget " + government_budget.to_string() +
                           "; all " + std::to_string(n_dwellers) + " ballots are empty");
    return out;
  }

  // One Philox stream per dweller; a partial Fisher-Yates draws the ordered
  // subset and is undone afterwards so `perm` stays the identity.
  const std::uint64_t key_seed = derive_seed(seed, kPreferenceLabel);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<std::pair<std::size_t, std::size_t>> undo;
  for (std::size_t d = 0; d < n_dwellers; ++d) {
    PhiloxStream rng(key_seed, d);
    const std::size_t size = 1 + static_cast<std::size_t>(rng.next_below(n));
    Ballot& ballot = out.profile.ballots[d];
    Money sum;
    undo.clear();
    for (std::size_t i = 0; i < size; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
      std::swap(perm[i], perm[j]);
      undo.emplace_back(i, j);
      const Requester& r = requesters[perm[i]];
      // Cutting from the tail until the sum fits keeps exactly the longest
      // fitting prefix, so the draw can stop at the first overflow.
      if (sum + r.budget > government_budget) break;
      sum += r.budget;
      ballot.push_back(r.id);
    }
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) std::swap(perm[it->first], perm[it->second]);
  }
  return out;
}

std::vector<Executor> gen_executors(std::size_t count, const BidDistribution& dist, std::uint64_t seed,
                                    std::uint32_t first_id) {
  std::vector<Executor> pool;
  pool.reserve(count);
  PhiloxStream rng(seed, 0);
  const std::int64_t lo = std::max<std::int64_t>(1, cents_ceil(dist.lo));
  const std::int64_t hi = cents_floor(dist.hi);
  if (dist.kind == BidDistribution::Kind::uniform && hi < lo) {
    throw std::invalid_argument("uniform bid range [" + dist.lo.to_string() + ", " + dist.hi.to_string() +
                                "] holds no positive cent value");
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t cents = 0;
    if (dist.kind == BidDistribution::Kind::uniform) {
      cents = lo + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    } else {
      while (cents <= 0) cents = std::llround((dist.mean + dist.sd * rng.next_normal()) * 100.0);
    }
    pool.push_back(Executor::truthful(ExecutorId{first_id + static_cast<std::uint32_t>(i)}, Money(cents, 100)));
  }
  return pool;
}

std::vector<Requester> gen_requesters(const Tier1Spec& spec, std::uint64_t seed) {
  std::vector<Requester> out;
  out.reserve(spec.n_requesters);
  PhiloxStream rng(derive_seed(seed, kRequesterLabel), 0);
  const std::int64_t lo = spec.budget_lo.ceil();
  const std::int64_t hi = std::max(lo, spec.budget_hi.floor());
  for (std::size_t i = 0; i < spec.n_requesters; ++i) {
    Requester r;
    r.id = RequesterId{static_cast<std::uint32_t>(i + 1)};
    r.budget = Money(lo + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1))));
    const auto n_tasks = spec.tasks_lo + static_cast<std::uint32_t>(rng.next_below(spec.tasks_hi - spec.tasks_lo + 1));
    for (std::uint32_t k = 1; k <= n_tasks; ++k) {
      Tick start = static_cast<Tick>(rng.next_below(static_cast<std::uint64_t>(spec.horizon) + 1));
      Tick length = static_cast<Tick>(rng.next_below(static_cast<std::uint64_t>(spec.max_duration) + 1));
      r.tasks.push_back(Task{r.id, k, start, start + length});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bulinc::sim
