#pragma once

#include <vector>

#include "bulinc/market.hpp"

// The five-requester, ten-dweller example market used by several suites.
namespace bulinc::testing {

inline Task task(std::uint32_t requester, std::uint32_t index, Tick start, Tick finish) {
  return Task{RequesterId{requester}, index, start, finish};
}

inline std::vector<Requester> example_requesters() {
  return {
      {RequesterId{1}, Money(10), {task(1, 1, 0, 3)}},
      {RequesterId{2}, Money(20), {task(2, 1, 6, 30), task(2, 2, 7, 10)}},
      {RequesterId{3}, Money(30), {task(3, 1, 0, 4), task(3, 2, 9, 14), task(3, 3, 2, 5), task(3, 4, 11, 16)}},
      {RequesterId{4}, Money(40), {task(4, 1, 0, 3)}},
      {RequesterId{5}, Money(50), {task(5, 1, 1, 8), task(5, 2, 15, 20), task(5, 3, 31, 35)}},
  };
}

inline Ballot ballot(std::initializer_list<std::uint32_t> ids) {
  Ballot b;
  for (auto id : ids) b.push_back(RequesterId{id});
  return b;
}

inline PreferenceProfile example_profile() {
  return {{
      ballot({4, 5, 1}),
      ballot({5, 2, 3}),
      ballot({2, 5, 1}),
      ballot({3, 2, 1, 4}),
      ballot({1, 3, 5}),
      ballot({5, 2, 3}),
      ballot({5, 4, 1}),
      ballot({5, 3, 2}),
      ballot({3, 5, 2}),
      ballot({2, 5, 3}),
  }};
}

inline const Money kExampleGovernmentBudget{100};

/// Slot-1 executors e1..e10 with costs 3, 2, 9, 4, 3, 5, 3, 9, 10, 10.
inline std::vector<Executor> example_pool() {
  const int costs[] = {3, 2, 9, 4, 3, 5, 3, 9, 10, 10};
  std::vector<Executor> pool;
  for (std::uint32_t i = 0; i < 10; ++i) pool.push_back(Executor::truthful(ExecutorId{i + 1}, Money(costs[i])));
  return pool;
}

inline std::vector<Task> example_funded_tasks() {
  std::vector<Task> out;
  for (const auto& r : example_requesters()) {
    if (r.id.value == 2 || r.id.value == 3 || r.id.value == 5) out.insert(out.end(), r.tasks.begin(), r.tasks.end());
  }
  return out;
}

}  // namespace bulinc::testing
