#include <doctest.h>

#include <algorithm>
#include <random>

#include "bulinc/interval_scheduler.hpp"
#include "fixtures.hpp"
#include "support/properties.hpp"

using namespace bulinc;
using bulinc::testing::task;

namespace {

std::vector<std::string> labels(const std::vector<Task>& tasks) {
  std::vector<std::string> out;
  for (const auto& t : tasks) out.push_back(task_label(t));
  return out;
}

}  // namespace

TEST_CASE("partition_into_slots: worked example membership") {
  auto a = partition_into_slots(testing::example_funded_tasks());
  REQUIRE(a.slot_count == 3);
  CHECK(labels(a.order) == std::vector<std::string>{"t_1^3", "t_1^5", "t_3^3", "t_1^2", "t_2^2", "t_2^3", "t_4^3",
                                                    "t_2^5", "t_3^5"});
  CHECK(labels(a.slot_tasks(1)) == std::vector<std::string>{"t_1^3", "t_1^2", "t_3^5"});
  CHECK(labels(a.slot_tasks(2)) == std::vector<std::string>{"t_1^5", "t_2^3", "t_2^5"});
  CHECK(labels(a.slot_tasks(3)) == std::vector<std::string>{"t_3^3", "t_2^2", "t_4^3"});
  CHECK(a.slot_for(task(2, 1, 6, 30)) == 1);
  CHECK_THROWS_AS(a.slot_for(task(4, 1, 0, 3)), std::out_of_range);
  CHECK(max_overlap_depth(testing::example_funded_tasks()) == 3);
  CHECK(testing::overlap_depth_oracle(testing::example_funded_tasks()) == 3);
}

TEST_CASE("partition_into_slots: small cases") {
  auto one = partition_into_slots({task(1, 1, 4, 9)});
  CHECK(one.slot_count == 1);
  CHECK(one.slot_of == std::vector<std::uint32_t>{1});

  CHECK(partition_into_slots({}).slot_count == 0);

  for (std::uint32_t k = 1; k <= 8; ++k) {
    std::vector<Task> same;
    for (std::uint32_t i = 1; i <= k; ++i) same.push_back(task(i, 1, 0, 5));
    CHECK(partition_into_slots(same).slot_count == k);
    CHECK(max_overlap_depth(same) == k);
  }

  // shared endpoint conflicts, a one-tick gap does not
  CHECK(partition_into_slots({task(1, 1, 0, 5), task(2, 1, 5, 9)}).slot_count == 2);
  CHECK(partition_into_slots({task(1, 1, 0, 5), task(2, 1, 6, 9)}).slot_count == 1);
  CHECK(max_overlap_depth({task(1, 1, 0, 2), task(2, 1, 3, 4), task(3, 1, 5, 6)}) == 1);
}

TEST_CASE("partition_into_slots: count equals overlap depth, slots are sound") {
  auto s = testing::check_scheduler(2000, 60, 17);
  INFO(s.first_violation);
  CHECK(s.count_violations == 0);
  CHECK(s.soundness_violations == 0);
}

TEST_CASE("partition_into_slots: input order does not matter") {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Task> tasks;
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    for (int i = 0; i < n; ++i) {
      Tick s = std::uniform_int_distribution<Tick>(0, 50)(rng);
      tasks.push_back(task(static_cast<std::uint32_t>(i % 5 + 1), static_cast<std::uint32_t>(i + 1), s,
                           s + std::uniform_int_distribution<Tick>(0, 10)(rng)));
    }
    auto base = partition_into_slots(tasks);
    std::shuffle(tasks.begin(), tasks.end(), rng);
    auto shuffled = partition_into_slots(tasks);
    CHECK(shuffled.slot_count == base.slot_count);
    CHECK(shuffled.slot_of == base.slot_of);
  }
}
