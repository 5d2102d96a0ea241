#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bulinc/market.hpp"

namespace bulinc {

struct SlotAssignment {
  /// Tasks in processing order (start, finish, requester, index).
  std::vector<Task> order;
  /// slot_of[i] is the 1-based slot of order[i].
  std::vector<std::uint32_t> slot_of;
  std::uint32_t slot_count = 0;

  /// Tasks of slot `slot` (1-based) in placement order.
  std::vector<Task> slot_tasks(std::uint32_t slot) const;
  /// 1-based slot of `task`; throws std::out_of_range if absent.
  std::uint32_t slot_for(const Task& task) const;
};

/// First-fit interval partitioning. Tasks are taken by ascending start time
/// and each goes to the lowest-indexed slot whose every task is compatible
/// with it; a new slot is opened only when none is. Uses exactly
/// max_overlap_depth(tasks) slots.
SlotAssignment partition_into_slots(std::vector<Task> tasks);

/// Maximum number of closed task intervals sharing one integer time point.
std::size_t max_overlap_depth(const std::vector<Task>& tasks);

}  // namespace bulinc
