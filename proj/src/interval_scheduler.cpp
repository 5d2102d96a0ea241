#include "bulinc/interval_scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "bulinc/kernels.hpp"

namespace bulinc {

std::vector<Task> SlotAssignment::slot_tasks(std::uint32_t slot) const {
  std::vector<Task> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (slot_of[i] == slot) out.push_back(order[i]);
  }
  return out;
}

std::uint32_t SlotAssignment::slot_for(const Task& task) const {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == task) return slot_of[i];
  }
  throw std::out_of_range("task " + task_label(task) + " was not scheduled");
}

SlotAssignment partition_into_slots(std::vector<Task> tasks) {
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return std::tie(a.start, a.finish, a.requester, a.index) < std::tie(b.start, b.finish, b.requester, b.index);
  });

  SlotAssignment out;
  out.slot_of.reserve(tasks.size());
  // Tasks arrive by start time, so a task fits a slot iff it starts after the
  // slot's latest finish; that single number stands in for the whole slot.
  std::vector<std::int64_t> slot_finish;
  for (const auto& t : tasks) {
    std::size_t slot = kernels::first_free_slot(slot_finish, t.start);
    if (slot == slot_finish.size()) {
      slot_finish.push_back(t.finish);
    } else {
      slot_finish[slot] = std::max(slot_finish[slot], t.finish);
    }
    out.slot_of.push_back(static_cast<std::uint32_t>(slot + 1));
  }
  out.slot_count = static_cast<std::uint32_t>(slot_finish.size());
  out.order = std::move(tasks);
  return out;
}

std::size_t max_overlap_depth(const std::vector<Task>& tasks) {
  // A closed interval [s, f] covers the integer points s..f, so it opens at
  // s and closes at f + 1. Closings sort before openings at the same point.
  constexpr int kClose = 0;
  constexpr int kOpen = 1;
  std::vector<std::pair<Tick, int>> events;
  events.reserve(tasks.size() * 2);
  for (const auto& t : tasks) {
    events.emplace_back(t.start, kOpen);
    events.emplace_back(t.finish + 1, kClose);
  }
  std::sort(events.begin(), events.end());
  std::size_t depth = 0;
  std::size_t best = 0;
  for (const auto& [time, kind] : events) {
    if (kind == kOpen) {
      best = std::max(best, ++depth);
    } else {
      --depth;
    }
  }
  return best;
}

}  // namespace bulinc
