#include "bulinc/market.hpp"

#include <set>

namespace bulinc {

bool incompatible(const Task& a, const Task& b) {
  // The four containment / straddle patterns, each chained with <=.
  return (a.start <= b.start && b.start <= b.finish && b.finish <= a.finish) ||
         (a.start <= b.start && b.start <= a.finish && a.finish <= b.finish) ||
         (b.start <= a.start && a.start <= b.finish && b.finish <= a.finish) ||
         (b.start <= a.start && a.start <= a.finish && a.finish <= b.finish);
}

std::string task_label(const Task& task) {
  return "t_" + std::to_string(task.index) + "^" + std::to_string(task.requester.value);
}

ValidationReport validate_market(const std::vector<Requester>& requesters,
                                 const std::vector<Executor>& executors,
                                 const Money& government_budget) {
  ValidationReport report;
  if (government_budget.is_negative()) {
    report.push_back("government budget is negative: " + government_budget.to_string());
  }

  std::set<RequesterId> seen_requesters;
  for (const auto& r : requesters) {
    const std::string who = "requester " + std::to_string(r.id.value);
    if (!seen_requesters.insert(r.id).second) report.push_back(who + ": duplicate id");
    if (r.budget.is_negative()) report.push_back(who + ": negative budget " + r.budget.to_string());
    if (r.tasks.empty()) report.push_back(who + ": has no tasks");
    std::set<std::uint32_t> indices;
    for (const auto& t : r.tasks) {
      if (t.requester != r.id) {
        report.push_back(who + ": task " + task_label(t) + " belongs to another requester");
      }
      if (t.index == 0) report.push_back(who + ": task index must be positive");
      if (!indices.insert(t.index).second) report.push_back(who + ": duplicate task " + task_label(t));
      if (t.finish < t.start) {
        report.push_back(who + ": task " + task_label(t) + " finishes (" + std::to_string(t.finish) +
                         ") before it starts (" + std::to_string(t.start) + ")");
      }
    }
  }

  std::set<ExecutorId> seen_executors;
  for (const auto& e : executors) {
    const std::string who = "executor " + std::to_string(e.id.value);
    if (!seen_executors.insert(e.id).second) report.push_back(who + ": duplicate id");
    if (e.true_cost <= Money(0)) report.push_back(who + ": true cost must be positive, got " + e.true_cost.to_string());
    if (e.reported_cost <= Money(0)) {
      report.push_back(who + ": reported cost must be positive, got " + e.reported_cost.to_string());
    }
  }
  return report;
}

ValidationReport validate_profile(const PreferenceProfile& profile,
                                  const std::vector<Requester>& requesters,
                                  const Money& government_budget) {
  std::map<RequesterId, Money> budgets;
  for (const auto& r : requesters) budgets.emplace(r.id, r.budget);

  ValidationReport report;
  for (std::size_t i = 0; i < profile.ballots.size(); ++i) {
    const std::string who = "ballot " + std::to_string(i + 1);
    std::set<RequesterId> seen;
    Money total;
    for (auto id : profile.ballots[i]) {
      auto it = budgets.find(id);
      if (it == budgets.end()) {
        report.push_back(who + ": unknown requester " + std::to_string(id.value));
        continue;
      }
      if (!seen.insert(id).second) report.push_back(who + ": requester " + std::to_string(id.value) + " repeated");
      total += it->second;
    }
    if (total > government_budget) {
      report.push_back(who + ": budget sum " + total.to_string() + " exceeds " + government_budget.to_string());
    }
  }
  return report;
}

}  // namespace bulinc
