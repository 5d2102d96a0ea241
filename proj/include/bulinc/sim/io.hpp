#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bulinc/market.hpp"

// CSV readers. Every file has a header row; fields may be double-quoted.
// Errors are std::runtime_error naming the file and line.
namespace bulinc::sim {

using CategoryCounts = std::vector<std::pair<std::string, std::uint64_t>>;

CategoryCounts ingest_category_csv(const std::filesystem::path& path);
std::vector<Task> read_tasks_csv(const std::filesystem::path& path);
std::vector<Executor> read_pool_csv(const std::filesystem::path& path);
/// requester_id,budget; tasks are attached by the caller.
std::vector<Requester> read_requesters_csv(const std::filesystem::path& path);
/// dweller,ranking with the ranking as space-separated requester ids. Rows
/// may come in any order; dwellers must be numbered 1..D.
PreferenceProfile read_ballots_csv(const std::filesystem::path& path);

/// Distributes tasks to their owners, sorted by task index. Throws if a task
/// names an unknown requester.
void attach_tasks(std::vector<Requester>& requesters, const std::vector<Task>& tasks);

/// Splits one CSV record. Exposed for tests.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace bulinc::sim
