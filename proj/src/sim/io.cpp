#include "bulinc/sim/io.hpp"

#include <algorithm>
#include <boost/tokenizer.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bulinc::sim {
namespace {

struct CsvFile {
  std::filesystem::path path;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, fields)
};

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + why);
}

CsvFile read_csv(const std::filesystem::path& path, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvFile file{path, {}};
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const std::exception& e) {
      fail_at(path, number, std::string("malformed record: ") + e.what());
    }
    if (!have_header) {
      if (fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        fail_at(path, number, "expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      fail_at(path, number, "expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()));
    }
    file.rows.emplace_back(number, std::move(fields));
  }
  if (!have_header) fail_at(path, number, "missing header row");
  return file;
}

template <class Int>
Int parse_int(const CsvFile& f, std::size_t line, const std::string& column, const std::string& text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail_at(f.path, line, column + " is not an integer: '" + text + "'");
  }
  return value;
}

Money parse_money(const CsvFile& f, std::size_t line, const std::string& column, const std::string& text) {
  try {
    return Money::parse(text);
  } catch (const std::exception& e) {
    fail_at(f.path, line, column + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  using Sep = boost::escaped_list_separator<char>;
  boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
  std::vector<std::string> out;
  for (const auto& field : tok) {
    std::string f = field;
    auto b = f.find_first_not_of(" \t");
    auto e = f.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
  }
  return out;
}

CategoryCounts ingest_category_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path, {"category", "count"});
  CategoryCounts out;
  std::set<std::string> seen;
  for (const auto& [line, fields] : f.rows) {
    if (fields[0].empty()) fail_at(path, line, "empty category name");
    if (!seen.insert(fields[0]).second) fail_at(path, line, "duplicate category '" + fields[0] + "'");
    out.emplace_back(fields[0], parse_int<std::uint64_t>(f, line, "count", fields[1]));
  }
  return out;
}

std::vector<Task> read_tasks_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path, {"requester_id", "task_index", "start", "finish"});
  std::vector<Task> out;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [line, fields] : f.rows) {
    Task t;
    t.requester = RequesterId{parse_int<std::uint32_t>(f, line, "requester_id", fields[0])};
    t.index = parse_int<std::uint32_t>(f, line, "task_index", fields[1]);
    t.start = parse_int<Tick>(f, line, "start", fields[2]);
    t.finish = parse_int<Tick>(f, line, "finish", fields[3]);
    if (t.index == 0) fail_at(path, line, "task_index starts at 1");
    if (t.finish < t.start) fail_at(path, line, "finish before start");
    if (!seen.emplace(t.requester.value, t.index).second) fail_at(path, line, "duplicate task");
    out.push_back(t);
  }
  return out;
}

std::vector<Executor> read_pool_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path, {"executor_id", "true_cost", "reported_cost"});
  std::vector<Executor> out;
  std::set<std::uint32_t> seen;
  for (const auto& [line, fields] : f.rows) {
    Executor e;
    e.id = ExecutorId{parse_int<std::uint32_t>(f, line, "executor_id", fields[0])};
    e.true_cost = parse_money(f, line, "true_cost", fields[1]);
    e.reported_cost = parse_money(f, line, "reported_cost", fields[2]);
    if (e.true_cost <= Money(0) || e.reported_cost <= Money(0)) fail_at(path, line, "costs must be positive");
    if (!seen.insert(e.id.value).second) fail_at(path, line, "duplicate executor id");
    out.push_back(e);
  }
  return out;
}

std::vector<Requester> read_requesters_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path, {"requester_id", "budget"});
  std::vector<Requester> out;
  std::set<std::uint32_t> seen;
  for (const auto& [line, fields] : f.rows) {
    Requester r;
    r.id = RequesterId{parse_int<std::uint32_t>(f, line, "requester_id", fields[0])};
    r.budget = parse_money(f, line, "budget", fields[1]);
    if (r.budget.is_negative()) fail_at(path, line, "negative budget");
    if (!seen.insert(r.id.value).second) fail_at(path, line, "duplicate requester id");
    out.push_back(r);
  }
  return out;
}

PreferenceProfile read_ballots_csv(const std::filesystem::path& path) {
  CsvFile f = read_csv(path, {"dweller", "ranking"});
  std::map<std::size_t, Ballot> by_dweller;
  for (const auto& [line, fields] : f.rows) {
    auto d = parse_int<std::size_t>(f, line, "dweller", fields[0]);
    if (d == 0) fail_at(path, line, "dwellers are numbered from 1");
    Ballot b;
    std::istringstream ranking(fields[1]);
    std::string token;
    while (ranking >> token) b.push_back(RequesterId{parse_int<std::uint32_t>(f, line, "ranking", token)});
    if (!by_dweller.emplace(d, std::move(b)).second) fail_at(path, line, "duplicate dweller " + std::to_string(d));
  }
  PreferenceProfile out;
  std::size_t expected = 1;
  for (auto& [d, b] : by_dweller) {
    if (d != expected) throw std::runtime_error(path.string() + ": dweller " + std::to_string(expected) + " missing");
    out.ballots.push_back(std::move(b));
    ++expected;
  }
  return out;
}

void attach_tasks(std::vector<Requester>& requesters, const std::vector<Task>& tasks) {
  std::map<RequesterId, Requester*> owner;
  for (auto& r : requesters) owner[r.id] = &r;
  for (const auto& t : tasks) {
    auto it = owner.find(t.requester);
    if (it == owner.end()) {
      throw std::runtime_error("task " + task_label(t) + " names unknown requester " +
                               std::to_string(t.requester.value));
    }
    it->second->tasks.push_back(t);
  }
  for (auto& r : requesters) {
    std::sort(r.tasks.begin(), r.tasks.end(), [](const Task& a, const Task& b) { return a.index < b.index; });
  }
}

}  // namespace bulinc::sim
