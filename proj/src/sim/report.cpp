#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bulinc/sim/pipeline.hpp"

namespace bulinc::sim {
namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string() + ": " + std::strerror(errno));
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string() + ": " + std::strerror(errno));
}

std::string metrics_csv(const RunReport& report) {
  std::ostringstream os;
  os << "round,slot,mechanism,sum_te_utility,budget_utilized,n_winners\n";
  for (const auto& row : metrics(report)) {
    os << (row.round ? std::to_string(*row.round) : std::string("avg")) << ',' << row.slot << ',' << row.mechanism
       << ',' << row.sum_te_utility << ',' << row.budget_utilized << ',' << row.n_winners << '\n';
  }
  return os.str();
}

std::string funding_csv(const RunReport& report) {
  std::ostringstream os;
  os << "requester_id,tally,funded,admission_order\n";
  std::set<RequesterId> ids;
  for (const auto& r : report.requesters) ids.insert(r.id);
  for (auto id : ids) {
    auto it = report.tally.find(id);
    const auto& funded = report.funding.funded;
    auto pos = std::find(funded.begin(), funded.end(), id);
    os << id.value << ',' << (it == report.tally.end() ? 0 : it->second) << ',' << (pos != funded.end() ? 1 : 0)
       << ',';
    if (pos != funded.end()) os << (pos - funded.begin() + 1);
    os << '\n';
  }
  return os.str();
}

std::string schedule_csv(const RunReport& report) {
  std::ostringstream os;
  os << "requester_id,task_index,slot\n";
  if (report.schedule) {
    for (std::size_t i = 0; i < report.schedule->order.size(); ++i) {
      const auto& t = report.schedule->order[i];
      os << t.requester.value << ',' << t.index << ',' << report.schedule->slot_of[i] << '\n';
    }
  }
  return os.str();
}

std::string montecarlo_csv(const RunReport& report) {
  std::ostringstream os;
  os << "n,p,trials,mean,stderr,exact\n";
  for (const auto& row : report.montecarlo) {
    os << row.n << ',' << row.p << ',' << row.estimate.trials << ',' << format_double(row.estimate.mean) << ','
       << format_double(row.estimate.standard_error) << ',' << row.exact << '\n';
  }
  return os.str();
}

std::string timings_csv(const RunReport& report) {
  std::ostringstream os;
  os << "mechanism,n_agents,millis\n";
  for (const auto& row : report.timings) os << row.mechanism << ',' << row.n_agents << ',' << format_double(row.millis) << '\n';
  return os.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void emit_report(const RunReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error("cannot use output directory " + out_dir.string() + ": " +
                             (ec ? ec.message() : std::string("not a directory")));
  }
  write_file(out_dir / "metrics.csv", metrics_csv(report));
  write_file(out_dir / "funding.csv", funding_csv(report));
  write_file(out_dir / "schedule.csv", schedule_csv(report));
  write_file(out_dir / "montecarlo.csv", montecarlo_csv(report));
  write_file(out_dir / "timings.csv", timings_csv(report));
}

}  // namespace bulinc::sim
