#include "bulinc/sim/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace bulinc::sim {
namespace {

using boost::property_tree::ptree;

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

// Reads one section, remembering which keys were consumed so leftovers can
// be reported as typos.
class Section {
 public:
  Section(std::string name, const ptree& tree) : name_(std::move(name)), tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    auto v = tree_.get_child_optional(ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(v->data());
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw std::runtime_error("config [" + name_ + "] " + key + ": " + why);
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (auto v = raw(key)) out = parse_int<Int>(key, *v);
  }

  void money(const std::string& key, Money& out) {
    if (auto v = raw(key)) out = parse_money(key, *v);
  }

  void real(const std::string& key, double& out) {
    if (auto v = raw(key)) {
      try {
        std::size_t used = 0;
        out = std::stod(*v, &used);
        if (used != v->size()) fail(key, "not a number: '" + *v + "'");
      } catch (const std::logic_error&) {
        fail(key, "not a number: '" + *v + "'");
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto v = raw(key)) {
      std::string s = *v;
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      if (s == "true" || s == "yes" || s == "on" || s == "1") out = true;
      else if (s == "false" || s == "no" || s == "off" || s == "0") out = false;
      else fail(key, "expected true or false, got '" + *v + "'");
    }
  }

  template <class Int>
  Int parse_int(const std::string& key, const std::string& text) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, "not a non-negative integer: '" + text + "'");
    return value;
  }

  Money parse_money(const std::string& key, const std::string& text) {
    try {
      return Money::parse(text);
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

  void check_unused() const {
    for (const auto& [key, value] : tree_) {
      if (!seen_.count(key)) throw std::runtime_error("config [" + name_ + "]: unknown key '" + key + "'");
    }
  }

 private:
  std::string name_;
  const ptree& tree_;
  std::set<std::string> seen_;
};

void read_bids(Section& s, BidDistribution& bids) {
  if (auto d = s.raw("distribution")) {
    if (*d == "uniform") bids.kind = BidDistribution::Kind::uniform;
    else if (*d == "normal") bids.kind = BidDistribution::Kind::normal;
    else s.fail("distribution", "expected uniform or normal, got '" + *d + "'");
  }
  s.money("lo", bids.lo);
  s.money("hi", bids.hi);
  s.real("mean", bids.mean);
  s.real("sd", bids.sd);
}

void read_slot(Section& s, SlotSpec& slot) {
  s.integer("executors", slot.n_executors);
  read_bids(s, slot.bids);
  s.money("budget", slot.budget);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::optional<std::string>& value) {
  if (!value || value->empty()) return {};
  std::filesystem::path p(*value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

const SlotSpec& ExperimentConfig::slot_spec(std::uint32_t index) const {
  for (const auto& s : slots) {
    if (s.index == index) return s;
  }
  return default_slot;
}

std::string to_string(ExperimentConfig::Mode mode) {
  return mode == ExperimentConfig::Mode::tier2 ? "tier2" : "pipeline";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error("cannot read config " + path.string() + ": " + e.message() + " (line " +
                             std::to_string(e.line()) + ")");
  }
  const auto base = path.parent_path();
  ExperimentConfig c;
  std::map<std::uint32_t, SlotSpec> slots;

  for (const auto& [name, sub] : tree) {
    Section s(name, sub);
    if (name == "general") {
      s.integer("seed", c.seed);
      if (auto m = s.raw("mode")) {
        if (*m == "pipeline") c.mode = ExperimentConfig::Mode::pipeline;
        else if (*m == "tier2") c.mode = ExperimentConfig::Mode::tier2;
        else s.fail("mode", "expected pipeline or tier2, got '" + *m + "'");
      }
      s.integer("rounds", c.rounds);
      s.boolean("floor_mode", c.floor_mode);
      s.integer("trials", c.trials);
    } else if (name == "tier1") {
      s.integer("requesters", c.tier1.n_requesters);
      s.integer("dwellers", c.tier1.n_dwellers);
      s.money("budget_lo", c.tier1.budget_lo);
      s.money("budget_hi", c.tier1.budget_hi);
      s.money("government_budget", c.tier1.government_budget);
      s.integer("tasks_lo", c.tier1.tasks_lo);
      s.integer("tasks_hi", c.tier1.tasks_hi);
      s.integer("horizon", c.tier1.horizon);
      s.integer("max_duration", c.tier1.max_duration);
    } else if (name == "tier2") {
      read_slot(s, c.default_slot);
    } else if (name.rfind("slot.", 0) == 0) {
      std::uint32_t index = s.parse_int<std::uint32_t>("section name", name.substr(5));
      if (index == 0) s.fail("section name", "slots are numbered from 1");
      SlotSpec spec = c.default_slot;
      spec.index = index;
      read_slot(s, spec);
      slots[index] = spec;
    } else if (name == "mechanisms") {
      if (auto v = s.raw("run")) c.mechanisms = split_list(*v);
    } else if (name == "mgm") {
      s.money("fraction", c.mgm_fraction);
      s.money("inflation", c.mgm_inflation);
      s.boolean("unilateral", c.mgm_unilateral);
    } else if (name == "montecarlo") {
      if (auto v = s.raw("n")) {
        c.mc_n.clear();
        for (const auto& item : split_list(*v)) c.mc_n.push_back(s.parse_int<std::uint64_t>("n", item));
      }
      if (auto v = s.raw("p")) {
        c.mc_p.clear();
        for (const auto& item : split_list(*v)) c.mc_p.push_back(s.parse_money("p", item));
      }
    } else if (name == "input") {
      c.inputs.requesters = resolve(base, s.raw("requesters"));
      c.inputs.tasks = resolve(base, s.raw("tasks"));
      c.inputs.ballots = resolve(base, s.raw("ballots"));
      c.inputs.pool = resolve(base, s.raw("pool"));
      c.inputs.categories = resolve(base, s.raw("categories"));
    } else if (name == "timing") {
      if (auto v = s.raw("agent_counts")) {
        for (const auto& item : split_list(*v)) {
          c.timing.agent_counts.push_back(s.parse_int<std::size_t>("agent_counts", item));
        }
      }
      s.integer("repeats", c.timing.repeats);
      s.money("budget_per_agent", c.timing.budget_per_agent);
    } else {
      throw std::runtime_error("config " + path.string() + ": unknown section [" + name + "]");
    }
    s.check_unused();
  }

  // [tier2] may come after [slot.N]; slots only inherit fields they omit,
  // so re-read them on top of the final default.
  if (!slots.empty()) {
    for (const auto& [name, sub] : tree) {
      if (name.rfind("slot.", 0) != 0) continue;
      Section s(name, sub);
      std::uint32_t index = s.parse_int<std::uint32_t>("section name", name.substr(5));
      SlotSpec spec = c.default_slot;
      spec.index = index;
      read_slot(s, spec);
      slots[index] = spec;
    }
  }
  for (auto& [index, spec] : slots) c.slots.push_back(spec);

  auto problems = validate_config(c);
  if (!problems.empty()) {
    std::string msg = "config " + path.string() + " is invalid:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  return c;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> out;
  auto check_bids = [&](const std::string& where, const BidDistribution& b) {
    if (b.kind == BidDistribution::Kind::uniform) {
      if (b.lo > b.hi) out.push_back(where + ": uniform lo " + b.lo.to_string() + " exceeds hi " + b.hi.to_string());
      if (b.hi < Money(1, 100)) out.push_back(where + ": uniform range holds no positive cent value");
    } else if (!(b.sd > 0.0)) {
      out.push_back(where + ": normal sd must be positive");
    }
  };
  check_bids("[tier2]", c.default_slot.bids);
  for (const auto& s : c.slots) {
    const std::string where = "[slot." + std::to_string(s.index) + "]";
    check_bids(where, s.bids);
    if (s.budget.is_negative()) out.push_back(where + ": negative budget");
  }
  if (c.rounds == 0) out.push_back("[general] rounds must be at least 1");
  if (c.trials == 0 && !c.mc_n.empty()) out.push_back("[general] trials must be at least 1");
  if (c.tier1.budget_lo > c.tier1.budget_hi) out.push_back("[tier1] budget_lo exceeds budget_hi");
  if (c.tier1.budget_lo.is_negative()) out.push_back("[tier1] negative budget_lo");
  if (c.tier1.government_budget.is_negative()) out.push_back("[tier1] negative government_budget");
  if (c.tier1.tasks_lo == 0 || c.tier1.tasks_lo > c.tier1.tasks_hi) {
    out.push_back("[tier1] need 1 <= tasks_lo <= tasks_hi");
  }
  if (c.tier1.horizon < 0 || c.tier1.max_duration < 0) out.push_back("[tier1] negative horizon or max_duration");
  if (c.mgm_fraction < Money(0) || c.mgm_fraction > Money(1)) out.push_back("[mgm] fraction must lie in [0, 1]");
  if (c.mgm_inflation.is_negative()) out.push_back("[mgm] negative inflation");
  for (const auto& m : c.mechanisms) {
    if (m != "BULINC" && m != "GM" && m != "MGM") out.push_back("[mechanisms] unknown mechanism '" + m + "'");
  }
  for (auto n : c.mc_n) {
    if (n == 0) out.push_back("[montecarlo] n must be positive");
  }
  for (const auto& p : c.mc_p) {
    if (p <= Money(0) || p > Money(1)) out.push_back("[montecarlo] p " + p.to_string() + " outside (0, 1]");
  }
  if (c.timing.repeats == 0) out.push_back("[timing] repeats must be at least 1");
  return out;
}

}  // namespace bulinc::sim
