// bulinc: command-line front end for the two-tier simulation.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bulinc/budget_auction.hpp"
#include "bulinc/interval_scheduler.hpp"
#include "bulinc/kernels.hpp"
#include "bulinc/sim/config.hpp"
#include "bulinc/sim/io.hpp"
#include "bulinc/sim/pipeline.hpp"
#include "bulinc/stochastic.hpp"

using namespace bulinc;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool floor_mode = false;
  std::optional<std::uint64_t> trials;
};

sim::ExperimentConfig load(const Globals& g) {
  sim::ExperimentConfig c;
  if (!g.config.empty()) c = sim::load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.floor_mode) c.floor_mode = true;
  if (g.trials) c.trials = *g.trials;
  return c;
}

void emit(const sim::RunReport& report, const std::string& out) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (out.empty()) return;
  sim::emit_report(report, out);
  std::cout << "wrote 5 reports to " << out << '\n';
}

void print_funding(const sim::RunReport& r) {
  std::cout << "tally:";
  for (auto& [id, votes] : r.tally) std::cout << " r" << id.value << '=' << votes;
  std::cout << "\nfunded:";
  for (auto id : r.funding.funded) std::cout << " r" << id.value;
  std::cout << "\nresidual budget: " << r.funding.residual_budget << "\ndweller welfare: " << r.dweller_welfare
            << '\n';
}

void print_montecarlo(const sim::RunReport& r) {
  if (r.montecarlo.empty()) return;
  std::cout << "n\tp\tmean\tstderr\texact\n";
  for (const auto& row : r.montecarlo) {
    std::cout << row.n << '\t' << row.p << '\t' << sim::format_double(row.estimate.mean) << '\t'
              << sim::format_double(row.estimate.standard_error) << '\t' << row.exact << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tier crowdsensing simulator: knapsack-voting funding, interval slots, budget-feasible auctions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI experiment file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Directory for CSV reports");
  app.add_flag("--floor-per-task-budget", g.floor_mode, "Use floor(B/n) as the per-task budget");
  app.add_option("--trials", g.trials, "Monte Carlo trials (overrides the config)");

  auto* tier1 = app.add_subcommand("tier1", "Funding round and Monte Carlo grid");
  std::vector<std::uint64_t> grid_n;
  std::vector<std::string> grid_p;
  tier1->add_option("--n", grid_n, "Requester counts for the Monte Carlo grid");
  tier1->add_option("--p", grid_p, "Funding probabilities for the grid");

  auto* schedule = app.add_subcommand("schedule", "Partition a task file into slots");
  std::string tasks_file;
  schedule->add_option("--tasks", tasks_file, "tasks.csv")->required()->check(CLI::ExistingFile);

  auto* auction = app.add_subcommand("auction", "One auction over a pool file");
  std::string pool_file, budget_text, mechanism = "BULINC";
  std::uint32_t n_tasks = 1;
  auction->add_option("--pool", pool_file, "pool.csv")->required()->check(CLI::ExistingFile);
  auction->add_option("--budget", budget_text, "Requester budget, e.g. 30 or 7.5")->required();
  auction->add_option("--tasks-count", n_tasks, "Tasks sharing the budget")->check(CLI::PositiveNumber);
  auction->add_option("--mechanism", mechanism, "BULINC, GM or MGM")->check(CLI::IsMember({"BULINC", "GM", "MGM"}));

  auto* pipeline = app.add_subcommand("pipeline", "Both tiers, rounds, Monte Carlo and timings");

  auto* analyze = app.add_subcommand("analyze", "Closed-form values of the funding model");
  std::uint64_t n = 0, lambda = 0, total_tasks = 0, slots = 0;
  std::string p_text;
  analyze->add_option("--n", n, "Number of requesters")->required()->check(CLI::PositiveNumber);
  auto* lambda_opt = analyze->add_option("--lambda", lambda, "p = 1 / lambda")->check(CLI::PositiveNumber);
  analyze->add_option("--p", p_text, "Funding probability")->excludes(lambda_opt);
  analyze->add_option("--tasks", total_tasks, "Total tasks, for the tasks-per-slot mean");
  analyze->add_option("--slots", slots, "Slot count, for the tasks-per-slot mean");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tier1->parsed()) {
      auto c = load(g);
      if (!grid_n.empty()) c.mc_n = grid_n;
      if (!grid_p.empty()) {
        c.mc_p.clear();
        for (const auto& p : grid_p) c.mc_p.push_back(Rational::parse(p));
      }
      if (auto problems = sim::validate_config(c); !problems.empty()) throw std::runtime_error(problems.front());
      auto report = sim::run_tier1(c);
      print_funding(report);
      print_montecarlo(report);
      emit(report, g.out);
    } else if (schedule->parsed()) {
      auto a = partition_into_slots(sim::read_tasks_csv(tasks_file));
      std::cout << a.slot_count << " slots\n";
      for (std::uint32_t s = 1; s <= a.slot_count; ++s) {
        std::cout << "slot " << s << ':';
        for (const auto& t : a.slot_tasks(s)) std::cout << ' ' << task_label(t) << '[' << t.start << ',' << t.finish << ']';
        std::cout << '\n';
      }
      if (!g.out.empty()) {
        sim::RunReport report;
        report.schedule = a;
        sim::emit_report(report, g.out);
        std::cout << "wrote schedule.csv to " << g.out << '\n';
      }
    } else if (auction->parsed()) {
      auto c = load(g);
      sim::SlotInstance slot;
      slot.slot = 1;
      slot.pool = sim::read_pool_csv(pool_file);
      for (std::uint32_t k = 1; k <= n_tasks; ++k) {
        slot.tasks.push_back(Task{RequesterId{1}, k, 0, 0});
        slot.budgets.push_back(per_task_budget(Rational::parse(budget_text), n_tasks, c.floor_mode));
      }
      auto run = sim::run_mechanism(mechanism, slot, c, derive_seed(c.seed, 1));
      std::cout << mechanism << ": per-task budget " << slot.budgets.front() << '\n';
      const auto& r = run.per_task.front();
      for (std::size_t i = 0; i < r.winners.size(); ++i) {
        std::cout << "  e" << r.winners[i].value << " paid " << r.payments[i] << '\n';
      }
      std::cout << "winners per task " << r.winners.size() << ", total paid " << run.budget_utilized
                << ", executor utility " << run.sum_te_utility << '\n';
    } else if (pipeline->parsed()) {
      if (g.config.empty()) throw std::runtime_error("pipeline needs --config");
      auto c = load(g);
      auto report = sim::run_pipeline(c);
      std::cout << "mode " << sim::to_string(c.mode) << ", " << report.rounds.size() << " rounds, "
                << report.slots.size() << " slots, " << report.agent_count << " agents, kernels "
                << kernels::to_string(kernels::active_isa()) << '\n';
      if (c.mode == sim::ExperimentConfig::Mode::pipeline) print_funding(report);
      for (const auto& p : report.conservation_problems) std::cerr << "budget check failed: " << p << '\n';
      emit(report, g.out.empty() ? "out" : g.out);
      if (!report.conservation_problems.empty()) return 2;
    } else if (analyze->parsed()) {
      auto model = lambda ? BernoulliFundingModel::from_lambda(n, lambda)
                          : BernoulliFundingModel::make(n, p_text.empty() ? Rational(1) : Rational::parse(p_text));
      const auto threshold = markov_threshold(model);
      const auto one = prob_at_least_one(model);
      std::cout << "p = " << model.p_fund << "\nE[Z] = n p = " << expected_funded_exact(model)
                << "\nthreshold ceil(3 n p) = " << threshold << "\nPr{Z >= threshold} = "
                << sim::format_double(tail_probability(model, threshold)) << " (Markov bound 1/3)"
                << "\nPr{Z >= 1} = " << sim::format_double(one.exact)
                << "\n1 - exp(-n p) = " << sim::format_double(one.bound) << '\n';
      if (slots > 0) std::cout << "tasks per slot = " << sim::format_double(expected_tasks_per_slot(total_tasks, slots)) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
