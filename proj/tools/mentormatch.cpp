// Command-line front end: instance generation, solving, dynamic simulation,
// experiment sweeps, report aggregation and self-verification.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mm/json_io.hpp"
#include "mm/metrics.hpp"
#include "mm/milp.hpp"
#include "mm/model.hpp"
#include "mm/simulator.hpp"
#include "mm/solver.hpp"
#include "mm/verify.hpp"

namespace fs = std::filesystem;
using mm::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNotProven = 4;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mm::Error("cannot write " + path.string());
  out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct PolicyFlags {
  double wg = 0.7;
  std::string variant = "A";
  double wt = 0.0;
  std::string wt_scope = "all_subjects";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--wg", wg, "group discount w^g")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--pref-variant", variant, "preference variant A|B|C");
    cmd->add_option("--wt", wt, "waiting-time weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--wt-scope", wt_scope,
                    "waiting scope: all_subjects|first_subject_only");
  }
  mm::PolicyConfig resolve() const {
    mm::PolicyConfig p;
    p.group_discount = wg;
    p.preference_variant = mm::preference_variant_from_string(variant);
    p.waiting_weight = wt;
    p.waiting_scope = mm::waiting_scope_from_string(wt_scope);
    return p;
  }
};

json sim_config_echo(const mm::SimConfig& sc, uint64_t seed, double arrival) {
  json cfg = mm::policy_to_json(sc.policy);
  cfg["frequency"] = sc.frequency;
  cfg["horizon"] = sc.horizon;
  cfg["arrival_rate"] = arrival;
  return mm::make_meta(seed, cfg);
}

int cmd_generate(int students, int mentors, uint64_t seed, int horizon,
                 double arrival, const PolicyFlags& pf, const std::string& out_dir,
                 bool stats) {
  mm::GeneratorConfig gc;
  gc.num_students = students;
  gc.num_mentors = mentors;
  gc.seed = seed;
  gc.horizon = horizon;
  gc.arrival_rate = arrival;
  mm::PolicyConfig policy = pf.resolve();
  mm::InstanceConfig ic;
  ic.group_slots = policy.group_slots;
  ic.group_capacity = policy.group_capacity;
  mm::Instance inst = mm::generate_instance(gc, ic);

  json gen_echo = {{"students", students}, {"mentors", mentors},
                   {"horizon", horizon},   {"arrival_rate", arrival}};
  json meta = mm::make_meta(seed, gen_echo);
  write_file(fs::path(out_dir) / "instance.json",
             dump(mm::instance_to_json(inst, policy, meta)));
  if (stats) {
    std::cout << "students " << inst.students.size() << "\nmentors "
              << inst.mentors.size() << "\nactivities " << inst.activities.size()
              << "\ngroup sites " << inst.sites.size() << "\n";
  }
  return kExitOk;
}

int cmd_solve(const std::string& in_file, const PolicyFlags& pf,
              double time_limit, double gap, bool export_mps,
              const std::string& out_dir, uint64_t seed) {
  std::ifstream in(in_file);
  if (!in) {
    std::cerr << "cannot read " << in_file << "\n";
    return kExitValidation;
  }
  json j;
  mm::Instance inst;
  mm::PolicyConfig policy;
  try {
    in >> j;
    inst = mm::instance_from_json(j, &policy);
  } catch (const std::exception& ex) {
    std::cerr << "invalid instance: " << ex.what() << "\n";
    return kExitValidation;
  }
  policy.group_discount = pf.wg;
  policy.preference_variant = mm::preference_variant_from_string(pf.variant);
  policy.waiting_weight = pf.wt;
  policy.waiting_scope = mm::waiting_scope_from_string(pf.wt_scope);

  mm::MilpModel model = mm::build_milp(inst, policy);
  if (export_mps)
    write_file(fs::path(out_dir) / "model.mps", mm::export_mps(model));

  mm::SolveLimits limits;
  limits.time_limit_seconds = time_limit;
  limits.gap = gap;
  mm::SolveResult sr = mm::solve(model, limits);
  mm::Solution sol = mm::extract_solution(model, sr.assignment, inst);
  mm::ValidationReport rep = mm::validate_solution(inst, sol);
  if (!rep.feasible()) {
    for (const auto& v : rep.violations)
      std::cerr << "violation: " << v.code << " " << v.detail << "\n";
    return kExitValidation;
  }
  mm::MeasureVector measures = mm::evaluate(inst, sol, policy);

  json meta = mm::make_meta(seed, mm::policy_to_json(policy));
  json out = mm::solution_to_json(inst, sol, meta);
  out["objective"] = sr.objective;
  out["dual_bound"] = sr.dual_bound;
  out["status"] = mm::to_string(sr.status);
  out["nodes"] = sr.nodes;
  out["measures"] = mm::measures_to_json(measures);
  write_file(fs::path(out_dir) / "solution.json", dump(out));
  write_file(fs::path(out_dir) / "measures.csv",
             mm::measures_csv_header({"seed"}) +
                 mm::measures_csv_row(measures, {std::to_string(seed)}));

  std::cout << "objective " << sr.objective << " status "
            << mm::to_string(sr.status) << " nodes " << sr.nodes << "\n";
  return sr.status == mm::SolveStatus::Optimal ? kExitOk : kExitNotProven;
}

int cmd_simulate(int students, int mentors, double arrival, int horizon,
                 int frequency, const PolicyFlags& pf, uint64_t seed,
                 double time_limit, const std::string& out_dir) {
  mm::GeneratorConfig gc;
  gc.num_students = students;
  gc.num_mentors = mentors;
  gc.seed = seed;
  gc.horizon = horizon;
  gc.arrival_rate = arrival > 0 ? arrival : 1.0;
  mm::Instance inst = mm::generate_instance(gc);

  mm::SimConfig sc;
  sc.frequency = frequency;
  sc.horizon = horizon;
  sc.policy = pf.resolve();
  sc.limits.time_limit_seconds = time_limit;
  mm::SimulationResult sim = mm::run_simulation(inst, sc);

  std::string lines;
  for (const auto& run : sim.runs) lines += mm::run_record_to_json(run).dump() + "\n";
  write_file(fs::path(out_dir) / "runs.jsonl", lines);
  json meta = sim_config_echo(sc, seed, gc.arrival_rate);
  write_file(fs::path(out_dir) / "simulation.json",
             dump(json{{"meta", meta},
                       {"runs", sim.runs.size()},
                       {"totals", mm::measures_to_json(sim.totals)}}));
  write_file(fs::path(out_dir) / "measures.csv",
             mm::measures_csv_header({"frequency", "seed"}) +
                 mm::measures_csv_row(sim.totals, {std::to_string(frequency),
                                                   std::to_string(seed)}));
  std::cout << "runs " << sim.runs.size() << " students_matched "
            << sim.matched_students.size() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::vector<int>& frequencies, const std::vector<double>& wgs,
              const std::vector<std::string>& variants,
              const std::vector<double>& wts, const std::string& wt_scope,
              int seeds, int students, int mentors, double arrival, int horizon,
              double time_limit, int jobs, const std::string& out_dir) {
  std::vector<mm::PreferenceVariant> vs;
  for (const auto& v : variants) vs.push_back(mm::preference_variant_from_string(v));
  std::vector<std::pair<double, mm::WaitingScope>> waiting;
  for (double wt : wts)
    waiting.push_back({wt, mm::waiting_scope_from_string(wt_scope)});
  std::vector<uint64_t> seed_list;
  for (int s = 1; s <= seeds; ++s) seed_list.push_back(static_cast<uint64_t>(s));

  auto grid = mm::make_grid(frequencies, wgs, vs, waiting, seed_list);
  mm::GeneratorConfig gc;
  gc.num_students = students;
  gc.num_mentors = mentors;
  gc.arrival_rate = arrival;
  gc.horizon = horizon;
  mm::SimConfig sc;
  sc.horizon = horizon;
  sc.limits.time_limit_seconds = time_limit;

  auto results = mm::sweep(grid, gc, sc, jobs);

  std::string csv = mm::measures_csv_header(
      {"frequency", "wg", "pref_variant", "wt", "wt_scope", "seed", "status"});
  int failed = 0;
  for (const auto& r : results) {
    csv += mm::measures_csv_row(
        r.totals,
        {std::to_string(r.cell.frequency), mm::format_csv_number(r.cell.group_discount),
         mm::to_string(r.cell.variant), mm::format_csv_number(r.cell.waiting_weight),
         mm::to_string(r.cell.waiting_scope), std::to_string(r.cell.seed),
         r.failed ? "failed" : "ok"});
    if (r.failed) {
      ++failed;
      std::cerr << "cell failed (seed " << r.cell.seed << "): " << r.error << "\n";
    }
  }
  write_file(fs::path(out_dir) / "measures.csv", csv);
  std::cout << "cells " << results.size() << " failed " << failed << "\n";
  return kExitOk;
}

int cmd_report(const std::string& in_file) {
  std::ifstream in(in_file);
  if (!in) {
    std::cerr << "cannot read " << in_file << "\n";
    return kExitValidation;
  }
  std::string header;
  if (!std::getline(in, header)) {
    std::cerr << "empty file\n";
    return kExitValidation;
  }
  std::vector<std::string> columns;
  std::stringstream hs(header);
  std::string cell;
  while (std::getline(hs, cell, ',')) columns.push_back(cell);
  std::vector<std::vector<double>> data(columns.size());
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    for (size_t k = 0; k < columns.size() && std::getline(ls, cell, ','); ++k) {
      try {
        data[k].push_back(std::stod(cell));
      } catch (...) {
        // non-numeric config echo column
      }
    }
  }
  std::cout << "measure,mean,median,q1,q3,min,max\n";
  for (size_t k = 0; k < columns.size(); ++k) {
    if (data[k].empty()) continue;
    mm::MeasureSummary s = mm::summarize(data[k]);
    std::cout << columns[k] << ',' << mm::format_csv_number(s.mean) << ','
              << mm::format_csv_number(s.median) << ',' << mm::format_csv_number(s.q1)
              << ',' << mm::format_csv_number(s.q3) << ',' << mm::format_csv_number(s.min)
              << ',' << mm::format_csv_number(s.max) << "\n";
  }
  return kExitOk;
}

int cmd_verify(int cases, int samples, uint64_t seed, const std::string& fault) {
  mm::InjectedFault f = mm::InjectedFault::None;
  if (fault == "objective-offset") f = mm::InjectedFault::ObjectiveOffset;
  else if (fault == "penalty-mismatch") f = mm::InjectedFault::PenaltyMismatch;
  else if (!fault.empty()) {
    std::cerr << "unknown fault: " << fault << "\n";
    return kExitUsage;
  }
  auto log = [](const std::string& line) { std::cout << line << "\n"; };
  int failures = mm::run_oracle_suite(cases, seed, log, f);
  failures += mm::run_generator_gof(samples, seed + 1, log);
  std::cout << (failures == 0 ? "PASS" : "FAIL") << "\n";
  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mentor-student matching experiments"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  uint64_t seed = 1;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic instance");
  int g_students = 80, g_mentors = 40, g_horizon = 300;
  double g_arrival = 0.0;
  bool g_stats = false;
  gen->add_option("--students", g_students)->check(CLI::PositiveNumber);
  gen->add_option("--mentors", g_mentors)->check(CLI::PositiveNumber);
  gen->add_option("--horizon", g_horizon)->check(CLI::PositiveNumber);
  gen->add_option("--arrival-rate", g_arrival)->check(CLI::NonNegativeNumber);
  gen->add_flag("--stats", g_stats, "print instance statistics");
  PolicyFlags g_pf;
  g_pf.add_to(gen);

  // solve
  auto* slv = app.add_subcommand("solve", "solve an instance to optimality");
  std::string s_in;
  double s_time_limit = 600, s_gap = 0;
  bool s_mps = false;
  slv->add_option("instance", s_in, "instance JSON file")->required();
  slv->add_option("--time-limit", s_time_limit, "seconds");
  slv->add_option("--gap", s_gap, "relative gap tolerance");
  slv->add_flag("--export-mps", s_mps);
  PolicyFlags s_pf;
  s_pf.add_to(slv);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the dynamic protocol");
  int m_students = 80, m_mentors = 40, m_horizon = 300, m_frequency = 7;
  double m_arrival = 1.0, m_time_limit = 60;
  sim->add_option("--students", m_students)->check(CLI::PositiveNumber);
  sim->add_option("--mentors", m_mentors)->check(CLI::PositiveNumber);
  sim->add_option("--arrival", m_arrival)->check(CLI::NonNegativeNumber);
  sim->add_option("--horizon", m_horizon)->check(CLI::PositiveNumber);
  sim->add_option("--frequency", m_frequency)->check(CLI::PositiveNumber);
  sim->add_option("--time-limit", m_time_limit, "seconds per run");
  PolicyFlags m_pf;
  m_pf.add_to(sim);

  // sweep
  auto* swp = app.add_subcommand("sweep", "run an experiment grid");
  std::vector<int> w_freq = {7};
  std::vector<double> w_wg = {0.7}, w_wt = {0.0};
  std::vector<std::string> w_variant = {"A"};
  std::string w_scope = "all_subjects";
  int w_seeds = 1, w_jobs = 1, w_students = 80, w_mentors = 40, w_horizon = 300;
  double w_arrival = 1.0, w_time_limit = 60;
  swp->add_option("--frequency", w_freq)->delimiter(',');
  swp->add_option("--wg", w_wg)->delimiter(',');
  swp->add_option("--pref-variant", w_variant)->delimiter(',');
  swp->add_option("--wt", w_wt)->delimiter(',');
  swp->add_option("--wt-scope", w_scope);
  swp->add_option("--seeds", w_seeds)->check(CLI::PositiveNumber);
  swp->add_option("--jobs", w_jobs)->check(CLI::PositiveNumber);
  swp->add_option("--students", w_students)->check(CLI::PositiveNumber);
  swp->add_option("--mentors", w_mentors)->check(CLI::PositiveNumber);
  swp->add_option("--arrival", w_arrival)->check(CLI::NonNegativeNumber);
  swp->add_option("--horizon", w_horizon)->check(CLI::PositiveNumber);
  swp->add_option("--time-limit", w_time_limit, "seconds per run");

  // report
  auto* rep = app.add_subcommand("report", "aggregate a measures CSV");
  std::string r_in;
  rep->add_option("csv", r_in, "measures CSV file")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "self-check suites");
  int v_cases = 200, v_samples = 100000;
  std::string v_fault;
  ver->add_option("--cases", v_cases)->check(CLI::PositiveNumber);
  ver->add_option("--samples", v_samples)->check(CLI::PositiveNumber);
  ver->add_option("--inject-fault", v_fault,
                  "negative control: objective-offset|penalty-mismatch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(g_students, g_mentors, seed, g_horizon, g_arrival,
                          g_pf, out_dir, g_stats);
    if (slv->parsed())
      return cmd_solve(s_in, s_pf, s_time_limit, s_gap, s_mps, out_dir, seed);
    if (sim->parsed())
      return cmd_simulate(m_students, m_mentors, m_arrival, m_horizon,
                          m_frequency, m_pf, seed, m_time_limit, out_dir);
    if (swp->parsed())
      return cmd_sweep(w_freq, w_wg, w_variant, w_wt, w_scope, w_seeds,
                       w_students, w_mentors, w_arrival, w_horizon,
                       w_time_limit, w_jobs, out_dir);
    if (rep->parsed()) return cmd_report(r_in);
    if (ver->parsed()) return cmd_verify(v_cases, v_samples, seed, v_fault);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
