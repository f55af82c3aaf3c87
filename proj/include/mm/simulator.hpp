#pragma once

// Dynamic batch matching: participants arrive and leave over a horizon, the
// solver runs at a fixed frequency on the current pool, and matches consume
// demand and capacity.

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mm/generator.hpp"
#include "mm/metrics.hpp"
#include "mm/milp.hpp"
#include "mm/model.hpp"
#include "mm/solver.hpp"
#include "mm/weights.hpp"

namespace mm {

struct SimConfig {
  int frequency = 7;
  int horizon = 300;
  PolicyConfig policy;
  SolveLimits limits;
  // Observer invoked after every solved run with the restricted instance and
  // its solution; used by tests to revalidate feasibility.
  std::function<void(int day, const Instance&, const Solution&)> on_solution;
};

// One assignment in original-id terms. slot < 0 means a standalone pair,
// otherwise membership in group (mentor, subject, year, slot).
struct MatchRecord {
  std::string student;
  std::string mentor;
  int subject = -1;
  int year = 0;
  int hours = 0;
  int slot = -1;
};

struct GroupRecord {
  std::string mentor;
  int subject = -1;
  int year = 0;
  int slot = -1;
  int hours = 0;
};

struct RunRecord {
  int day = 0;
  int pool_students = 0;
  int pool_mentors = 0;
  std::vector<MatchRecord> matches;
  std::vector<GroupRecord> groups;
  MeasureVector measures;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  long nodes = 0;
  double solve_seconds = 0.0;
};

struct SimulationResult {
  std::vector<RunRecord> runs;
  MeasureVector totals;  // per-run sums; number_students = distinct ever matched
  std::set<std::string> matched_students;
};

// Mutable pool state. Requests shrink as subjects are satisfied; capacity
// shrinks as hours are consumed; departures extend on matches.
struct PoolState {
  int day = 0;
  std::vector<Student> students;  // remaining requests only
  std::vector<Mentor> mentors;    // capacity = remaining Q
  SubjectTable subjects;
  InstanceConfig config;

  bool student_active(const Student& s) const {
    return s.registration_day <= day && day < s.departure_day &&
           !s.requests.empty();
  }
  bool mentor_active(const Mentor& m) const {
    return m.registration_day <= day && day < m.departure_day &&
           m.capacity >= 1;
  }
};

inline PoolState make_pool(const Instance& inst) {
  PoolState p;
  p.students = inst.students;
  p.mentors = inst.mentors;
  p.subjects = inst.subjects;
  p.config = inst.config;
  return p;
}

// One matching run on the current pool. Returns the run record and applies
// demand removal, capacity consumption and stay extensions to `pool`.
inline RunRecord step(PoolState& pool, const SimConfig& cfg,
                      std::set<std::string>* matched_students = nullptr) {
  RunRecord rec;
  rec.day = pool.day;

  std::vector<Student> active_students;
  std::vector<int> student_pool_idx;
  for (size_t i = 0; i < pool.students.size(); ++i)
    if (pool.student_active(pool.students[i])) {
      active_students.push_back(pool.students[i]);
      student_pool_idx.push_back(static_cast<int>(i));
    }
  std::vector<Mentor> active_mentors;
  std::vector<int> mentor_pool_idx;
  for (size_t j = 0; j < pool.mentors.size(); ++j)
    if (pool.mentor_active(pool.mentors[j])) {
      active_mentors.push_back(pool.mentors[j]);
      mentor_pool_idx.push_back(static_cast<int>(j));
    }
  rec.pool_students = static_cast<int>(active_students.size());
  rec.pool_mentors = static_cast<int>(active_mentors.size());
  if (active_students.empty() || active_mentors.empty()) return rec;

  Instance sub = build_instance(active_students, active_mentors, pool.subjects,
                                pool.config);
  if (sub.activities.empty()) return rec;

  MilpModel model = build_milp(sub, cfg.policy, pool.day);
  SolveResult sr = solve(model, cfg.limits);
  Solution sol = extract_solution(model, sr.assignment, sub);
  rec.objective = sr.objective;
  rec.status = sr.status;
  rec.nodes = sr.nodes;
  rec.solve_seconds = sr.wall_seconds;
  rec.measures = evaluate(sub, sol, cfg.policy);
  if (cfg.on_solution) cfg.on_solution(pool.day, sub, sol);

  std::set<int> touched_students, touched_mentors;  // pool indices
  auto consume = [&](const Activity& a, int hours, int slot) {
    int si = student_pool_idx[a.student];
    int mi = mentor_pool_idx[a.mentor];
    MatchRecord mr;
    mr.student = pool.students[si].id;
    mr.mentor = pool.mentors[mi].id;
    mr.subject = a.subject;
    mr.year = a.year;
    mr.hours = hours;
    mr.slot = slot;
    rec.matches.push_back(mr);
    // the satisfied subject leaves the demand list even if hours < requested
    auto& reqs = pool.students[si].requests;
    for (size_t r = 0; r < reqs.size(); ++r)
      if (reqs[r].subject == a.subject && reqs[r].year == a.year) {
        reqs.erase(reqs.begin() + static_cast<long>(r));
        break;
      }
    touched_students.insert(si);
    touched_mentors.insert(mi);
    if (matched_students) matched_students->insert(mr.student);
  };
  for (const auto& [e, h] : sol.pairs) {
    consume(sub.activities[e], h, -1);
    pool.mentors[mentor_pool_idx[sub.activities[e].mentor]].capacity -= h;
  }
  for (const auto& [k, h] : sol.members)
    consume(sub.activities[k.first], h, k.second);
  for (const auto& [g, h] : sol.groups) {
    const GroupSite& site = sub.sites[g.first];
    GroupRecord gr;
    gr.mentor = pool.mentors[mentor_pool_idx[site.mentor]].id;
    gr.subject = site.subject;
    gr.year = site.year;
    gr.slot = g.second;
    gr.hours = h;
    rec.groups.push_back(gr);
    // a group consumes x_g mentor hours regardless of member count
    pool.mentors[mentor_pool_idx[site.mentor]].capacity -= h;
  }
  for (int si : touched_students) pool.students[si].departure_day += 7;
  for (int mi : touched_mentors) pool.mentors[mi].departure_day += 14;
  return rec;
}

inline SimulationResult run_simulation(const Instance& inst,
                                       const SimConfig& cfg) {
  if (cfg.frequency < 1) throw Error("run_simulation: frequency must be >= 1");
  SimulationResult res;
  PoolState pool = make_pool(inst);
  for (int day = 0; day <= cfg.horizon; day += cfg.frequency) {
    pool.day = day;
    RunRecord rec = step(pool, cfg, &res.matched_students);
    res.totals += rec.measures;
    res.runs.push_back(std::move(rec));
  }
  res.totals.number_students = static_cast<double>(res.matched_students.size());
  return res;
}

// ---------------------------------------------------------------------------
// Experiment sweeps

struct SweepCell {
  int frequency = 7;
  double group_discount = 0.7;
  PreferenceVariant variant = PreferenceVariant::A;
  double waiting_weight = 0.0;
  WaitingScope waiting_scope = WaitingScope::AllSubjects;
  uint64_t seed = 1;
};

struct SweepCellResult {
  SweepCell cell;
  bool failed = false;
  std::string error;
  MeasureVector totals;
  int runs = 0;
  double objective_total = 0.0;
};

inline std::vector<SweepCell> make_grid(
    const std::vector<int>& frequencies, const std::vector<double>& discounts,
    const std::vector<PreferenceVariant>& variants,
    const std::vector<std::pair<double, WaitingScope>>& waiting,
    const std::vector<uint64_t>& seeds) {
  std::vector<SweepCell> grid;
  for (int f : frequencies)
    for (double wg : discounts)
      for (auto v : variants)
        for (const auto& [wt, scope] : waiting)
          for (uint64_t s : seeds)
            grid.push_back({f, wg, v, wt, scope, s});
  return grid;
}

// Runs every cell; output order matches grid order regardless of `jobs`.
inline std::vector<SweepCellResult> sweep(
    const std::vector<SweepCell>& grid, const GeneratorConfig& gen_base,
    const SimConfig& sim_base, int jobs = 1) {
  if (grid.empty()) throw Error("sweep: empty grid");
  std::vector<SweepCellResult> out(grid.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= grid.size()) return;
      const SweepCell& cell = grid[k];
      SweepCellResult& r = out[k];
      r.cell = cell;
      try {
        GeneratorConfig gc = gen_base;
        gc.horizon = sim_base.horizon;
        SimConfig sc = sim_base;
        sc.frequency = cell.frequency;
        sc.policy.group_discount = cell.group_discount;
        sc.policy.preference_variant = cell.variant;
        sc.policy.waiting_weight = cell.waiting_weight;
        sc.policy.waiting_scope = cell.waiting_scope;
        gc.seed = cell.seed;
        Instance inst = generate_instance(gc);
        SimulationResult sim = run_simulation(inst, sc);
        r.totals = sim.totals;
        r.runs = static_cast<int>(sim.runs.size());
        for (const auto& run : sim.runs) r.objective_total += run.objective;
      } catch (const std::exception& ex) {
        r.failed = true;
        r.error = ex.what();
      }
    }
  };
  int n_threads = std::max(1, jobs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace mm
