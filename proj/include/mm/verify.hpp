#pragma once

// Self-check suites: exhaustive-search equivalence on tiny instances and
// goodness-of-fit of the generator marginals. Shared by the `verify`
// subcommand and the test binaries.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mm/brute_force.hpp"
#include "mm/generator.hpp"
#include "mm/metrics.hpp"
#include "mm/milp.hpp"
#include "mm/model.hpp"
#include "mm/solver.hpp"

namespace mm {

// Random instance small enough for exhaustive search: at most 4 students,
// 3 mentors, 2 group slots, 10 activities.
inline Instance tiny_instance(Rng& rng) {
  SubjectTable table;
  table.names = {"Math", "Physics"};
  table.years = {{6, 7, 11, 12}, {7, 12}};
  const std::vector<int> student_years = {6, 7, 11, 12};

  int ns = rng.uniform_int(1, 4);
  int nm = rng.uniform_int(1, 3);
  std::vector<Student> students;
  for (int i = 0; i < ns; ++i) {
    Student s;
    s.id = "s" + std::to_string(i);
    s.year = student_years[rng.uniform_int(0, 3)];
    s.class_id = "c" + std::to_string(rng.uniform_int(0, 1));
    int nr = rng.uniform_int(1, 2);
    for (int r = 0; r < nr; ++r) {
      Request req;
      req.subject = nr == 2 ? r : rng.uniform_int(0, 1);  // distinct subjects
      if (!table.available(req.subject, s.year)) req.subject = 0;
      if (!table.available(req.subject, s.year)) continue;
      req.year = s.year;
      req.hours = rng.uniform_int(1, 4);
      req.grade = rng.uniform() < 0.3 ? 0 : rng.uniform_int(2, 5);
      bool dup = false;
      for (const Request& prev : s.requests) dup |= prev.subject == req.subject;
      if (!dup) s.requests.push_back(req);
    }
    if (s.requests.empty()) {
      Request req;
      req.subject = 0;
      req.year = s.year;
      req.hours = rng.uniform_int(1, 3);
      req.grade = 0;
      s.requests.push_back(req);
    }
    s.group_willing = rng.uniform() < 0.7;
    s.equipment = rng.uniform_int(0, 1);
    s.help = rng.uniform_int(0, 2);
    s.sd = rng.uniform_int(0, 3);
    s.nh = 0.5 * rng.uniform_int(1, 5);
    s.ws = rng.uniform_int(0, 3);
    s.cy = s.year == 12 ? 2 : s.year == 11 ? 1 : 0;
    students.push_back(std::move(s));
  }
  std::vector<Mentor> mentors;
  for (int j = 0; j < nm; ++j) {
    Mentor m;
    m.id = "m" + std::to_string(j);
    int no = rng.uniform_int(1, 2);
    for (int o = 0; o < no; ++o) {
      Offer off;
      off.subject = no == 2 ? o : rng.uniform_int(0, 1);
      off.year_lo = 1;
      off.year_hi = 12;
      m.offers.push_back(off);
    }
    m.capacity = rng.uniform_int(1, 6);
    m.group_willing = rng.uniform() < 0.7;
    m.ym = rng.uniform_int(-1, 2);
    const int dms[3] = {0, 1, 3};
    m.dm = dms[rng.uniform_int(0, 2)];
    m.gpm = static_cast<GradePref>(rng.uniform_int(0, 3));
    mentors.push_back(std::move(m));
  }
  InstanceConfig cfg;
  cfg.group_slots = rng.uniform_int(1, 2);
  cfg.group_capacity = rng.uniform() < 0.5 ? rng.uniform_int(2, 3) : 5;

  // trim until exhaustive search stays cheap
  for (;;) {
    Instance inst = build_instance(students, mentors, table, cfg);
    if (inst.activities.size() <= 10) return inst;
    for (auto& s : students)
      if (s.requests.size() > 1) {
        s.requests.pop_back();
        goto rebuilt;
      }
    students.pop_back();
  rebuilt:;
  }
}

// Policy variations cycled across oracle cases.
inline PolicyConfig oracle_policy(int k) {
  PolicyConfig cfg;
  const double wgs[3] = {0.5, 0.7, 1.0};
  cfg.group_discount = wgs[k % 3];
  cfg.preference_variant = static_cast<PreferenceVariant>((k / 3) % 3);
  cfg.waiting_weight = (k % 5 == 4) ? 2.0 : 0.0;
  return cfg;
}

enum class InjectedFault { None, ObjectiveOffset, PenaltyMismatch };

using VerifyLog = std::function<void(const std::string&)>;

// Exhaustive-search equivalence over `cases` random tiny instances.
// Returns the number of failed cases.
inline int run_oracle_suite(int cases, uint64_t base_seed, VerifyLog log,
                            InjectedFault fault = InjectedFault::None) {
  int failures = 0;
  char buf[256];
  for (int k = 0; k < cases; ++k) {
    uint64_t seed = base_seed + static_cast<uint64_t>(k);
    Rng rng(seed);
    Instance inst = tiny_instance(rng);
    PolicyConfig cfg = oracle_policy(k);
    cfg.group_slots = inst.config.group_slots;
    cfg.group_capacity = inst.config.group_capacity;
    int run_day = cfg.waiting_weight > 0 ? 5 : -1;

    PolicyConfig solver_cfg = cfg;
    if (fault == InjectedFault::PenaltyMismatch) solver_cfg.mentor_pair_penalty = 0;

    BruteForceResult bf = brute_force(inst, cfg, run_day);
    if (fault == InjectedFault::ObjectiveOffset) bf.objective += 1e-3;

    MilpModel model = build_milp(inst, solver_cfg, run_day);
    SolveResult sr = solve(model);
    Solution sol = extract_solution(model, sr.assignment, inst);
    double recomputed = objective_value(inst, sol, solver_cfg, run_day);

    bool ok = sr.status == SolveStatus::Optimal &&
              std::abs(sr.objective - bf.objective) < 1e-9 &&
              std::abs(recomputed - sr.objective) < 1e-6;
    if (!ok) {
      ++failures;
      std::snprintf(buf, sizeof buf,
                    "FAIL oracle case %d (seed %llu): search=%.12f exhaustive=%.12f "
                    "recomputed=%.12f status=%d",
                    k, static_cast<unsigned long long>(seed), sr.objective,
                    bf.objective, recomputed, static_cast<int>(sr.status));
      log(buf);
    }
  }
  std::snprintf(buf, sizeof buf, "oracle suite: %d/%d cases matched",
                cases - failures, cases);
  log(buf);
  return failures;
}

// Goodness of fit of the generator marginals against the configured tables.
// Returns the number of failed checks.
inline int run_generator_gof(int samples, uint64_t seed, VerifyLog log,
                             double tol = 0.03, double ws_tol = 0.01) {
  GeneratorConfig cfg;
  Rng rng(seed);
  SubjectTable subjects = default_subjects();
  std::vector<Student> students = generate_students(samples, cfg, rng);
  std::vector<Mentor> mentors = generate_mentors(samples, cfg, subjects, rng);

  int failures = 0;
  char buf[256];
  auto check = [&](const char* name, double observed, double expected,
                   double tolerance) {
    bool ok = std::abs(observed - expected) <= tolerance;
    if (!ok) ++failures;
    std::snprintf(buf, sizeof buf, "%s %-28s observed=%.4f expected=%.4f",
                  ok ? "ok  " : "FAIL", name, observed, expected);
    log(buf);
  };
  const double n = samples;

  std::vector<double> subj_count(4, 0), hours(4, 0), sd(4, 0), children(4, 0);
  double grp = 0, single = 0, ws_sum = 0, blank = 0, grades = 0;
  for (const Student& s : students) {
    subj_count[s.requests.size() - 1] += 1;
    for (const Request& r : s.requests) {
      hours[r.hours - 1] += 1;
      grades += 1;
      if (r.grade == 0) blank += 1;
    }
    sd[s.sd] += 1;
    children[s.children - 1] += 1;
    if (s.parents == 1) single += 1;
    if (s.group_willing) grp += 1;
    ws_sum += s.ws;
  }
  for (int k = 0; k < 4; ++k) {
    std::snprintf(buf, sizeof buf, "subjects=%d", k + 1);
    check(buf, subj_count[k] / n, cfg.student_subject_count[k], tol);
  }
  for (int k = 0; k < 4; ++k) {
    std::snprintf(buf, sizeof buf, "hours=%d", k + 1);
    check(buf, hours[k] / grades, cfg.request_hours[k], tol);
  }
  check("blank grade", blank / grades, cfg.blank_grade_prob, tol);
  for (int k = 0; k < 4; ++k) {
    std::snprintf(buf, sizeof buf, "sd=%d", k);
    check(buf, sd[k] / n, cfg.sd_dist[k], tol);
  }
  check("student group-willing", grp / n, cfg.student_group_prob, tol);
  check("single parent", single / n, cfg.single_parent_prob, tol);
  for (int k = 0; k < 4; ++k) {
    std::snprintf(buf, sizeof buf, "children=%d", k + 1);
    check(buf, children[k] / n, cfg.children_dist[k], tol);
  }
  // Poisson(0.786) truncated at 3 has mean ~0.7683
  {
    double l = cfg.ws_mean, p0 = std::exp(-l);
    double p[4] = {p0, p0 * l, p0 * l * l / 2, p0 * l * l * l / 6};
    double z = p[0] + p[1] + p[2] + p[3];
    double mean = (p[1] + 2 * p[2] + 3 * p[3]) / z;
    check("ws mean", ws_sum / n, mean, ws_tol);
  }

  std::vector<double> dm(3, 0), gpm(4, 0), ym(4, 0), qrange(3, 0);
  double mgrp = 0;
  for (const Mentor& m : mentors) {
    dm[m.dm == 0 ? 0 : m.dm == 1 ? 1 : 2] += 1;
    gpm[static_cast<int>(m.gpm)] += 1;
    ym[m.ym < 0 ? 3 : m.ym] += 1;
    qrange[m.capacity <= 3 ? 0 : m.capacity <= 6 ? 1 : 2] += 1;
    if (m.group_willing) mgrp += 1;
  }
  check("mentor group-willing", mgrp / n, cfg.mentor_group_prob, tol);
  const char* dm_names[3] = {"dm=0", "dm=1", "dm=3"};
  for (int k = 0; k < 3; ++k) check(dm_names[k], dm[k] / n, cfg.dm_dist[k], tol);
  const char* gpm_names[4] = {"gpm=N", "gpm=W", "gpm=M", "gpm=S"};
  for (int k = 0; k < 4; ++k) check(gpm_names[k], gpm[k] / n, cfg.gpm_dist[k], tol);
  const char* ym_names[4] = {"ym=1-4", "ym=5-8", "ym=9-12", "ym=none"};
  for (int k = 0; k < 4; ++k) check(ym_names[k], ym[k] / n, cfg.ym_dist[k], tol);
  const char* q_names[3] = {"Q=1-3", "Q=4-6", "Q=7-10"};
  for (int k = 0; k < 3; ++k)
    check(q_names[k], qrange[k] / n, cfg.capacity_range_dist[k], tol);
  return failures;
}

}  // namespace mm
