#pragma once

// Solver-neutral MILP assembly: variables, linear constraints and the
// maximization objective for one instance under one policy configuration,
// plus MPS export and assignment-to-solution extraction.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "mm/model.hpp"
#include "mm/weights.hpp"

namespace mm {

enum class VarTag {
  PairHours,     // x_e
  PairUsed,      // y_e
  GroupHours,    // hours of a potential group
  GroupUsed,     // realisation indicator of a potential group
  MemberUsed,    // activity-in-group indicator
  MemberHours,   // per-member hours inside a group
  SubjectMatched,  // per (student, subject) indicator
  StudentMatched,  // per student indicator
  MentorPair,    // (student, mentor) has at least one pair
  SameGroup,     // two students share a potential group
};

struct Variable {
  std::string name;
  VarTag tag;
  bool binary = true;
  double lo = 0.0;
  double hi = 1.0;
  // entity tuple behind the tag; meaning depends on the tag
  int a = -1, b = -1, c = -1, d = -1;
};

struct LinearConstraint {
  std::string tag;  // nonempty provenance tag
  std::vector<std::pair<int, double>> coeffs;  // sparse, no zeros
  char sense = 'L';  // 'L' <=, 'G' >=, 'E' =
  double rhs = 0.0;
};

struct MilpModel {
  std::vector<Variable> vars;
  std::vector<LinearConstraint> cons;
  std::vector<double> objective;  // dense over vars; sense = maximize

  // index tables for extraction and reporting
  std::vector<int> x_of_activity;   // activity -> x_e var (-1 if none)
  std::vector<int> y_of_activity;   // activity -> y_e var
  std::vector<std::vector<int>> xg_of_site;  // site -> per-slot group hours var
  std::vector<std::vector<int>> yg_of_site;  // site -> per-slot group indicator
  // (activity, slot) -> member vars; aligned with instance site member lists
  std::map<std::pair<int, int>, int> ym_of;  // (activity, slot) -> MemberUsed
  std::map<std::pair<int, int>, int> xm_of;  // (activity, slot) -> MemberHours

  double objective_at(const std::vector<double>& assignment) const {
    double v = 0;
    for (size_t i = 0; i < objective.size(); ++i) v += objective[i] * assignment[i];
    return v;
  }
};

namespace detail {
inline std::string var_name(const char* prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%d", prefix, i);
  return buf;
}
}  // namespace detail

// Builds the complete MILP. `run_day` >= 0 enables the waiting-time term.
inline MilpModel build_milp(const Instance& inst, const PolicyConfig& cfg,
                            int run_day = -1) {
  MilpModel m;
  const int nE = static_cast<int>(inst.activities.size());
  const int nSites = static_cast<int>(inst.sites.size());

  auto add_var = [&](const char* prefix, int seq, VarTag tag, bool binary,
                     double lo, double hi, int a, int b = -1, int c = -1,
                     int d = -1) {
    Variable v;
    v.name = detail::var_name(prefix, seq);
    v.tag = tag;
    v.binary = binary;
    v.lo = lo;
    v.hi = hi;
    v.a = a; v.b = b; v.c = c; v.d = d;
    m.vars.push_back(std::move(v));
    return static_cast<int>(m.vars.size()) - 1;
  };

  // --- variables, in fixed tag order ---
  m.x_of_activity.assign(nE, -1);
  m.y_of_activity.assign(nE, -1);
  for (int e = 0; e < nE; ++e)
    m.x_of_activity[e] = add_var("XE", e, VarTag::PairHours, false, 0, 3, e);
  for (int e = 0; e < nE; ++e)
    m.y_of_activity[e] = add_var("YE", e, VarTag::PairUsed, true, 0, 1, e);

  m.xg_of_site.assign(nSites, {});
  m.yg_of_site.assign(nSites, {});
  int gseq = 0;
  for (int s = 0; s < nSites; ++s)
    for (int t = 1; t <= inst.sites[s].slots; ++t)
      m.xg_of_site[s].push_back(
          add_var("XG", gseq++, VarTag::GroupHours, false, 0, 3, s, t));
  gseq = 0;
  for (int s = 0; s < nSites; ++s)
    for (int t = 1; t <= inst.sites[s].slots; ++t)
      m.yg_of_site[s].push_back(
          add_var("YG", gseq++, VarTag::GroupUsed, true, 0, 1, s, t));
  // a site with k groupable activities realises at most floor(k/2) groups
  // (each needs two distinct members and an activity joins at most one
  // slot), so the surplus slots can be closed outright
  for (int s = 0; s < nSites; ++s) {
    int usable = static_cast<int>(inst.sites[s].member_activities.size()) / 2;
    for (int t = usable + 1; t <= inst.sites[s].slots; ++t) {
      m.vars[m.yg_of_site[s][t - 1]].hi = 0;
      m.vars[m.xg_of_site[s][t - 1]].hi = 0;
    }
  }

  int mseq = 0;
  for (int s = 0; s < nSites; ++s)
    for (int e : inst.sites[s].member_activities)
      for (int t = 1; t <= inst.sites[s].slots; ++t)
        m.ym_of[{e, t}] = add_var("YM", mseq++, VarTag::MemberUsed, true, 0, 1, e, t, s);
  mseq = 0;
  for (int s = 0; s < nSites; ++s)
    for (int e : inst.sites[s].member_activities)
      for (int t = 1; t <= inst.sites[s].slots; ++t)
        m.xm_of[{e, t}] = add_var("XM", mseq++, VarTag::MemberHours, false, 0, 3, e, t, s);

  // beta/gamma indicators
  std::vector<std::vector<int>> beta_of(inst.students.size());
  int bseq = 0;
  for (size_t i = 0; i < inst.students.size(); ++i)
    for (size_t k = 0; k < inst.students[i].requests.size(); ++k)
      beta_of[i].push_back(add_var("BB", bseq++, VarTag::SubjectMatched, true, 0, 1,
                                   static_cast<int>(i), static_cast<int>(k)));
  std::vector<int> gamma_of(inst.students.size());
  for (size_t i = 0; i < inst.students.size(); ++i)
    gamma_of[i] = add_var("GS", static_cast<int>(i), VarTag::StudentMatched, true,
                          0, 1, static_cast<int>(i));

  // mentor-pair indicators for (student, mentor) pairs with an activity
  std::map<std::pair<int, int>, std::vector<int>> pair_activities;
  for (int e = 0; e < nE; ++e) {
    const Activity& a = inst.activities[e];
    pair_activities[{a.student, a.mentor}].push_back(e);
  }
  std::map<std::pair<int, int>, int> mp_of;
  int pseq = 0;
  for (const auto& [k, es] : pair_activities)
    mp_of[k] = add_var("MP", pseq++, VarTag::MentorPair, true, 0, 1, k.first, k.second);

  // same-group indicators: per potential group and member pair
  struct ZRef { int var; int site; int slot; int ea; int eb; };
  std::vector<ZRef> zs;
  int zseq = 0;
  for (int s = 0; s < nSites; ++s) {
    const auto& mem = inst.sites[s].member_activities;
    for (size_t p = 0; p < mem.size(); ++p)
      for (size_t q = p + 1; q < mem.size(); ++q)
        for (int t = 1; t <= inst.sites[s].slots; ++t) {
          int v = add_var("ZZ", zseq++, VarTag::SameGroup, true, 0, 1,
                          inst.activities[mem[p]].student,
                          inst.activities[mem[q]].student, s, t);
          zs.push_back({v, s, t, mem[p], mem[q]});
        }
  }

  // --- constraints ---
  auto add_con = [&](const char* tag, std::vector<std::pair<int, double>> coeffs,
                     char sense, double rhs) {
    m.cons.push_back({tag, std::move(coeffs), sense, rhs});
  };

  // pair coupling: y_e <= x_e <= min(3, q) y_e (demand-tightened coefficient)
  for (int e = 0; e < nE; ++e) {
    double cap = std::min(3, inst.request_of(inst.activities[e]).hours);
    add_con("pair_coupling_lo", {{m.x_of_activity[e], 1}, {m.y_of_activity[e], -1}}, 'G', 0);
    add_con("pair_coupling_hi", {{m.x_of_activity[e], 1}, {m.y_of_activity[e], -cap}}, 'L', 0);
  }
  // group hours coupling: 2 y <= x <= 3 y
  for (int s = 0; s < nSites; ++s)
    for (int t = 0; t < inst.sites[s].slots; ++t) {
      add_con("group_coupling_lo", {{m.xg_of_site[s][t], 1}, {m.yg_of_site[s][t], -2}}, 'G', 0);
      add_con("group_coupling_hi", {{m.xg_of_site[s][t], 1}, {m.yg_of_site[s][t], -3}}, 'L', 0);
    }
  // group realisation: 2 y_g <= sum members <= c y_g
  for (int s = 0; s < nSites; ++s) {
    const GroupSite& site = inst.sites[s];
    for (int t = 1; t <= site.slots; ++t) {
      std::vector<std::pair<int, double>> lo{{m.yg_of_site[s][t - 1], -2.0}};
      std::vector<std::pair<int, double>> hi{
          {m.yg_of_site[s][t - 1], -static_cast<double>(site.capacity)}};
      for (int e : site.member_activities) {
        lo.push_back({m.ym_of.at({e, t}), 1});
        hi.push_back({m.ym_of.at({e, t}), 1});
      }
      add_con("group_fill_lo", std::move(lo), 'G', 0);
      add_con("group_fill_hi", std::move(hi), 'L', 0);
    }
  }
  // activity exclusivity: y_e + sum_t y_e^t <= 1 (only where member vars exist)
  for (int e = 0; e < nE; ++e) {
    const Activity& a = inst.activities[e];
    int s = inst.site_of(a.mentor, a.subject, a.year);
    if (s < 0 || !inst.group_eligible(e)) continue;
    std::vector<std::pair<int, double>> cs{{m.y_of_activity[e], 1}};
    for (int t = 1; t <= inst.sites[s].slots; ++t)
      cs.push_back({m.ym_of.at({e, t}), 1});
    add_con("activity_single_use", std::move(cs), 'L', 1);
  }
  // one mentor per (student, subject)
  for (size_t i = 0; i < inst.students.size(); ++i) {
    const Student& st = inst.students[i];
    for (size_t k = 0; k < st.requests.size(); ++k) {
      std::vector<std::pair<int, double>> cs;
      for (int e : inst.activities_of_student[i]) {
        if (inst.activities[e].request_pos != static_cast<int>(k)) continue;
        cs.push_back({m.y_of_activity[e], 1});
        auto it = m.ym_of.lower_bound({e, 0});
        for (; it != m.ym_of.end() && it->first.first == e; ++it)
          cs.push_back({it->second, 1});
      }
      auto beta_cs = cs;
      if (!cs.empty()) add_con("one_mentor_per_subject", std::move(cs), 'L', 1);
      // beta linkage equality (pins beta to 0 when no activity exists)
      beta_cs.push_back({beta_of[i][k], -1});
      add_con("subject_indicator", std::move(beta_cs), 'E', 0);
    }
  }
  // gamma big-M bracket: gamma <= sum_k beta <= M gamma
  for (size_t i = 0; i < inst.students.size(); ++i) {
    std::vector<std::pair<int, double>> lo{{gamma_of[i], -1.0}};
    std::vector<std::pair<int, double>> hi{{gamma_of[i], -static_cast<double>(cfg.big_m)}};
    for (size_t k = 0; k < inst.students[i].requests.size(); ++k) {
      lo.push_back({beta_of[i][k], 1});
      hi.push_back({beta_of[i][k], 1});
    }
    add_con("student_indicator_lo", std::move(lo), 'G', 0);
    add_con("student_indicator_hi", std::move(hi), 'L', 0);
  }
  // mentor capacity
  for (size_t j = 0; j < inst.mentors.size(); ++j) {
    std::vector<std::pair<int, double>> cs;
    for (int e : inst.activities_of_mentor[j]) cs.push_back({m.x_of_activity[e], 1});
    for (int s = 0; s < nSites; ++s)
      if (inst.sites[s].mentor == static_cast<int>(j))
        for (int t = 0; t < inst.sites[s].slots; ++t)
          cs.push_back({m.xg_of_site[s][t], 1});
    if (cs.empty()) continue;
    add_con("mentor_capacity", std::move(cs), 'L', inst.mentors[j].capacity);
  }
  // pair demand cap: x_e <= q
  for (int e = 0; e < nE; ++e)
    add_con("pair_demand", {{m.x_of_activity[e], 1}}, 'L',
            inst.request_of(inst.activities[e]).hours);
  // member hour caps and membership coupling
  for (const auto& [key, xm] : m.xm_of) {
    auto [e, t] = key;
    const Activity& a = inst.activities[e];
    int s = inst.site_of(a.mentor, a.subject, a.year);
    add_con("member_demand", {{xm, 1}}, 'L', inst.request_of(a).hours);
    add_con("member_group_hours", {{xm, 1}, {m.xg_of_site[s][t - 1], -1}}, 'L', 0);
    add_con("member_coupling",
            {{xm, 1}, {m.ym_of.at({e, t}),
                       -std::min(3.0, static_cast<double>(inst.request_of(a).hours))}},
            'L', 0);
  }
  // same-group linearization
  for (const auto& z : zs) {
    int ya = m.ym_of.at({z.ea, z.slot});
    int yb = m.ym_of.at({z.eb, z.slot});
    add_con("same_group_lo", {{z.var, 1}, {ya, -1}, {yb, -1}}, 'G', -1);
    add_con("same_group_hi_a", {{z.var, 1}, {ya, -1}}, 'L', 0);
    add_con("same_group_hi_b", {{z.var, 1}, {yb, -1}}, 'L', 0);
  }
  // mentor-pair indicator: m <= sum y_e <= 5 m
  for (const auto& [k, es] : pair_activities) {
    std::vector<std::pair<int, double>> lo{{mp_of[k], -1.0}};
    std::vector<std::pair<int, double>> hi{{mp_of[k], -5.0}};
    for (int e : es) {
      lo.push_back({m.y_of_activity[e], 1});
      hi.push_back({m.y_of_activity[e], 1});
    }
    add_con("mentor_pair_lo", std::move(lo), 'G', 0);
    add_con("mentor_pair_hi", std::move(hi), 'L', 0);
  }
  // slot symmetry breaking: y_g^t >= y_g^{t+1}
  for (int s = 0; s < nSites; ++s)
    for (int t = 1; t < inst.sites[s].slots; ++t)
      add_con("slot_symmetry",
              {{m.yg_of_site[s][t - 1], 1}, {m.yg_of_site[s][t], -1}}, 'G', 0);

  // --- objective ---
  m.objective.assign(m.vars.size(), 0.0);
  for (int e = 0; e < nE; ++e) {
    double w = activity_weight(inst, inst.activities[e], cfg, run_day);
    m.objective[m.x_of_activity[e]] = w;
  }
  for (const auto& [key, xm] : m.xm_of) {
    double w = activity_weight(inst, inst.activities[key.first], cfg, run_day);
    m.objective[xm] = w * cfg.group_discount;
  }
  for (const auto& z : zs) {
    const Activity& a = inst.activities[z.ea];
    m.objective[z.var] = coherence_coefficient(
        inst, a.student, inst.activities[z.eb].student, a.subject, a.year);
  }
  for (const auto& [k, v] : mp_of) m.objective[v] = -cfg.mentor_pair_penalty;
  return m;
}

// ---------------------------------------------------------------------------
// MPS export (fixed column layout, deterministic)

inline std::string export_mps(const MilpModel& m, const std::string& name = "MODEL") {
  std::string out;
  out.reserve(m.cons.size() * 80 + m.vars.size() * 120);
  char line[128];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(line, sizeof line, fmt, args...);
    out += line;
    out += '\n';
  };
  emit("NAME          %s", name.c_str());
  out += "ROWS\n";
  emit(" %c  %-8s", 'N', "OBJ");
  std::vector<std::string> row_names(m.cons.size());
  for (size_t r = 0; r < m.cons.size(); ++r) {
    char rn[16];
    std::snprintf(rn, sizeof rn, "R%07zu", r);
    row_names[r] = rn;
    emit(" %c  %-8s", m.cons[r].sense, rn);
  }
  // column-major entries
  std::vector<std::vector<std::pair<int, double>>> col_entries(m.vars.size());
  for (size_t r = 0; r < m.cons.size(); ++r)
    for (const auto& [v, c] : m.cons[r].coeffs)
      col_entries[v].push_back({static_cast<int>(r), c});
  out += "COLUMNS\n";
  emit("    %-8s  %-8s  %-12s", "MARKER", "'MARKER'", "'INTORG'");
  for (size_t v = 0; v < m.vars.size(); ++v) {
    const char* vn = m.vars[v].name.c_str();
    if (m.objective[v] != 0.0)
      emit("    %-8s  %-8s  %-12.8g", vn, "OBJ", m.objective[v]);
    for (const auto& [r, c] : col_entries[v])
      emit("    %-8s  %-8s  %-12.8g", vn, row_names[r].c_str(), c);
    if (m.objective[v] == 0.0 && col_entries[v].empty())
      emit("    %-8s  %-8s  %-12.8g", vn, "OBJ", 0.0);
  }
  emit("    %-8s  %-8s  %-12s", "MARKER", "'MARKER'", "'INTEND'");
  out += "RHS\n";
  for (size_t r = 0; r < m.cons.size(); ++r)
    if (m.cons[r].rhs != 0.0)
      emit("    %-8s  %-8s  %-12.8g", "RHS", row_names[r].c_str(), m.cons[r].rhs);
  out += "BOUNDS\n";
  for (size_t v = 0; v < m.vars.size(); ++v) {
    const Variable& var = m.vars[v];
    if (var.binary) {
      emit(" BV %-8s  %-8s", "BND", var.name.c_str());
    } else {
      if (var.lo != 0.0)
        emit(" LO %-8s  %-8s  %-12.8g", "BND", var.name.c_str(), var.lo);
      emit(" UP %-8s  %-8s  %-12.8g", "BND", var.name.c_str(), var.hi);
    }
  }
  out += "ENDATA\n";
  return out;
}

// Model statistics (variable/constraint counts by tag) as a JSON string.
inline std::string model_stats_json(const MilpModel& m) {
  auto tag_name = [](VarTag t) {
    switch (t) {
      case VarTag::PairHours: return "pair_hours";
      case VarTag::PairUsed: return "pair_used";
      case VarTag::GroupHours: return "group_hours";
      case VarTag::GroupUsed: return "group_used";
      case VarTag::MemberUsed: return "member_used";
      case VarTag::MemberHours: return "member_hours";
      case VarTag::SubjectMatched: return "subject_matched";
      case VarTag::StudentMatched: return "student_matched";
      case VarTag::MentorPair: return "mentor_pair";
      default: return "same_group";
    }
  };
  std::map<std::string, int> vc, cc;
  for (const auto& v : m.vars) vc[tag_name(v.tag)]++;
  for (const auto& c : m.cons) cc[c.tag]++;
  std::string out = "{\"variables\":{";
  bool first = true;
  for (const auto& [k, n] : vc) {
    if (!first) out += ",";
    first = false;
    out += "\"" + k + "\":" + std::to_string(n);
  }
  out += "},\"constraints\":{";
  first = true;
  for (const auto& [k, n] : cc) {
    if (!first) out += ",";
    first = false;
    out += "\"" + k + "\":" + std::to_string(n);
  }
  out += "},\"total_variables\":" + std::to_string(m.vars.size()) +
         ",\"total_constraints\":" + std::to_string(m.cons.size()) + "}";
  return out;
}

// ---------------------------------------------------------------------------
// Solution extraction

// Turns a (near-)integral feasible assignment into a Solution. Throws Error
// citing the first violated constraint's tag on an infeasible assignment.
inline Solution extract_solution(const MilpModel& m,
                                 const std::vector<double>& assignment,
                                 const Instance& inst, double tol = 1e-6) {
  if (assignment.size() != m.vars.size())
    throw Error("extract_solution: assignment size mismatch");
  for (size_t v = 0; v < m.vars.size(); ++v) {
    double x = assignment[v];
    if (std::abs(x - std::round(x)) > tol)
      throw Error("extract_solution: variable " + m.vars[v].name + " not integral");
    if (x < m.vars[v].lo - tol || x > m.vars[v].hi + tol)
      throw Error("extract_solution: variable " + m.vars[v].name + " out of bounds");
  }
  for (const auto& c : m.cons) {
    double lhs = 0;
    for (const auto& [v, coef] : c.coeffs) lhs += coef * assignment[v];
    bool ok = c.sense == 'L'   ? lhs <= c.rhs + tol
              : c.sense == 'G' ? lhs >= c.rhs - tol
                               : std::abs(lhs - c.rhs) <= tol;
    if (!ok) throw Error("extract_solution: violated constraint " + c.tag);
  }
  auto ival = [&](int v) { return static_cast<int>(std::llround(assignment[v])); };
  Solution sol;
  for (size_t e = 0; e < m.x_of_activity.size(); ++e)
    if (int h = ival(m.x_of_activity[e]); h > 0) sol.pairs[static_cast<int>(e)] = h;
  for (size_t s = 0; s < m.xg_of_site.size(); ++s)
    for (size_t t = 0; t < m.xg_of_site[s].size(); ++t)
      if (ival(m.yg_of_site[s][t]) > 0)
        sol.groups[{static_cast<int>(s), static_cast<int>(t) + 1}] =
            ival(m.xg_of_site[s][t]);
  for (const auto& [key, ym] : m.ym_of) {
    if (ival(ym) == 0) continue;
    const Activity& a = inst.activities[key.first];
    int s = inst.site_of(a.mentor, a.subject, a.year);
    if (!sol.groups.count({s, key.second})) continue;  // x_e^t forced 0 anyway
    sol.members[key] = ival(m.xm_of.at(key));
  }
  return sol;
}

}  // namespace mm
