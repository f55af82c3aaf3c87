#pragma once

// The seven objective-aligned scores plus the five evaluation measures for a
// solution, recomputed independently of the solver, and run/seed aggregation.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mm/model.hpp"
#include "mm/weights.hpp"

namespace mm {

struct MeasureVector {
  double number_students = 0;     // objective 1
  double number_pairs_groups = 0; // objective 2 (group discounted)
  double volume = 0;              // objective 3
  double preference = 0;          // objective 4
  double group_connection = 0;    // objective 5
  double social = 0;              // objective 6
  double mentor_pairs = 0;        // objective 7
  double solo_time = 0;
  double group_time = 0;
  double solo_number = 0;
  double group_number = 0;
  double mentor_capacity_used = 0;

  static constexpr int kCount = 12;
  static const std::array<const char*, kCount>& names() {
    static const std::array<const char*, kCount> n = {
        "number_students", "number_pairs_groups", "volume",      "preference",
        "group_connection", "social",             "mentor_pairs", "solo_time",
        "group_time",       "solo_number",        "group_number", "mentor_capacity_used"};
    return n;
  }
  std::array<double, kCount> values() const {
    return {number_students, number_pairs_groups, volume,      preference,
            group_connection, social,             mentor_pairs, solo_time,
            group_time,       solo_number,        group_number, mentor_capacity_used};
  }
  MeasureVector& operator+=(const MeasureVector& o) {
    number_students += o.number_students;
    number_pairs_groups += o.number_pairs_groups;
    volume += o.volume;
    preference += o.preference;
    group_connection += o.group_connection;
    social += o.social;
    mentor_pairs += o.mentor_pairs;
    solo_time += o.solo_time;
    group_time += o.group_time;
    solo_number += o.solo_number;
    group_number += o.group_number;
    mentor_capacity_used += o.mentor_capacity_used;
    return *this;
  }
};

inline MeasureVector evaluate(const Instance& inst, const Solution& sol,
                              const PolicyConfig& cfg) {
  ValidationReport rep = validate_solution(inst, sol);
  if (!rep.feasible()) throw Error("evaluate: infeasible solution");
  MeasureVector m;
  std::set<int> matched_students;
  std::set<std::pair<int, int>> mentored;
  for (const auto& [e, h] : sol.pairs) {
    const Activity& a = inst.activities[e];
    m.solo_time += h;
    m.solo_number += 1;
    m.preference += preference_weight(inst, a, cfg.preference_variant);
    m.social += social_weight(inst, a);
    matched_students.insert(a.student);
    mentored.insert({a.student, a.mentor});
  }
  for (const auto& [k, h] : sol.members) {
    const Activity& a = inst.activities[k.first];
    m.group_time += h;
    m.number_pairs_groups += cfg.group_discount;
    m.preference += cfg.group_discount * preference_weight(inst, a, cfg.preference_variant);
    m.social += cfg.group_discount * social_weight(inst, a);
    matched_students.insert(a.student);
  }
  m.number_pairs_groups += m.solo_number;
  m.group_number = static_cast<double>(sol.groups.size());
  m.number_students = static_cast<double>(matched_students.size());
  m.mentor_pairs = static_cast<double>(mentored.size());
  m.volume = m.solo_time + cfg.group_discount * m.group_time;
  for (const auto& [g, h] : sol.groups) m.mentor_capacity_used += h;
  m.mentor_capacity_used += m.solo_time;
  // group coherence over realised same-group pairs
  std::map<std::pair<int, int>, std::vector<int>> group_members;
  for (const auto& [k, h] : sol.members) {
    const Activity& a = inst.activities[k.first];
    int s = inst.site_of(a.mentor, a.subject, a.year);
    group_members[{s, k.second}].push_back(k.first);
  }
  for (const auto& [g, es] : group_members) {
    const GroupSite& site = inst.sites[g.first];
    for (size_t p = 0; p < es.size(); ++p)
      for (size_t q = p + 1; q < es.size(); ++q)
        m.group_connection += coherence_coefficient(
            inst, inst.activities[es[p]].student, inst.activities[es[q]].student,
            site.subject, site.year);
  }
  return m;
}

// Objective value recomputed from the solution alone (independent of the
// solver's reported value). `run_day` >= 0 adds the waiting-time term.
inline double objective_value(const Instance& inst, const Solution& sol,
                              const PolicyConfig& cfg, int run_day = -1) {
  double v = 0;
  std::set<std::pair<int, int>> mentored;
  for (const auto& [e, h] : sol.pairs) {
    const Activity& a = inst.activities[e];
    v += activity_weight(inst, a, cfg, run_day) * h;
    mentored.insert({a.student, a.mentor});
  }
  for (const auto& [k, h] : sol.members)
    v += cfg.group_discount *
         activity_weight(inst, inst.activities[k.first], cfg, run_day) * h;
  v -= cfg.mentor_pair_penalty * static_cast<double>(mentored.size());
  std::map<std::pair<int, int>, std::vector<int>> group_members;
  for (const auto& [k, h] : sol.members) {
    const Activity& a = inst.activities[k.first];
    group_members[{inst.site_of(a.mentor, a.subject, a.year), k.second}].push_back(k.first);
  }
  for (const auto& [g, es] : group_members) {
    const GroupSite& site = inst.sites[g.first];
    for (size_t p = 0; p < es.size(); ++p)
      for (size_t q = p + 1; q < es.size(); ++q)
        v += coherence_coefficient(inst, inst.activities[es[p]].student,
                                   inst.activities[es[q]].student, site.subject,
                                   site.year);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Aggregation

struct MeasureSummary {
  double mean = 0, median = 0, q1 = 0, q3 = 0, min = 0, max = 0;
};

// Median-exclusive quartiles, fixed for reproducibility.
inline MeasureSummary summarize(std::vector<double> xs) {
  MeasureSummary s;
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  auto median_of = [](const std::vector<double>& v, size_t lo, size_t hi) {
    size_t n = hi - lo;
    return n % 2 ? v[lo + n / 2] : 0.5 * (v[lo + n / 2 - 1] + v[lo + n / 2]);
  };
  size_t n = xs.size();
  double total = 0;
  for (double x : xs) total += x;
  s.mean = total / n;
  s.median = median_of(xs, 0, n);
  if (n >= 2) {
    s.q1 = median_of(xs, 0, n / 2);
    s.q3 = median_of(xs, n % 2 ? n / 2 + 1 : n / 2, n);
  } else {
    s.q1 = s.q3 = s.median;
  }
  s.min = xs.front();
  s.max = xs.back();
  return s;
}

// Per-measure summaries over a collection of measure vectors.
inline std::array<MeasureSummary, MeasureVector::kCount> aggregate(
    const std::vector<MeasureVector>& vectors) {
  std::array<MeasureSummary, MeasureVector::kCount> out;
  for (int k = 0; k < MeasureVector::kCount; ++k) {
    std::vector<double> xs;
    xs.reserve(vectors.size());
    for (const auto& v : vectors) xs.push_back(v.values()[k]);
    out[k] = summarize(std::move(xs));
  }
  return out;
}

}  // namespace mm
