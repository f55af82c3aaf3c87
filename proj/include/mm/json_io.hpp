#pragma once

// JSON serialization for instances, solutions and run logs, plus the CSV
// measure table. nlohmann::json keeps object keys sorted, so identical data
// always serializes to identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "mm/metrics.hpp"
#include "mm/model.hpp"
#include "mm/simulator.hpp"
#include "mm/weights.hpp"

namespace mm {

using nlohmann::json;

inline constexpr const char* kToolName = "mentormatch";
inline constexpr const char* kToolVersion = "1.0.0";

// --- enum <-> string -------------------------------------------------------

inline std::string to_string(Matriculation m) {
  switch (m) {
    case Matriculation::Base: return "base";
    case Matriculation::Advanced: return "advanced";
    case Matriculation::NotApplicable: return "n/a";
    default: return "none";
  }
}
inline Matriculation matriculation_from_string(const std::string& s) {
  if (s == "base") return Matriculation::Base;
  if (s == "advanced") return Matriculation::Advanced;
  if (s == "n/a") return Matriculation::NotApplicable;
  if (s == "none") return Matriculation::None;
  throw Error("unknown matriculation value: " + s);
}

inline std::string to_string(GradePref g) {
  switch (g) {
    case GradePref::Weak: return "W";
    case GradePref::Medium: return "M";
    case GradePref::Strong: return "S";
    default: return "N";
  }
}
inline GradePref grade_pref_from_string(const std::string& s) {
  if (s == "W") return GradePref::Weak;
  if (s == "M") return GradePref::Medium;
  if (s == "S") return GradePref::Strong;
  if (s == "N") return GradePref::None;
  throw Error("unknown grade preference value: " + s);
}

inline std::string to_string(PreferenceVariant v) {
  switch (v) {
    case PreferenceVariant::B: return "B";
    case PreferenceVariant::C: return "C";
    default: return "A";
  }
}
inline PreferenceVariant preference_variant_from_string(const std::string& s) {
  if (s == "A" || s == "a") return PreferenceVariant::A;
  if (s == "B" || s == "b") return PreferenceVariant::B;
  if (s == "C" || s == "c") return PreferenceVariant::C;
  throw Error("unknown preference variant: " + s);
}

inline std::string to_string(WaitingScope w) {
  return w == WaitingScope::FirstSubjectOnly ? "first_subject_only"
                                             : "all_subjects";
}
inline WaitingScope waiting_scope_from_string(const std::string& s) {
  if (s == "all_subjects") return WaitingScope::AllSubjects;
  if (s == "first_subject_only") return WaitingScope::FirstSubjectOnly;
  throw Error("unknown waiting scope: " + s);
}

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapReached: return "gap_reached";
    default: return "limit_reached";
  }
}

// --- policy config ---------------------------------------------------------

inline json policy_to_json(const PolicyConfig& p) {
  json j;
  j["wg"] = p.group_discount;
  j["volume_weight"] = p.volume_weight;
  j["preference_variant"] = to_string(p.preference_variant);
  j["mentor_pair_penalty"] = p.mentor_pair_penalty;
  j["waiting_weight"] = p.waiting_weight;
  j["waiting_scope"] = to_string(p.waiting_scope);
  j["group_slots"] = p.group_slots;
  j["group_capacity"] = p.group_capacity;
  j["big_m"] = p.big_m;
  return j;
}

// Absent keys keep their defaults.
inline PolicyConfig policy_from_json(const json& j) {
  PolicyConfig p;
  if (j.contains("wg")) p.group_discount = j["wg"].get<double>();
  if (j.contains("volume_weight")) p.volume_weight = j["volume_weight"].get<double>();
  if (j.contains("preference_variant"))
    p.preference_variant =
        preference_variant_from_string(j["preference_variant"].get<std::string>());
  if (j.contains("mentor_pair_penalty"))
    p.mentor_pair_penalty = j["mentor_pair_penalty"].get<double>();
  if (j.contains("waiting_weight")) p.waiting_weight = j["waiting_weight"].get<double>();
  if (j.contains("waiting_scope"))
    p.waiting_scope = waiting_scope_from_string(j["waiting_scope"].get<std::string>());
  if (j.contains("group_slots")) p.group_slots = j["group_slots"].get<int>();
  if (j.contains("group_capacity")) p.group_capacity = j["group_capacity"].get<int>();
  if (j.contains("big_m")) p.big_m = j["big_m"].get<double>();
  return p;
}

// --- instance --------------------------------------------------------------

inline json instance_to_json(const Instance& inst, const PolicyConfig& policy,
                             const json& meta = json::object()) {
  json j;
  json subjects = json::array();
  for (size_t k = 0; k < inst.subjects.names.size(); ++k)
    subjects.push_back({{"name", inst.subjects.names[k]},
                        {"years", inst.subjects.years[k]}});
  j["subjects"] = subjects;

  json students = json::array();
  for (const Student& s : inst.students) {
    json requests = json::array();
    for (const Request& r : s.requests)
      requests.push_back({{"subject", inst.subjects.names[r.subject]},
                          {"year", r.year},
                          {"hours", r.hours},
                          {"grade", r.grade}});
    students.push_back({{"id", s.id},
                        {"year", s.year},
                        {"class_id", s.class_id},
                        {"requests", requests},
                        {"group", s.group_willing ? 1 : 0},
                        {"equipment", s.equipment},
                        {"help", s.help},
                        {"sd", s.sd},
                        {"nh", s.nh},
                        {"ws", s.ws},
                        {"cy", s.cy},
                        {"matriculation", to_string(s.matriculation)},
                        {"parents", s.parents},
                        {"children", s.children},
                        {"registration_day", s.registration_day},
                        {"departure_day", s.departure_day}});
  }
  j["students"] = students;

  json mentors = json::array();
  for (const Mentor& m : inst.mentors) {
    json offers = json::array();
    for (const Offer& o : m.offers)
      offers.push_back({{"subject", inst.subjects.names[o.subject]},
                        {"year_lo", o.year_lo},
                        {"year_hi", o.year_hi}});
    mentors.push_back({{"id", m.id},
                       {"offers", offers},
                       {"capacity", m.capacity},
                       {"group", m.group_willing ? 1 : 0},
                       {"ym", m.ym},
                       {"dm", m.dm},
                       {"gpm", to_string(m.gpm)},
                       {"registration_day", m.registration_day},
                       {"departure_day", m.departure_day}});
  }
  j["mentors"] = mentors;

  json config = policy_to_json(policy);
  config["group_slots"] = inst.config.group_slots;
  config["group_capacity"] = inst.config.group_capacity;
  j["config"] = config;
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

inline Instance instance_from_json(const json& j,
                                   PolicyConfig* policy_out = nullptr) {
  SubjectTable table;
  for (const auto& s : j.at("subjects")) {
    table.names.push_back(s.at("name").get<std::string>());
    auto ys = s.at("years").get<std::vector<int>>();
    std::sort(ys.begin(), ys.end());
    table.years.push_back(std::move(ys));
  }
  auto subject_index = [&](const std::string& name) {
    int k = table.name_index(name);
    if (k < 0) throw Error("unknown subject: " + name);
    return k;
  };
  std::vector<Student> students;
  for (const auto& js : j.at("students")) {
    Student s;
    s.id = js.at("id").get<std::string>();
    s.year = js.at("year").get<int>();
    s.class_id = js.value("class_id", std::string());
    for (const auto& jr : js.at("requests")) {
      Request r;
      r.subject = subject_index(jr.at("subject").get<std::string>());
      r.year = jr.at("year").get<int>();
      r.hours = jr.at("hours").get<int>();
      r.grade = jr.value("grade", 0);
      s.requests.push_back(r);
    }
    s.group_willing = js.value("group", 0) != 0;
    s.equipment = js.value("equipment", 0);
    s.help = js.value("help", 0);
    s.sd = js.value("sd", 0);
    s.nh = js.value("nh", 0.5);
    s.ws = js.value("ws", 0);
    s.cy = js.value("cy", s.year == 12 ? 2 : s.year == 11 ? 1 : 0);
    s.matriculation =
        matriculation_from_string(js.value("matriculation", std::string("none")));
    s.parents = js.value("parents", 0);
    s.children = js.value("children", 0);
    s.registration_day = js.value("registration_day", 0);
    s.departure_day = js.value("departure_day", 1);
    students.push_back(std::move(s));
  }
  std::vector<Mentor> mentors;
  for (const auto& jm : j.at("mentors")) {
    Mentor m;
    m.id = jm.at("id").get<std::string>();
    for (const auto& jo : jm.at("offers")) {
      Offer o;
      o.subject = subject_index(jo.at("subject").get<std::string>());
      o.year_lo = jo.value("year_lo", 1);
      o.year_hi = jo.value("year_hi", 12);
      m.offers.push_back(o);
    }
    m.capacity = jm.at("capacity").get<int>();
    m.group_willing = jm.value("group", 0) != 0;
    m.ym = jm.value("ym", -1);
    m.dm = jm.value("dm", 1);
    m.gpm = grade_pref_from_string(jm.value("gpm", std::string("N")));
    m.registration_day = jm.value("registration_day", 0);
    m.departure_day = jm.value("departure_day", 1);
    mentors.push_back(std::move(m));
  }
  InstanceConfig ic;
  PolicyConfig pc;
  if (j.contains("config")) {
    pc = policy_from_json(j["config"]);
    ic.group_slots = pc.group_slots;
    ic.group_capacity = pc.group_capacity;
  }
  if (policy_out) *policy_out = pc;
  return build_instance(std::move(students), std::move(mentors),
                        std::move(table), ic);
}

// --- solution --------------------------------------------------------------

inline json solution_to_json(const Instance& inst, const Solution& sol,
                             const json& meta = json::object()) {
  json j;
  json pairs = json::array();
  for (const auto& [e, h] : sol.pairs) {
    const Activity& a = inst.activities[e];
    pairs.push_back({{"student", inst.students[a.student].id},
                     {"mentor", inst.mentors[a.mentor].id},
                     {"subject", inst.subjects.names[a.subject]},
                     {"year", a.year},
                     {"hours", h}});
  }
  j["pairs"] = pairs;
  json members = json::array();
  for (const auto& [k, h] : sol.members) {
    const Activity& a = inst.activities[k.first];
    members.push_back({{"student", inst.students[a.student].id},
                       {"mentor", inst.mentors[a.mentor].id},
                       {"subject", inst.subjects.names[a.subject]},
                       {"year", a.year},
                       {"slot", k.second},
                       {"hours", h}});
  }
  j["group_assignments"] = members;
  json groups = json::array();
  for (const auto& [g, h] : sol.groups) {
    const GroupSite& site = inst.sites[g.first];
    groups.push_back({{"mentor", inst.mentors[site.mentor].id},
                      {"subject", inst.subjects.names[site.subject]},
                      {"year", site.year},
                      {"slot", g.second},
                      {"hours", h}});
  }
  j["groups"] = groups;
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

inline Solution solution_from_json(const Instance& inst, const json& j) {
  auto student_index = [&](const std::string& id) {
    for (size_t i = 0; i < inst.students.size(); ++i)
      if (inst.students[i].id == id) return static_cast<int>(i);
    throw Error("unknown student id: " + id);
  };
  auto mentor_index = [&](const std::string& id) {
    for (size_t i = 0; i < inst.mentors.size(); ++i)
      if (inst.mentors[i].id == id) return static_cast<int>(i);
    throw Error("unknown mentor id: " + id);
  };
  auto activity_index = [&](const json& rec) {
    int si = student_index(rec.at("student").get<std::string>());
    int mi = mentor_index(rec.at("mentor").get<std::string>());
    int sk = inst.subjects.name_index(rec.at("subject").get<std::string>());
    int yr = rec.at("year").get<int>();
    for (int e : inst.activities_of_student[si]) {
      const Activity& a = inst.activities[e];
      if (a.mentor == mi && a.subject == sk && a.year == yr) return e;
    }
    throw Error("assignment references no feasible activity");
  };
  Solution sol;
  for (const auto& rec : j.at("pairs"))
    sol.pairs[activity_index(rec)] = rec.at("hours").get<int>();
  for (const auto& rec : j.at("group_assignments"))
    sol.members[{activity_index(rec), rec.at("slot").get<int>()}] =
        rec.at("hours").get<int>();
  for (const auto& rec : j.at("groups")) {
    int mi = mentor_index(rec.at("mentor").get<std::string>());
    int sk = inst.subjects.name_index(rec.at("subject").get<std::string>());
    int site = inst.site_of(mi, sk, rec.at("year").get<int>());
    if (site < 0) throw Error("group references no potential-group site");
    sol.groups[{site, rec.at("slot").get<int>()}] = rec.at("hours").get<int>();
  }
  return sol;
}

// --- measures and run logs -------------------------------------------------

inline json measures_to_json(const MeasureVector& m) {
  json j;
  auto vals = m.values();
  for (int k = 0; k < MeasureVector::kCount; ++k)
    j[MeasureVector::names()[k]] = vals[k];
  return j;
}

inline json run_record_to_json(const RunRecord& r) {
  json j;
  j["day"] = r.day;
  j["pool_students"] = r.pool_students;
  j["pool_mentors"] = r.pool_mentors;
  json matches = json::array();
  for (const MatchRecord& m : r.matches) {
    json rec = {{"student", m.student}, {"mentor", m.mentor},
                {"subject", m.subject}, {"year", m.year},
                {"hours", m.hours}};
    if (m.slot >= 0) rec["slot"] = m.slot;
    matches.push_back(rec);
  }
  j["matches"] = matches;
  json groups = json::array();
  for (const GroupRecord& g : r.groups)
    groups.push_back({{"mentor", g.mentor}, {"subject", g.subject},
                      {"year", g.year}, {"slot", g.slot}, {"hours", g.hours}});
  j["groups"] = groups;
  j["measures"] = measures_to_json(r.measures);
  j["objective"] = r.objective;
  j["status"] = to_string(r.status);
  j["nodes"] = r.nodes;
  return j;
}

// CSV with a fixed column order: measures first, then the config echo.
inline std::string measures_csv_header(
    const std::vector<std::string>& config_columns = {}) {
  std::string h;
  for (int k = 0; k < MeasureVector::kCount; ++k) {
    if (k) h += ',';
    h += MeasureVector::names()[k];
  }
  for (const auto& c : config_columns) {
    h += ',';
    h += c;
  }
  h += '\n';
  return h;
}

inline std::string format_csv_number(double v) {
  char buf[64];
  if (v == static_cast<long long>(v) && std::abs(v) < 1e15)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  else
    std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string measures_csv_row(
    const MeasureVector& m, const std::vector<std::string>& config_values = {}) {
  std::string row;
  auto vals = m.values();
  for (int k = 0; k < MeasureVector::kCount; ++k) {
    if (k) row += ',';
    row += format_csv_number(vals[k]);
  }
  for (const auto& c : config_values) {
    row += ',';
    row += c;
  }
  row += '\n';
  return row;
}

// Metadata block embedded in every output file.
inline json make_meta(uint64_t seed, const json& resolved_config) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["seed"] = seed;
  j["config"] = resolved_config;
  return j;
}

}  // namespace mm
