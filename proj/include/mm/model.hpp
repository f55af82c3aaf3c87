#pragma once

// Core domain types for the mentoring allocation engine: students, mentors,
// subjects, the derived activity set and potential study groups, plus
// solution representation and independent feasibility validation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mm {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Matriculation { None, Base, Advanced, NotApplicable };

enum class GradePref { None, Weak, Medium, Strong };

// A subject request of a student. `subject` indexes the subject-name table,
// `year` is the school year variant of the subject, `hours` is the weekly
// demand (1..4) and `grade` the last-semester grade (0 = left blank, else 2..5).
struct Request {
  int subject = -1;
  int year = 0;
  int hours = 1;
  int grade = 0;
};

struct Student {
  std::string id;
  int year = 0;  // 1..12
  std::string class_id;
  std::vector<Request> requests;  // order defines rank 1..5
  bool group_willing = false;
  int equipment = 0;  // 0 or 1
  int help = 0;       // 0..2
  int sd = 0;         // social disadvantage 0..3
  double nh = 0.5;    // children per parent, half-integer in [0.5, 2.5]
  int ws = 0;         // weak-student score 0..3
  int cy = 0;         // critical year: 2 for year 12, 1 for year 11, else 0
  Matriculation matriculation = Matriculation::None;
  int parents = 0;   // raw household data behind nh (0 = not recorded)
  int children = 0;
  int registration_day = 0;
  int departure_day = 1;
};

// A subject offer of a mentor; covers years [year_lo, year_hi].
struct Offer {
  int subject = -1;
  int year_lo = 1;
  int year_hi = 12;
};

struct Mentor {
  std::string id;
  std::vector<Offer> offers;  // order defines rank 1..5
  int capacity = 1;           // total weekly hours Q
  bool group_willing = false;
  int ym = -1;  // preferred age bracket: 0 = years 1-4, 1 = 5-8, 2 = 9-12, -1 = none
  int dm = 1;   // disadvantage willingness: 0, 1 or 3
  GradePref gpm = GradePref::None;
  int registration_day = 0;
  int departure_day = 1;
};

// Grade-preference constants derived from GPM.
inline int grade_flag(GradePref g) { return g == GradePref::None ? 0 : 1; }

inline double weak_willingness(GradePref g) {
  switch (g) {
    case GradePref::None: return 1.0;
    case GradePref::Weak: return 3.0;
    default: return 0.0;  // Medium, Strong
  }
}

inline double preferred_grade(GradePref g) {
  switch (g) {
    case GradePref::None: return 0.0;
    case GradePref::Weak: return 1.5;
    case GradePref::Medium: return 3.0;
    default: return 4.5;  // Strong
  }
}

// Availability table: which (subject name, year) combinations exist.
struct SubjectTable {
  std::vector<std::string> names;
  std::vector<std::vector<int>> years;  // per name, sorted list of years

  int name_index(const std::string& n) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }
  bool available(int subject, int year) const {
    if (subject < 0 || subject >= static_cast<int>(names.size())) return false;
    const auto& ys = years[subject];
    return std::binary_search(ys.begin(), ys.end(), year);
  }
};

// A feasible (student, mentor, subject-year) triple. Positions into the
// student's request list and the mentor's offer list are kept for rank lookup.
struct Activity {
  int student = -1;
  int mentor = -1;
  int subject = -1;
  int year = 0;
  int request_pos = -1;
  int offer_pos = -1;
};

// All potential groups of one (mentor, subject-year): `slots` slots of
// capacity `capacity` each. A single potential group is a (site, slot) pair.
struct GroupSite {
  int mentor = -1;
  int subject = -1;
  int year = 0;
  int capacity = 5;
  int slots = 5;
  std::vector<int> member_activities;  // group-eligible activities, ascending
};

// Pairwise similarity metrics for two group-willing students requesting the
// same subject.
struct StudentPairMetrics {
  int same_class = 0;       // sc
  int equipment_diff = 0;   // de
  int request_diff = 0;     // dr^k
  int grade_diff = 0;       // dg^k
};

struct InstanceConfig {
  int group_slots = 5;       // T
  int group_capacity = 5;    // c_j^k default
};

class Instance {
 public:
  SubjectTable subjects;
  std::vector<Student> students;
  std::vector<Mentor> mentors;
  InstanceConfig config;

  std::vector<Activity> activities;
  std::vector<GroupSite> sites;

  // activity index lists
  std::vector<std::vector<int>> activities_of_student;  // per student
  std::vector<std::vector<int>> activities_of_mentor;   // per mentor

  bool group_eligible(int activity) const {
    const Activity& e = activities[activity];
    return students[e.student].group_willing && mentors[e.mentor].group_willing;
  }

  // Site index for (mentor, subject, year), -1 if absent.
  int site_of(int mentor, int subject, int year) const {
    auto it = site_index_.find(key(mentor, subject, year));
    return it == site_index_.end() ? -1 : it->second;
  }

  const Request& request_of(const Activity& e) const {
    return students[e.student].requests[e.request_pos];
  }

  StudentPairMetrics pair_metrics(int i, int j, int subject, int year) const;

  void add_site_index(int mentor, int subject, int year, int idx) {
    site_index_[key(mentor, subject, year)] = idx;
  }

 private:
  static int64_t key(int mentor, int subject, int year) {
    return (static_cast<int64_t>(mentor) << 24) |
           (static_cast<int64_t>(subject) << 8) | year;
  }
  std::map<int64_t, int> site_index_;
};

inline StudentPairMetrics Instance::pair_metrics(int i, int j, int subject,
                                                 int year) const {
  const Student& a = students[i];
  const Student& b = students[j];
  const Request* ra = nullptr;
  const Request* rb = nullptr;
  for (const auto& r : a.requests)
    if (r.subject == subject && r.year == year) ra = &r;
  for (const auto& r : b.requests)
    if (r.subject == subject && r.year == year) rb = &r;
  if (!ra || !rb) throw Error("pair_metrics: students do not share the subject");
  StudentPairMetrics m;
  m.same_class = (a.class_id == b.class_id) ? 1 : 0;
  m.equipment_diff = std::abs(a.equipment - b.equipment);
  m.request_diff = std::abs(ra->hours - rb->hours);
  m.grade_diff = std::abs(ra->grade - rb->grade);
  return m;
}

// ---------------------------------------------------------------------------
// Instance construction

inline Instance build_instance(std::vector<Student> students,
                               std::vector<Mentor> mentors,
                               SubjectTable subjects,
                               InstanceConfig config = {}) {
  Instance inst;
  inst.subjects = std::move(subjects);
  inst.students = std::move(students);
  inst.mentors = std::move(mentors);
  inst.config = config;

  std::set<std::string> seen_ids;
  for (const auto& s : inst.students) {
    if (!seen_ids.insert(s.id).second) throw Error("duplicate student id: " + s.id);
    if (s.requests.empty() || s.requests.size() > 5)
      throw Error("student " + s.id + ": 1..5 requests required");
    std::set<std::pair<int, int>> subj;
    for (const auto& r : s.requests) {
      if (!inst.subjects.available(r.subject, r.year))
        throw Error("student " + s.id + ": request references unavailable subject-year");
      if (!subj.insert({r.subject, r.year}).second)
        throw Error("student " + s.id + ": duplicate subject in requests");
      if (r.hours < 1 || r.hours > 4) throw Error("student " + s.id + ": hours out of range");
    }
    int expected_cy = s.year == 12 ? 2 : (s.year == 11 ? 1 : 0);
    if (s.cy != expected_cy) throw Error("student " + s.id + ": CY inconsistent with year");
  }
  std::set<std::string> seen_mentor_ids;
  for (const auto& m : inst.mentors) {
    if (!seen_mentor_ids.insert(m.id).second) throw Error("duplicate mentor id: " + m.id);
    if (m.capacity < 1) throw Error("mentor " + m.id + ": capacity must be >= 1");
    std::set<int> subj;
    for (const auto& o : m.offers) {
      if (o.subject < 0 || o.subject >= static_cast<int>(inst.subjects.names.size()))
        throw Error("mentor " + m.id + ": offer references unknown subject");
      if (!subj.insert(o.subject).second)
        throw Error("mentor " + m.id + ": duplicate subject in offers");
    }
  }

  // Derive the activity set E: all mutually acceptable triples.
  inst.activities_of_student.resize(inst.students.size());
  inst.activities_of_mentor.resize(inst.mentors.size());
  for (size_t si = 0; si < inst.students.size(); ++si) {
    const Student& s = inst.students[si];
    for (size_t rp = 0; rp < s.requests.size(); ++rp) {
      const Request& r = s.requests[rp];
      for (size_t mj = 0; mj < inst.mentors.size(); ++mj) {
        const Mentor& m = inst.mentors[mj];
        for (size_t op = 0; op < m.offers.size(); ++op) {
          const Offer& o = m.offers[op];
          if (o.subject != r.subject) continue;
          if (r.year < o.year_lo || r.year > o.year_hi) continue;
          Activity e;
          e.student = static_cast<int>(si);
          e.mentor = static_cast<int>(mj);
          e.subject = r.subject;
          e.year = r.year;
          e.request_pos = static_cast<int>(rp);
          e.offer_pos = static_cast<int>(op);
          int idx = static_cast<int>(inst.activities.size());
          inst.activities.push_back(e);
          inst.activities_of_student[si].push_back(idx);
          inst.activities_of_mentor[mj].push_back(idx);
          break;  // offers hold distinct subjects, at most one can match
        }
      }
    }
  }

  // Potential groups: for every group-willing mentor and offered subject-year
  // with at least two group-willing requesting students.
  std::map<std::tuple<int, int, int>, std::vector<int>> site_members;
  for (size_t ei = 0; ei < inst.activities.size(); ++ei) {
    if (!inst.group_eligible(static_cast<int>(ei))) continue;
    const Activity& e = inst.activities[ei];
    site_members[{e.mentor, e.subject, e.year}].push_back(static_cast<int>(ei));
  }
  for (auto& [k, members] : site_members) {
    if (members.size() < 2) continue;
    GroupSite site;
    site.mentor = std::get<0>(k);
    site.subject = std::get<1>(k);
    site.year = std::get<2>(k);
    site.capacity = config.group_capacity;
    site.slots = config.group_slots;
    site.member_activities = members;
    int idx = static_cast<int>(inst.sites.size());
    inst.sites.push_back(std::move(site));
    inst.add_site_index(std::get<0>(k), std::get<1>(k), std::get<2>(k), idx);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Solutions

// Realised pairs, group memberships and groups. Keys reference the instance's
// activity / site indices; map ordering keeps serialization deterministic.
struct Solution {
  std::map<int, int> pairs;                       // activity -> x_e in {1,2,3}
  std::map<std::pair<int, int>, int> members;     // (activity, slot) -> x_e^t
  std::map<std::pair<int, int>, int> groups;      // (site, slot) -> x_g in {2,3}

  bool empty() const { return pairs.empty() && groups.empty(); }
};

struct ValidationReport {
  struct Violation {
    std::string code;
    std::string detail;
  };
  std::vector<Violation> violations;   // constraint violations
  std::vector<std::string> structural; // dangling references etc.

  bool feasible() const { return violations.empty() && structural.empty(); }
  void violation(std::string code, std::string detail) {
    violations.push_back({std::move(code), std::move(detail)});
  }
};

// Checks the six feasibility constraints independently of any solver.
inline ValidationReport validate_solution(const Instance& inst,
                                          const Solution& sol) {
  ValidationReport rep;
  auto bad_activity = [&](int e) {
    return e < 0 || e >= static_cast<int>(inst.activities.size());
  };
  auto bad_group = [&](const std::pair<int, int>& g) {
    if (g.first < 0 || g.first >= static_cast<int>(inst.sites.size())) return true;
    return g.second < 1 || g.second > inst.sites[g.first].slots;
  };

  for (const auto& [e, h] : sol.pairs)
    if (bad_activity(e))
      rep.structural.push_back("pair references unknown activity " + std::to_string(e));
  for (const auto& [k, h] : sol.members)
    if (bad_activity(k.first))
      rep.structural.push_back("member references unknown activity " +
                               std::to_string(k.first));
  for (const auto& [g, h] : sol.groups)
    if (bad_group(g))
      rep.structural.push_back("group references unknown site/slot");
  if (!rep.structural.empty()) return rep;

  // pair hours: 1 <= x_e <= min(3, q)
  for (const auto& [e, h] : sol.pairs) {
    const Request& r = inst.request_of(inst.activities[e]);
    if (h < 1 || h > 3 || h > r.hours)
      rep.violation("pair_hours", "activity " + std::to_string(e) + ": x_e=" +
                                      std::to_string(h) + " exceeds min(3,q=" +
                                      std::to_string(r.hours) + ")");
  }

  // group willingness and group hours range
  for (const auto& [g, h] : sol.groups) {
    const GroupSite& site = inst.sites[g.first];
    if (!inst.mentors[site.mentor].group_willing)
      rep.violation("group_willingness",
                    "mentor " + inst.mentors[site.mentor].id + " not group-willing");
    if (h < 2 || h > 3)
      rep.violation("group_hours", "group hours must be 2 or 3, got " + std::to_string(h));
  }

  // membership: member slot realised, student group-willing, hour caps
  std::map<std::pair<int, int>, int> group_size;
  for (const auto& [k, h] : sol.members) {
    auto [e, t] = k;
    const Activity& act = inst.activities[e];
    int site = inst.site_of(act.mentor, act.subject, act.year);
    if (site < 0) {
      rep.violation("group_willingness",
                    "member activity " + std::to_string(e) + " has no potential group");
      continue;
    }
    if (!inst.students[act.student].group_willing)
      rep.violation("group_willingness",
                    "student " + inst.students[act.student].id + " not group-willing");
    auto git = sol.groups.find({site, t});
    if (git == sol.groups.end()) {
      rep.violation("group_realisation",
                    "member assigned to unrealised group slot " + std::to_string(t));
      continue;
    }
    group_size[{site, t}]++;
    const Request& r = inst.request_of(act);
    if (h < 0 || h > r.hours || h > git->second)
      rep.violation("member_hours",
                    "activity " + std::to_string(e) + ": x_e^t=" + std::to_string(h) +
                        " exceeds min(q, x_g)");
  }

  // group size 2..c
  for (const auto& [g, h] : sol.groups) {
    int n = 0;
    auto it = group_size.find(g);
    if (it != group_size.end()) n = it->second;
    const GroupSite& site = inst.sites[g.first];
    if (n < 2 || n > site.capacity)
      rep.violation("group_size", "group at site " + std::to_string(g.first) +
                                      " slot " + std::to_string(g.second) + " has " +
                                      std::to_string(n) + " members");
  }

  // mentor capacity: sum of pair hours + group hours (once per group) <= Q
  std::vector<int> used(inst.mentors.size(), 0);
  for (const auto& [e, h] : sol.pairs) used[inst.activities[e].mentor] += h;
  for (const auto& [g, h] : sol.groups) used[inst.sites[g.first].mentor] += h;
  for (size_t j = 0; j < inst.mentors.size(); ++j)
    if (used[j] > inst.mentors[j].capacity)
      rep.violation("mentor_capacity",
                    "mentor " + inst.mentors[j].id + ": " + std::to_string(used[j]) +
                        " > Q=" + std::to_string(inst.mentors[j].capacity));

  // one pair-or-group assignment per (student, subject)
  std::map<std::tuple<int, int, int>, int> per_subject;
  for (const auto& [e, h] : sol.pairs) {
    const Activity& a = inst.activities[e];
    per_subject[{a.student, a.subject, a.year}]++;
  }
  for (const auto& [k, h] : sol.members) {
    const Activity& a = inst.activities[k.first];
    per_subject[{a.student, a.subject, a.year}]++;
  }
  for (const auto& [k, n] : per_subject)
    if (n > 1)
      rep.violation("one_mentor_per_subject",
                    "student " + inst.students[std::get<0>(k)].id +
                        " assigned multiple times in one subject");
  return rep;
}

// Total discounted mentoring hours of a solution.
inline double solution_volume(const Instance&, const Solution& sol, double wg) {
  double v = 0;
  for (const auto& [e, h] : sol.pairs) v += h;
  for (const auto& [k, h] : sol.members) v += wg * h;
  return v;
}

}  // namespace mm
