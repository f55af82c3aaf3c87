#pragma once

// Objective coefficient computation: every weight of the allocation objective
// is a pure function of instance data and the policy configuration.

#include <cmath>
#include <cstdlib>

#include "mm/model.hpp"

namespace mm {

enum class PreferenceVariant { A, B, C };

enum class WaitingScope { AllSubjects, FirstSubjectOnly };

struct PolicyConfig {
  double group_discount = 0.7;   // w^g, in (0, 1]
  double volume_weight = 50.0;   // w_e^w
  PreferenceVariant preference_variant = PreferenceVariant::A;
  double mentor_pair_penalty = 5.0;  // w^m
  double waiting_weight = 0.0;       // WT, >= 0
  WaitingScope waiting_scope = WaitingScope::AllSubjects;
  int group_slots = 5;      // T
  int group_capacity = 5;   // c_j^k default
  int big_m = 5;            // bound on subjects per student
};

inline double volume_weight(const PolicyConfig& cfg) { return cfg.volume_weight; }

// Age bracket index: 0 for years 1-4, 1 for 5-8, 2 for 9-12.
inline int year_bracket(int year) { return year <= 4 ? 0 : (year <= 8 ? 1 : 2); }

inline double preference_weight(int rank_student, int rank_mentor, bool age_pref,
                                PreferenceVariant variant) {
  double ws = 6.0 - rank_student;
  double wm = 6.0 - rank_mentor;
  switch (variant) {
    case PreferenceVariant::A: break;
    case PreferenceVariant::B: ws *= ws; break;
    case PreferenceVariant::C: ws *= ws; wm *= wm; break;
  }
  return ws + wm + (age_pref ? 3.0 : 0.0);
}

inline double preference_weight(const Instance& inst, const Activity& e,
                                PreferenceVariant variant) {
  const Student& s = inst.students[e.student];
  const Mentor& m = inst.mentors[e.mentor];
  bool age_pref = m.ym >= 0 && m.ym == year_bracket(s.year);
  return preference_weight(e.request_pos + 1, e.offer_pos + 1, age_pref, variant);
}

// Combined social priority weight of an activity. The grade term can go
// negative for badly mismatched grade preferences; no clamping.
inline double social_weight(const Student& s, const Mentor& m, int grade) {
  double w = 3.0 * s.sd * m.dm;
  w += s.ws * weak_willingness(m.gpm);
  w += (1.5 - std::abs(grade - preferred_grade(m.gpm))) * grade_flag(m.gpm);
  w += 2.0 * s.cy;
  w += s.nh + s.help;
  return w;
}

inline double social_weight(const Instance& inst, const Activity& e) {
  return social_weight(inst.students[e.student], inst.mentors[e.mentor],
                       inst.request_of(e).grade);
}

// Waiting-time priority: WT * ((t^r - t^0_i) + (t^r - t^0_j)). Under the
// first-subject-only scope only the student's highest-ranked remaining
// request carries the weight.
inline double waiting_weight(int run_day, const Instance& inst, const Activity& e,
                             const PolicyConfig& cfg) {
  if (cfg.waiting_weight == 0.0) return 0.0;
  const Student& s = inst.students[e.student];
  const Mentor& m = inst.mentors[e.mentor];
  if (run_day < s.registration_day || run_day < m.registration_day)
    throw Error("waiting_weight: run day precedes a registration day");
  if (cfg.waiting_scope == WaitingScope::FirstSubjectOnly && e.request_pos != 0)
    return 0.0;
  return cfg.waiting_weight *
         ((run_day - s.registration_day) + (run_day - m.registration_day));
}

// Final per-activity weight w_e. `run_day` < 0 means static mode (no waiting
// term). The group variant is w_e * w^g.
inline double activity_weight(const Instance& inst, const Activity& e,
                              const PolicyConfig& cfg, int run_day = -1) {
  double w = volume_weight(cfg);
  w += preference_weight(inst, e, cfg.preference_variant);
  w += social_weight(inst, e);
  if (run_day >= 0) w += waiting_weight(run_day, inst, e, cfg);
  return w;
}

// Group coherence coefficient for a student pair on one subject; attached to
// the same-group indicator in the objective.
inline double coherence_coefficient(const Instance& inst, int i, int j,
                                    int subject, int year) {
  StudentPairMetrics m = inst.pair_metrics(i, j, subject, year);
  return 10.0 * m.same_class - 2.0 * m.equipment_diff - m.grade_diff -
         m.request_diff;
}

}  // namespace mm
