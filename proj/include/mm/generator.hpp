#pragma once

// Synthetic instance and timeline generation. All sampling goes through the
// local Rng wrapper so that (config, seed) fully determines the output,
// independent of standard-library distribution internals.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mm/model.hpp"

namespace mm {

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return (eng_() >> 11) * 0x1.0p-53;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  // index into `weights` proportional to weight
  int discrete(const std::vector<double>& weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }
  double normal(double mean, double sd) {
    // Box-Muller, single draw
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  int poisson(double lambda) {
    double l = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// The 15 subject labels and their default year availability.
inline SubjectTable default_subjects() {
  SubjectTable t;
  auto add = [&](const char* name, int lo, int hi) {
    t.names.push_back(name);
    std::vector<int> ys;
    for (int y = lo; y <= hi; ++y) ys.push_back(y);
    t.years.push_back(std::move(ys));
  };
  add("Math", 1, 12);
  add("Grammar", 1, 12);
  add("Literature", 1, 12);
  add("English", 1, 12);
  add("German", 5, 12);
  add("History", 5, 12);
  add("Physics", 7, 12);
  add("Chemistry", 7, 12);
  add("Biology", 7, 12);
  add("Geography", 5, 12);
  add("IT", 3, 12);
  add("Music", 1, 8);
  add("Art", 1, 8);
  add("Ethics", 1, 12);
  add("Science", 1, 6);
  return t;
}

struct GeneratorConfig {
  int num_students = 80;
  int num_mentors = 40;
  uint64_t seed = 1;

  // distribution tables (probabilities; see generate_* for semantics)
  std::vector<double> student_subject_count = {0.50, 0.30, 0.10, 0.10};  // 1..4
  std::vector<double> request_hours = {0.33, 0.33, 0.25, 0.09};          // 1..4
  double blank_grade_prob = 0.25;  // remaining mass uniform over grades 2..5
  double student_group_prob = 2.0 / 3.0;
  std::vector<double> sd_dist = {0.65, 0.20, 0.10, 0.05};  // SD 0..3
  double single_parent_prob = 0.183;
  std::vector<double> children_dist = {0.692, 0.239, 0.052, 0.017};  // 1..4
  double ws_mean = 0.786;  // Poisson, redrawn while > 3
  int year_lo = 4, year_hi = 12;
  double school_ratio = 0.67;

  double mentor_group_prob = 0.54;
  std::vector<double> capacity_range_dist = {0.40, 0.40, 0.20};  // 1-3, 4-6, 7-10
  std::vector<double> dm_dist = {0.50, 0.40, 0.10};              // DM 0, 1, 3
  std::vector<double> gpm_dist = {0.85, 0.05, 0.05, 0.05};       // N, W, M, S
  std::vector<double> ym_dist = {0.05, 0.20, 0.15, 0.60};        // 0, 1, 2, none

  double popularity_noise = 0.2;  // +- relative noise on subject popularity

  // dynamic mode
  int horizon = 300;
  double arrival_rate = 0.0;  // students per day; 0 = static instance
  double mentor_arrival_ratio = 0.5;
  double student_stay_mean = 14, student_stay_sd = 2, student_stay_min = 7;
  double mentor_stay_mean = 21, mentor_stay_sd = 2, mentor_stay_min = 14;
};

inline std::vector<Student> generate_students(int n, const GeneratorConfig& cfg,
                                              Rng& rng) {
  int num_schools = static_cast<int>(std::ceil(cfg.school_ratio * n));
  std::vector<Student> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Student s;
    s.id = "s" + std::to_string(i);
    s.year = rng.uniform_int(cfg.year_lo, cfg.year_hi);
    int school = rng.uniform_int(0, num_schools - 1);
    s.class_id = "school" + std::to_string(school) + "/y" + std::to_string(s.year);
    s.group_willing = rng.uniform() < cfg.student_group_prob;
    s.equipment = 0;  // all real participants chose 0; kept for real instances
    s.help = rng.uniform_int(0, 2);
    s.sd = rng.discrete(cfg.sd_dist);
    s.parents = rng.uniform() < cfg.single_parent_prob ? 1 : 2;
    s.children = 1 + rng.discrete(cfg.children_dist);
    s.nh = std::min(2.5, std::max(0.5, static_cast<double>(s.children) / s.parents));
    int ws = rng.poisson(cfg.ws_mean);
    while (ws > 3) ws = rng.poisson(cfg.ws_mean);
    s.ws = ws;
    s.cy = s.year == 12 ? 2 : (s.year == 11 ? 1 : 0);
    if (s.year == 11) {
      int r = rng.discrete({0.40, 0.40, 0.20});
      s.matriculation = r == 0 ? Matriculation::None
                        : r == 1 ? Matriculation::Base : Matriculation::Advanced;
    } else if (s.year == 12) {
      s.matriculation = rng.uniform() < 0.5 ? Matriculation::Base : Matriculation::Advanced;
    } else {
      s.matriculation = Matriculation::None;
    }
    // requests are filled by assign_subjects; record the count and hours here
    int nsub = 1 + rng.discrete(cfg.student_subject_count);
    for (int k = 0; k < nsub; ++k) {
      Request r;
      r.hours = 1 + rng.discrete(cfg.request_hours);
      if (rng.uniform() < cfg.blank_grade_prob) r.grade = 0;
      else r.grade = rng.uniform_int(2, 5);
      r.subject = -1;
      r.year = s.year;
      s.requests.push_back(r);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Mentor> generate_mentors(int n, const GeneratorConfig& cfg,
                                            const SubjectTable& subjects, Rng& rng) {
  std::vector<Mentor> out;
  out.reserve(n);
  const int nsubj = static_cast<int>(subjects.names.size());
  for (int i = 0; i < n; ++i) {
    Mentor m;
    m.id = "m" + std::to_string(i);
    m.group_willing = rng.uniform() < cfg.mentor_group_prob;
    int range = rng.discrete(cfg.capacity_range_dist);
    if (range == 0) m.capacity = rng.uniform_int(1, 3);
    else if (range == 1) m.capacity = rng.uniform_int(4, 6);
    else m.capacity = rng.uniform_int(7, 10);
    int dm = rng.discrete(cfg.dm_dist);
    m.dm = dm == 2 ? 3 : dm;
    int gpm = rng.discrete(cfg.gpm_dist);
    m.gpm = static_cast<GradePref>(gpm);
    int ym = rng.discrete(cfg.ym_dist);
    m.ym = ym == 3 ? -1 : ym;
    // number of offered subjects depends on the capacity
    int max_subjects = m.capacity < 4 ? 3 : (m.capacity <= 6 ? 4 : 5);
    int ns = rng.uniform_int(1, max_subjects);
    std::vector<int> pool(nsubj);
    for (int k = 0; k < nsubj; ++k) pool[k] = k;
    for (int k = 0; k < ns; ++k) {
      int pick = rng.uniform_int(k, nsubj - 1);
      std::swap(pool[k], pool[pick]);
      m.offers.push_back({pool[k], 1, 12});  // all years in the subject
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Fills student request subjects from the mentor-offer-derived popularity,
// renormalized per year over the available subjects, with per-instance noise.
inline void assign_subjects(std::vector<Student>& students,
                            const std::vector<Mentor>& mentors,
                            const SubjectTable& subjects,
                            const GeneratorConfig& cfg, Rng& rng) {
  const int nsubj = static_cast<int>(subjects.names.size());
  std::vector<double> popularity(nsubj, 0.0);
  for (const auto& m : mentors)
    for (const auto& o : m.offers) popularity[o.subject] += 1.0;
  bool any = false;
  for (double p : popularity) any = any || p > 0;
  if (!any) popularity.assign(nsubj, 1.0);
  double a = cfg.popularity_noise;
  for (auto& p : popularity) p = (p + 0.1) * (1 - a + 2 * a * rng.uniform());

  for (auto& s : students) {
    std::vector<double> weights(nsubj, 0.0);
    int avail = 0;
    for (int k = 0; k < nsubj; ++k)
      if (subjects.available(k, s.year)) {
        weights[k] = popularity[k];
        ++avail;
      }
    if (avail == 0) throw Error("no subjects available for year " + std::to_string(s.year));
    if (static_cast<int>(s.requests.size()) > avail)
      s.requests.resize(avail);
    for (auto& r : s.requests) {
      int pick = rng.discrete(weights);
      r.subject = pick;
      weights[pick] = 0.0;  // without replacement within a student
    }
  }
}

// Registration and departure clocks for the dynamic protocol.
inline void generate_timeline(std::vector<Student>& students,
                              std::vector<Mentor>& mentors,
                              const GeneratorConfig& cfg, Rng& rng) {
  for (auto& s : students) {
    s.registration_day = rng.uniform_int(0, cfg.horizon - 1);
    int stay = std::max<int>(static_cast<int>(cfg.student_stay_min),
                             static_cast<int>(std::llround(
                                 rng.normal(cfg.student_stay_mean, cfg.student_stay_sd))));
    s.departure_day = s.registration_day + stay;
  }
  for (auto& m : mentors) {
    m.registration_day = rng.uniform_int(0, cfg.horizon - 1);
    int stay = std::max<int>(static_cast<int>(cfg.mentor_stay_min),
                             static_cast<int>(std::llround(
                                 rng.normal(cfg.mentor_stay_mean, cfg.mentor_stay_sd))));
    m.departure_day = m.registration_day + stay;
  }
}

// Full instance generation: students, mentors, subject assignment and
// (in dynamic mode) the arrival/departure timeline.
inline Instance generate_instance(const GeneratorConfig& cfg,
                                  InstanceConfig icfg = {}) {
  Rng rng(cfg.seed);
  SubjectTable subjects = default_subjects();
  int ns = cfg.num_students;
  int nm = cfg.num_mentors;
  if (cfg.arrival_rate > 0) {
    ns = static_cast<int>(std::llround(cfg.arrival_rate * cfg.horizon));
    nm = static_cast<int>(std::llround(cfg.arrival_rate * cfg.mentor_arrival_ratio * cfg.horizon));
  }
  std::vector<Mentor> mentors = generate_mentors(nm, cfg, subjects, rng);
  std::vector<Student> students = generate_students(ns, cfg, rng);
  assign_subjects(students, mentors, subjects, cfg, rng);
  if (cfg.arrival_rate > 0) generate_timeline(students, mentors, cfg, rng);
  return build_instance(std::move(students), std::move(mentors), std::move(subjects), icfg);
}

}  // namespace mm
