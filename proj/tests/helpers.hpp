#pragma once

// Small fixture builders shared by the test files.

#include <string>
#include <vector>

#include "mm/model.hpp"

namespace fixtures {

inline mm::SubjectTable table_one() {
  mm::SubjectTable t;
  t.names = {"Math"};
  t.years = {{7}};
  return t;
}

inline mm::SubjectTable table_two() {
  mm::SubjectTable t;
  t.names = {"Math", "Physics"};
  t.years = {{7}, {7}};
  return t;
}

inline mm::Student student(const std::string& id, int subject = 0, int hours = 2,
                           int grade = 3, bool group = false) {
  mm::Student s;
  s.id = id;
  s.year = 7;
  s.class_id = "c0";
  s.requests.push_back({subject, 7, hours, grade});
  s.group_willing = group;
  s.nh = 0.5;
  return s;
}

inline mm::Mentor mentor(const std::string& id, int capacity = 3,
                         bool group = false, int subject = 0) {
  mm::Mentor m;
  m.id = id;
  m.offers.push_back({subject, 1, 12});
  m.capacity = capacity;
  m.group_willing = group;
  m.dm = 1;
  return m;
}

// 1 student, 1 mentor, 1 subject. Defaults give w_e = 50 + 13 + 0.5 = 63.5
// when the mentor prefers the student's age bracket.
inline mm::Instance single_pair(int hours = 2, int capacity = 3) {
  mm::Student s = student("s0", 0, hours);
  mm::Mentor m = mentor("m0", capacity);
  m.ym = 1;  // student year 7 is in bracket 5-8
  m.dm = 0;
  return mm::build_instance({s}, {m}, table_one());
}

// 2 group-willing students + 1 group-willing mentor on one subject.
inline mm::Instance group_triple(int slots = 5) {
  mm::Student a = student("s0", 0, 3, 3, true);
  mm::Student b = student("s1", 0, 3, 3, true);
  mm::Mentor m = mentor("m0", 10, true);
  mm::InstanceConfig cfg;
  cfg.group_slots = slots;
  return mm::build_instance({a, b}, {m}, table_one(), cfg);
}

}  // namespace fixtures
