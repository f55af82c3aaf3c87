#include <doctest.h>

#include <map>
#include <string>

#include "helpers.hpp"
#include "mm/milp.hpp"
#include "mm/metrics.hpp"
#include "mm/solver.hpp"
#include "mm/verify.hpp"

using namespace mm;

namespace {

std::map<VarTag, int> tag_counts(const MilpModel& m) {
  std::map<VarTag, int> c;
  for (const auto& v : m.vars) c[v.tag]++;
  return c;
}

bool has_constraint(const MilpModel& m, const std::string& tag) {
  for (const auto& c : m.cons)
    if (c.tag == tag) return true;
  return false;
}

}  // namespace

TEST_CASE("single-pair model has the five core variables") {
  Instance inst = fixtures::single_pair();
  PolicyConfig cfg;
  MilpModel m = build_milp(inst, cfg);
  auto c = tag_counts(m);
  CHECK(c[VarTag::PairHours] == 1);
  CHECK(c[VarTag::PairUsed] == 1);
  CHECK(c[VarTag::SubjectMatched] == 1);
  CHECK(c[VarTag::StudentMatched] == 1);
  CHECK(c[VarTag::MentorPair] == 1);
  CHECK(m.vars.size() == 5);

  SolveResult sr = solve(m);
  REQUIRE(sr.status == SolveStatus::Optimal);
  Solution sol = extract_solution(m, sr.assignment, inst);
  REQUIRE(sol.pairs.size() == 1);
  // x_e = min(3, q=2, Q=3) = 2
  CHECK(sol.pairs.begin()->second == 2);
}

TEST_CASE("group variable counts for a two-student site") {
  Instance inst = fixtures::group_triple();
  PolicyConfig cfg;
  MilpModel m = build_milp(inst, cfg);
  auto c = tag_counts(m);
  CHECK(c[VarTag::GroupUsed] == 5);
  CHECK(c[VarTag::GroupHours] == 5);
  CHECK(c[VarTag::MemberUsed] == 10);   // 2 activities x 5 slots
  CHECK(c[VarTag::MemberHours] == 10);
  CHECK(c[VarTag::SameGroup] == 5);     // one student pair x 5 slots
}

TEST_CASE("empty instance gives an empty model") {
  Student s = fixtures::student("s0", 0);
  Mentor m = fixtures::mentor("m0", 3, false, 1);
  Instance inst = build_instance({s}, {m}, fixtures::table_two());
  REQUIRE(inst.activities.empty());
  MilpModel model = build_milp(inst, PolicyConfig{});
  // beta/gamma pin the student to unmatched; no activity variables exist
  for (const auto& v : model.vars)
    CHECK((v.tag == VarTag::SubjectMatched || v.tag == VarTag::StudentMatched));
  SolveResult sr = solve(model);
  CHECK(sr.status == SolveStatus::Optimal);
  CHECK(sr.objective == 0.0);
}

TEST_CASE("constraint families are all present") {
  Instance inst = fixtures::group_triple();
  MilpModel m = build_milp(inst, PolicyConfig{});
  for (const char* tag :
       {"pair_coupling_lo", "pair_coupling_hi", "group_coupling_lo",
        "group_coupling_hi", "group_fill_lo", "group_fill_hi",
        "activity_single_use", "one_mentor_per_subject", "subject_indicator",
        "student_indicator_lo", "student_indicator_hi", "mentor_capacity",
        "pair_demand", "member_demand", "member_group_hours",
        "same_group_lo", "same_group_hi_a", "same_group_hi_b",
        "mentor_pair_lo", "mentor_pair_hi", "slot_symmetry"}) {
    CAPTURE(tag);
    CHECK(has_constraint(m, tag));
  }
}

TEST_CASE("membership-hours coupling is present") {
  // without x_e^t <= 3 y_e^t the objective could collect group hours for
  // students not assigned to the group
  Instance inst = fixtures::group_triple();
  MilpModel m = build_milp(inst, PolicyConfig{});
  CHECK(has_constraint(m, "member_coupling"));
  int count = 0;
  for (const auto& c : m.cons)
    if (c.tag == "member_coupling") ++count;
  CHECK(count == 10);  // one per (activity, slot)
}

TEST_CASE("MPS export") {
  Instance inst = fixtures::group_triple();
  MilpModel m = build_milp(inst, PolicyConfig{});

  SUBCASE("deterministic") {
    CHECK(export_mps(m) == export_mps(build_milp(inst, PolicyConfig{})));
  }
  SUBCASE("holds the expected sections") {
    std::string text = export_mps(m);
    for (const char* needle :
         {"NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA", "MARKER",
          "INTORG", "INTEND"})
      CHECK(text.find(needle) != std::string::npos);
  }
  SUBCASE("empty model still exports") {
    Instance none = build_instance({}, {}, fixtures::table_one());
    MilpModel m0 = build_milp(none, PolicyConfig{});
    std::string a = export_mps(m0), b = export_mps(m0);
    CHECK(a == b);
    CHECK(a.find("ENDATA") != std::string::npos);
  }
}

TEST_CASE("extract_solution") {
  Instance inst = fixtures::group_triple();
  MilpModel m = build_milp(inst, PolicyConfig{});

  SUBCASE("all-zero assignment is the empty solution") {
    std::vector<double> zero(m.vars.size(), 0.0);
    Solution sol = extract_solution(m, zero, inst);
    CHECK(sol.empty());
  }
  SUBCASE("membership without a realised group is rejected") {
    std::vector<double> a(m.vars.size(), 0.0);
    a[m.ym_of.at({0, 1})] = 1.0;
    CHECK_THROWS_WITH_AS(extract_solution(m, a, inst),
                         doctest::Contains("group_fill"), Error);
  }
  SUBCASE("fractional values are rejected") {
    std::vector<double> a(m.vars.size(), 0.0);
    a[m.x_of_activity[0]] = 1.5;
    a[m.y_of_activity[0]] = 1.0;
    CHECK_THROWS_AS(extract_solution(m, a, inst), Error);
  }
}

TEST_CASE("model objective matches the recomputed solution objective") {
  for (uint64_t seed = 40; seed < 60; ++seed) {
    Rng rng(seed);
    Instance inst = tiny_instance(rng);
    PolicyConfig cfg = oracle_policy(static_cast<int>(seed));
    cfg.group_slots = inst.config.group_slots;
    cfg.group_capacity = inst.config.group_capacity;
    MilpModel m = build_milp(inst, cfg);
    SolveResult sr = solve(m);
    REQUIRE(sr.status == SolveStatus::Optimal);
    Solution sol = extract_solution(m, sr.assignment, inst);
    CHECK(objective_value(inst, sol, cfg) ==
          doctest::Approx(sr.objective).epsilon(1e-9));
  }
}

TEST_CASE("model statistics are emitted as JSON") {
  Instance inst = fixtures::group_triple();
  MilpModel m = build_milp(inst, PolicyConfig{});
  std::string stats = model_stats_json(m);
  CHECK(stats.find("variables") != std::string::npos);
  CHECK(stats.find("constraints") != std::string::npos);
}
