#include <doctest.h>

#include "helpers.hpp"
#include "mm/metrics.hpp"

using namespace mm;

TEST_CASE("empty solution gives an all-zero vector") {
  Instance inst = fixtures::group_triple();
  MeasureVector m = evaluate(inst, Solution{}, PolicyConfig{});
  for (double v : m.values()) CHECK(v == 0.0);
}

TEST_CASE("one pair") {
  Instance inst = fixtures::single_pair(/*hours=*/2, /*capacity=*/3);
  Solution sol;
  sol.pairs[0] = 2;
  MeasureVector m = evaluate(inst, sol, PolicyConfig{});
  CHECK(m.solo_time == 2);
  CHECK(m.solo_number == 1);
  CHECK(m.mentor_capacity_used == 2);
  CHECK(m.number_students == 1);
  CHECK(m.mentor_pairs == 1);
  CHECK(m.group_time == 0);
  CHECK(m.group_number == 0);
  CHECK(m.volume == 2.0);
  CHECK(m.number_pairs_groups == 1.0);
}

TEST_CASE("one two-member group") {
  Instance inst = fixtures::group_triple();
  Solution sol;
  sol.groups[{0, 1}] = 2;
  sol.members[{0, 1}] = 2;
  sol.members[{1, 1}] = 2;
  PolicyConfig cfg;  // wg = 0.7
  MeasureVector m = evaluate(inst, sol, cfg);
  CHECK(m.group_time == 4);
  CHECK(m.volume == doctest::Approx(2.8));
  CHECK(m.group_number == 1);
  CHECK(m.number_students == 2);
  CHECK(m.solo_time == 0);
  CHECK(m.mentor_pairs == 0);
  CHECK(m.mentor_capacity_used == 2);  // x_g counted once
  CHECK(m.number_pairs_groups == doctest::Approx(1.4));
  // identical students share a class: coherence 10
  CHECK(m.group_connection == 10.0);
}

TEST_CASE("infeasible solutions are refused") {
  Instance inst = fixtures::single_pair(/*hours=*/1, /*capacity=*/1);
  Solution sol;
  sol.pairs[0] = 3;
  CHECK_THROWS_AS(evaluate(inst, sol, PolicyConfig{}), Error);
}

TEST_CASE("preference and social measures discount group assignments") {
  Instance inst = fixtures::group_triple();
  PolicyConfig cfg;
  Solution grouped;
  grouped.groups[{0, 1}] = 2;
  grouped.members[{0, 1}] = 2;
  grouped.members[{1, 1}] = 2;
  MeasureVector mg = evaluate(inst, grouped, cfg);

  double full = 0;
  for (const Activity& e : inst.activities) {
    full += preference_weight(inst, e, cfg.preference_variant);
  }
  CHECK(mg.preference == doctest::Approx(cfg.group_discount * full));
}

TEST_CASE("summary statistics use median-exclusive quartiles") {
  MeasureSummary s = summarize({1, 2, 3, 4, 5, 6, 7});
  CHECK(s.median == 4);
  CHECK(s.q1 == 2);
  CHECK(s.q3 == 6);
  CHECK(s.min == 1);
  CHECK(s.max == 7);
  CHECK(s.mean == 4);

  MeasureSummary e = summarize({1, 2, 3, 4});
  CHECK(e.median == 2.5);
  CHECK(e.q1 == 1.5);
  CHECK(e.q3 == 3.5);

  MeasureSummary one = summarize({5});
  CHECK(one.median == 5);
  CHECK(one.q1 == 5);
  CHECK(one.q3 == 5);
}

TEST_CASE("aggregate summarizes each measure") {
  MeasureVector a, b;
  a.volume = 1;
  b.volume = 3;
  auto out = aggregate({a, b});
  CHECK(out[2].mean == 2);  // volume is the third column
  CHECK(out[2].min == 1);
  CHECK(out[2].max == 3);
}
