#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "mm/brute_force.hpp"
#include "mm/lp.hpp"
#include "mm/milp.hpp"
#include "mm/verify.hpp"

using namespace mm;

namespace {

using Cols = std::vector<std::vector<std::pair<int, double>>>;

}  // namespace

TEST_CASE("two-variable LP with a coupling row") {
  // max 3x + 2y  s.t.  x + y <= 4,  x,y in [0,3]  ->  x=3, y=1, obj 11
  Cols cols = {{{0, 1.0}}, {{0, 1.0}}};
  BoundedLp lp(2, {3, 2}, cols, {-100}, {4}, {0, 0}, {3, 3});
  LpResult r = lp.solve();
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(11.0));
  auto x = lp.primal();
  CHECK(x[0] == doctest::Approx(3.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("equality row") {
  // max x - y  s.t.  x + y = 2,  x,y in [0,5]  ->  x=2, y=0
  Cols cols = {{{0, 1.0}}, {{0, 1.0}}};
  BoundedLp lp(2, {1, -1}, cols, {2}, {2}, {0, 0}, {5, 5});
  LpResult r = lp.solve();
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("infeasible row range") {
  // x >= 5 with x <= 3 is infeasible
  Cols cols = {{{0, 1.0}}};
  BoundedLp lp(1, {1}, cols, {5}, {100}, {0}, {3});
  CHECK(lp.solve().status == LpResult::Status::Infeasible);
}

TEST_CASE("fractional vertex") {
  // max x + y  s.t.  2x + y <= 3,  x + 2y <= 3,  x,y in [0,2]  ->  x=y=1
  Cols cols = {{{0, 2.0}, {1, 1.0}}, {{0, 1.0}, {1, 2.0}}};
  BoundedLp lp(2, {1, 1}, cols, {-100, -100}, {3, 3}, {0, 0}, {2, 2});
  LpResult r = lp.solve();
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  auto x = lp.primal();
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("negative objective entries rest at the lower bound") {
  Cols cols = {{{0, 1.0}}, {{0, 1.0}}};
  BoundedLp lp(2, {-1, 2}, cols, {-100}, {10}, {0, 1}, {5, 4});
  LpResult r = lp.solve();
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(8.0));  // x=0, y=4
}

TEST_CASE("bound changes after a solve are honored") {
  Cols cols = {{{0, 1.0}}, {{0, 1.0}}};
  BoundedLp lp(2, {3, 2}, cols, {-100}, {4}, {0, 0}, {3, 3});
  REQUIRE(lp.solve().status == LpResult::Status::Optimal);
  lp.set_bounds({0, 2}, {1, 3});  // x <= 1, y >= 2
  LpResult r = lp.solve();
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.objective == doctest::Approx(9.0));  // x=1, y=3
  lp.reset_bounds();
  CHECK(lp.solve().objective == doctest::Approx(11.0));
}

TEST_CASE("lp_bound dominates the integral optimum on tiny models") {
  for (uint64_t seed = 900; seed < 930; ++seed) {
    Rng rng(seed);
    Instance inst = tiny_instance(rng);
    PolicyConfig cfg = oracle_policy(static_cast<int>(seed % 9));
    cfg.group_slots = inst.config.group_slots;
    cfg.group_capacity = inst.config.group_capacity;
    MilpModel model = build_milp(inst, cfg);
    BruteForceResult bf = brute_force(inst, cfg);
    auto bound = lp_bound(model);
    REQUIRE(bound.has_value());
    CHECK(*bound >= bf.objective - 1e-6);
  }
}

TEST_CASE("lp_bound with a y_e fixed to zero forces x_e to zero") {
  Instance inst = fixtures::single_pair(/*hours=*/3, /*capacity=*/3);
  PolicyConfig cfg;
  MilpModel model = build_milp(inst, cfg);
  int ye = model.y_of_activity.at(0);
  auto bound = lp_bound(model, {{ye, 0.0}});
  REQUIRE(bound.has_value());
  // with the pair disabled only zero assignments remain
  CHECK(*bound == doctest::Approx(0.0));
}

TEST_CASE("lp_bound with every variable fixed equals that point's objective") {
  Instance inst = fixtures::single_pair(/*hours=*/2, /*capacity=*/3);
  PolicyConfig cfg;
  MilpModel model = build_milp(inst, cfg);
  SolveResult sr = solve(model);
  std::vector<std::pair<int, double>> fixings;
  for (size_t j = 0; j < model.vars.size(); ++j)
    fixings.push_back({static_cast<int>(j), sr.assignment[j]});
  auto bound = lp_bound(model, fixings);
  REQUIRE(bound.has_value());
  CHECK(*bound == doctest::Approx(sr.objective));
}
