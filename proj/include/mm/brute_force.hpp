#pragma once

// Exhaustive-enumeration oracle for tiny instances. Guarded so it cannot be
// run on anything exponential by accident. Shares the weight functions with
// the rest of the engine but none of the branch-and-bound search code.

#include <map>
#include <set>
#include <vector>

#include "mm/model.hpp"
#include "mm/weights.hpp"

namespace mm {

struct BruteForceResult {
  double objective = 0.0;
  Solution solution;
};

inline BruteForceResult brute_force(const Instance& inst, const PolicyConfig& cfg,
                                    int run_day = -1) {
  const int nE = static_cast<int>(inst.activities.size());
  if (nE > 10) throw Error("brute_force: more than 10 activities");
  for (const auto& s : inst.sites)
    if (s.slots > 2) throw Error("brute_force: more than 2 group slots per site");

  std::vector<double> w(nE);
  for (int e = 0; e < nE; ++e)
    w[e] = activity_weight(inst, inst.activities[e], cfg, run_day);

  // per-activity site index (-1 if not group eligible)
  std::vector<int> site_of(nE, -1);
  for (int e = 0; e < nE; ++e) {
    if (!inst.group_eligible(e)) continue;
    const Activity& a = inst.activities[e];
    site_of[e] = inst.site_of(a.mentor, a.subject, a.year);
  }

  // state: -1 none, 0 pair, >= 1 member of slot t
  std::vector<int> state(nE, -1);
  std::vector<int> pair_hours(nE, 0);
  BruteForceResult best;  // empty solution, objective 0

  auto evaluate_leaf = [&]() {
    // collect memberships per (site, slot)
    std::map<std::pair<int, int>, std::vector<int>> groups;
    std::vector<int> mentor_pair_hours(inst.mentors.size(), 0);
    for (int e = 0; e < nE; ++e) {
      if (state[e] == 0) mentor_pair_hours[inst.activities[e].mentor] += pair_hours[e];
      else if (state[e] > 0) groups[{site_of[e], state[e]}].push_back(e);
    }
    for (const auto& [g, members] : groups) {
      const GroupSite& site = inst.sites[g.first];
      if (static_cast<int>(members.size()) < 2 ||
          static_cast<int>(members.size()) > site.capacity)
        return;  // unrealisable group
    }
    // fixed part of the objective: pairs + mentor-pair penalty
    double base = 0;
    for (int e = 0; e < nE; ++e)
      if (state[e] == 0) base += w[e] * pair_hours[e];
    std::set<std::pair<int, int>> mentored;
    for (int e = 0; e < nE; ++e)
      if (state[e] == 0)
        mentored.insert({inst.activities[e].student, inst.activities[e].mentor});
    base -= cfg.mentor_pair_penalty * static_cast<double>(mentored.size());
    // group coherence
    for (const auto& [g, members] : groups) {
      const GroupSite& site = inst.sites[g.first];
      for (size_t p = 0; p < members.size(); ++p)
        for (size_t q = p + 1; q < members.size(); ++q)
          base += coherence_coefficient(inst, inst.activities[members[p]].student,
                                        inst.activities[members[q]].student,
                                        site.subject, site.year);
    }
    // enumerate group hours combinations {2,3} per realised group
    std::vector<std::pair<int, int>> gkeys;
    for (const auto& [g, members] : groups) gkeys.push_back(g);
    const int ng = static_cast<int>(gkeys.size());
    std::vector<int> xg(ng, 2);
    while (true) {
      std::vector<int> used = mentor_pair_hours;
      bool ok = true;
      for (int i = 0; i < ng && ok; ++i) {
        used[inst.sites[gkeys[i].first].mentor] += xg[i];
      }
      for (size_t j = 0; j < inst.mentors.size(); ++j)
        if (used[j] > inst.mentors[j].capacity) ok = false;
      if (ok) {
        double obj = base;
        std::map<std::pair<int, int>, int> member_hours;
        for (int i = 0; i < ng; ++i) {
          for (int e : groups[gkeys[i]]) {
            double we = w[e] * cfg.group_discount;
            int cap = std::min(inst.request_of(inst.activities[e]).hours, xg[i]);
            int h = we > 0 ? std::min(3, cap) : 0;
            obj += we * h;
            member_hours[{e, gkeys[i].second}] = h;
          }
        }
        if (obj > best.objective) {
          best.objective = obj;
          best.solution = Solution{};
          for (int e = 0; e < nE; ++e)
            if (state[e] == 0) best.solution.pairs[e] = pair_hours[e];
          for (int i = 0; i < ng; ++i) best.solution.groups[gkeys[i]] = xg[i];
          best.solution.members = member_hours;
        }
      }
      // next combination
      int i = 0;
      for (; i < ng; ++i) {
        if (xg[i] == 2) { xg[i] = 3; break; }
        xg[i] = 2;
      }
      if (i == ng) break;
    }
  };

  // recursion over activities, pruning by per-subject exclusivity and pair
  // capacity (group hours checked at the leaf)
  std::map<std::tuple<int, int, int>, int> subject_used;
  std::vector<int> pair_cap(inst.mentors.size(), 0);
  auto rec = [&](auto&& self, int e) -> void {
    if (e == nE) {
      evaluate_leaf();
      return;
    }
    const Activity& a = inst.activities[e];
    auto skey = std::make_tuple(a.student, a.subject, a.year);
    // unassigned
    state[e] = -1;
    self(self, e + 1);
    if (subject_used[skey] == 0) {
      subject_used[skey] = 1;
      // pair with 1..min(3, q) hours
      int maxh = std::min(3, inst.request_of(a).hours);
      state[e] = 0;
      for (int h = 1; h <= maxh; ++h) {
        if (pair_cap[a.mentor] + h > inst.mentors[a.mentor].capacity) break;
        pair_hours[e] = h;
        pair_cap[a.mentor] += h;
        self(self, e + 1);
        pair_cap[a.mentor] -= h;
      }
      pair_hours[e] = 0;
      // group membership
      if (site_of[e] >= 0) {
        for (int t = 1; t <= inst.sites[site_of[e]].slots; ++t) {
          state[e] = t;
          self(self, e + 1);
        }
      }
      state[e] = -1;
      subject_used[skey] = 0;
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace mm
