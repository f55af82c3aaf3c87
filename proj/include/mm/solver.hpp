#pragma once

// Exact maximization of the allocation MILP: best-bound branch-and-bound with
// depth-first plunging over the dual-simplex LP relaxation.
//
// Indicator variables whose optimal value is a pure function of the decision
// variables (same-group z, per-subject beta, per-student gamma) are never
// branched on; they are completed analytically once the decision variables
// are integral.

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "mm/lp.hpp"
#include "mm/milp.hpp"

namespace mm {

struct SolveLimits {
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  long node_limit = std::numeric_limits<long>::max();
  double gap = 0.0;  // relative gap tolerance; 0 = prove optimality
  double int_tol = 1e-6;
};

enum class SolveStatus { Optimal, GapReached, LimitReached };

struct SolveResult {
  SolveStatus status = SolveStatus::LimitReached;
  std::vector<double> assignment;  // best incumbent (always feasible)
  double objective = 0.0;          // exact objective of the incumbent
  double dual_bound = 0.0;
  long nodes = 0;
  double wall_seconds = 0.0;
};

namespace detail {

inline bool branchable(VarTag t) {
  return t != VarTag::SameGroup && t != VarTag::SubjectMatched &&
         t != VarTag::StudentMatched;
}

inline int branch_priority(VarTag t) {
  switch (t) {
    case VarTag::GroupUsed: return 0;
    case VarTag::MemberUsed: return 1;
    case VarTag::PairUsed: return 2;
    case VarTag::MentorPair: return 3;
    case VarTag::GroupHours: return 4;
    case VarTag::MemberHours: return 5;
    default: return 6;  // PairHours
  }
}

// Fills in the indicator variables implied by the integral decision
// variables; the result is feasible for the full constraint set.
inline void complete_implied(const MilpModel& m, std::vector<double>& x) {
  for (size_t j = 0; j < m.vars.size(); ++j)
    if (branchable(m.vars[j].tag)) x[j] = std::round(x[j]);
  // z = product of its two membership indicators
  for (const auto& c : m.cons) {
    if (c.tag != "same_group_lo") continue;
    int z = c.coeffs[0].first;
    bool both = true;
    for (size_t i = 1; i < c.coeffs.size(); ++i)
      if (x[c.coeffs[i].first] < 0.5) both = false;
    x[z] = both ? 1.0 : 0.0;
  }
  // beta from its defining equality, gamma as the indicator of sum(beta)
  for (const auto& c : m.cons) {
    if (c.tag == "subject_indicator") {
      int beta = -1;
      double sum = 0;
      for (const auto& [v, a] : c.coeffs) {
        if (m.vars[v].tag == VarTag::SubjectMatched) beta = v;
        else sum += a * x[v];
      }
      x[beta] = std::round(sum);
    } else if (c.tag == "student_indicator_lo") {
      int gamma = -1;
      double sum = 0;
      for (const auto& [v, a] : c.coeffs) {
        if (m.vars[v].tag == VarTag::StudentMatched) gamma = v;
        else sum += a * x[v];
      }
      x[gamma] = sum > 0.5 ? 1.0 : 0.0;
    }
  }
}

// Structure of the model used by the rounding heuristic: per-activity pair
// variables, per-slot group variables and the rows that need repair.
struct HeurCtx {
  std::vector<double> ub;  // tightest singleton-row cap per variable
  struct Member { int activity, ym, xm; };
  struct Slot { int yg, xg; std::vector<Member> members; };
  std::vector<std::vector<Slot>> sites;
  std::vector<const LinearConstraint*> choice;    // <= 1 rows over indicators
  std::vector<const LinearConstraint*> capacity;  // mentor capacity rows
  std::vector<const LinearConstraint*> mpair;     // mentor_pair_hi rows
  std::vector<std::vector<std::pair<int, double>>> col_rows;  // var -> (row, coeff)

  explicit HeurCtx(const MilpModel& m) {
    ub.resize(m.vars.size());
    for (size_t j = 0; j < m.vars.size(); ++j) ub[j] = m.vars[j].hi;
    for (const auto& c : m.cons) {
      if (c.sense == 'L' && c.coeffs.size() == 1 && c.coeffs[0].second > 0)
        ub[c.coeffs[0].first] =
            std::min(ub[c.coeffs[0].first], c.rhs / c.coeffs[0].second);
      if (c.tag == "one_mentor_per_subject" || c.tag == "activity_single_use")
        choice.push_back(&c);
      else if (c.tag == "mentor_capacity") capacity.push_back(&c);
      else if (c.tag == "mentor_pair_hi") mpair.push_back(&c);
    }
    sites.resize(m.xg_of_site.size());
    for (size_t s = 0; s < m.xg_of_site.size(); ++s) {
      sites[s].resize(m.xg_of_site[s].size());
      for (size_t t = 0; t < m.xg_of_site[s].size(); ++t) {
        sites[s][t].xg = m.xg_of_site[s][t];
        sites[s][t].yg = m.yg_of_site[s][t];
      }
    }
    for (const auto& [key, ym] : m.ym_of) {
      auto [e, t] = key;
      int s = m.vars[ym].c;
      sites[s][t - 1].members.push_back({e, ym, m.xm_of.at(key)});
    }
    col_rows.resize(m.vars.size());
    for (size_t r = 0; r < m.cons.size(); ++r)
      for (const auto& [v, co] : m.cons[r].coeffs)
        col_rows[v].push_back({static_cast<int>(r), co});
  }
};

inline bool rows_satisfied(const MilpModel& m, const std::vector<double>& x,
                           double tol) {
  for (size_t j = 0; j < m.vars.size(); ++j)
    if (x[j] < m.vars[j].lo - tol || x[j] > m.vars[j].hi + tol) return false;
  for (const auto& c : m.cons) {
    double a = 0;
    for (const auto& [v, co] : c.coeffs) a += co * x[v];
    if (c.sense == 'L' && a > c.rhs + tol) return false;
    if (c.sense == 'G' && a < c.rhs - tol) return false;
    if (c.sense == 'E' && std::abs(a - c.rhs) > tol) return false;
  }
  return true;
}

// Rounds an LP point to a feasible integral assignment: indicator thresholds,
// choice-row tie breaks by LP value, group re-packing for slot symmetry and
// greedy hour reduction against mentor capacity. Returns false on failure.
inline bool round_heuristic(const MilpModel& m, const HeurCtx& ctx,
                            const std::vector<double>& xlp,
                            std::vector<double>& h) {
  const size_t n = m.vars.size();
  h.assign(n, 0.0);
  auto iround = [](double v) { return std::floor(v + 0.5); };
  for (int e = 0; e < static_cast<int>(m.y_of_activity.size()); ++e)
    h[m.y_of_activity[e]] = xlp[m.y_of_activity[e]] >= 0.5 ? 1.0 : 0.0;
  for (const auto& site : ctx.sites)
    for (const auto& slot : site) {
      if (xlp[slot.yg] < 0.5) continue;
      for (const auto& mem : slot.members)
        h[mem.ym] = xlp[mem.ym] >= 0.5 ? 1.0 : 0.0;
    }
  // at-most-one rows: keep the alternative the LP likes best
  for (const auto* c : ctx.choice) {
    double sum = 0;
    for (const auto& [v, co] : c->coeffs) sum += co * h[v];
    if (sum <= c->rhs + 0.5) continue;
    int keep = -1;
    for (const auto& [v, co] : c->coeffs)
      if (h[v] > 0.5 && (keep < 0 || xlp[v] > xlp[keep])) keep = v;
    for (const auto& [v, co] : c->coeffs)
      if (v != keep) h[v] = 0.0;
  }
  // group realisation and slot symmetry: collect viable member sets, repack
  auto repack = [&](const std::vector<HeurCtx::Slot>& site) {
    std::vector<std::vector<int>> filled;  // member indices per realised slot
    for (const auto& slot : site) {
      std::vector<int> mem;
      for (size_t i = 0; i < slot.members.size(); ++i)
        if (h[slot.members[i].ym] > 0.5) mem.push_back(static_cast<int>(i));
      for (const auto& memv : slot.members) h[memv.ym] = 0.0;
      h[slot.yg] = 0.0;
      h[slot.xg] = 0.0;
      if (mem.size() >= 2) filled.push_back(std::move(mem));
    }
    for (size_t t = 0; t < filled.size(); ++t) {
      const auto& slot = site[t];
      h[slot.yg] = 1.0;
      for (int i : filled[t]) h[slot.members[i].ym] = 1.0;
    }
  };
  for (const auto& site : ctx.sites) repack(site);
  // hours
  for (size_t e = 0; e < m.x_of_activity.size(); ++e) {
    int xe = m.x_of_activity[e], ye = m.y_of_activity[e];
    h[xe] = h[ye] > 0.5
                ? std::clamp(iround(xlp[xe]), 1.0, std::min(3.0, ctx.ub[xe]))
                : 0.0;
  }
  for (const auto& site : ctx.sites)
    for (const auto& slot : site) {
      if (h[slot.yg] < 0.5) continue;
      h[slot.xg] =
          std::clamp(iround(xlp[slot.xg]), 2.0, std::min(3.0, ctx.ub[slot.xg]));
      for (const auto& mem : slot.members)
        h[mem.xm] = h[mem.ym] > 0.5
                        ? std::clamp(iround(xlp[mem.xm]), 1.0,
                                     std::min(h[slot.xg], ctx.ub[mem.xm]))
                        : 0.0;
    }
  // mentor capacity: shrink hours cheapest-first, then drop whole pairs
  for (const auto* c : ctx.capacity) {
    double sum = 0;
    for (const auto& [v, co] : c->coeffs) sum += co * h[v];
    while (sum > c->rhs + 1e-9) {
      int best = -1;
      double bestw = 0;
      for (const auto& [v, co] : c->coeffs) {
        double floor_v = m.vars[v].tag == VarTag::PairHours ? 1.0 : 2.0;
        if (h[v] <= floor_v + 0.5) continue;
        if (best < 0 || m.objective[v] < bestw) {
          best = v;
          bestw = m.objective[v];
        }
      }
      if (best >= 0) {
        h[best] -= 1.0;
        sum -= 1.0;
        continue;
      }
      // drop the pair with the least objective contribution
      int drop = -1;
      double droploss = 0;
      for (const auto& [v, co] : c->coeffs) {
        if (m.vars[v].tag != VarTag::PairHours || h[v] < 0.5) continue;
        double loss = m.objective[v] * h[v];
        if (drop < 0 || loss < droploss) {
          drop = v;
          droploss = loss;
        }
      }
      if (drop < 0) return false;  // only groups left: give up on this row
      sum -= h[drop];
      h[drop] = 0.0;
      h[m.y_of_activity[m.vars[drop].a]] = 0.0;
    }
  }
  // member hours can exceed shrunk group hours; re-clamp
  for (const auto& site : ctx.sites)
    for (const auto& slot : site)
      for (const auto& mem : slot.members)
        if (h[mem.xm] > h[slot.xg]) h[mem.xm] = h[slot.xg];
  // mentor-pair indicators from the realised pairs
  for (const auto* c : ctx.mpair) {
    int mp = -1;
    double sum = 0;
    for (const auto& [v, co] : c->coeffs) {
      if (m.vars[v].tag == VarTag::MentorPair) mp = v;
      else sum += h[v];
    }
    h[mp] = sum > 0.5 ? 1.0 : 0.0;
  }
  // greedy augmentation: spend leftover capacity on extra pair/group hours
  std::vector<double> act(m.cons.size(), 0.0);
  for (size_t r = 0; r < m.cons.size(); ++r)
    for (const auto& [v, co] : m.cons[r].coeffs) act[r] += co * h[v];
  auto can_bump = [&](int j, double d) {
    if (h[j] + d > std::min(m.vars[j].hi, ctx.ub[j]) + 1e-9) return false;
    for (const auto& [r, co] : ctx.col_rows[j]) {
      const auto& c = m.cons[r];
      double a = act[r] + co * d;
      if (c.sense == 'L' && a > c.rhs + 1e-9) return false;
      if (c.sense == 'G' && a < c.rhs - 1e-9) return false;
      if (c.sense == 'E' && std::abs(a - c.rhs) > 1e-9) return false;
    }
    return true;
  };
  auto bump = [&](int j, double d) {
    h[j] += d;
    for (const auto& [r, co] : ctx.col_rows[j]) act[r] += co * d;
  };
  for (int pass = 0; pass < 4; ++pass) {
    bool any = false;
    for (size_t e = 0; e < m.x_of_activity.size(); ++e) {
      int xe = m.x_of_activity[e];
      while (h[m.y_of_activity[e]] > 0.5 && can_bump(xe, 1.0)) {
        bump(xe, 1.0);
        any = true;
      }
    }
    for (const auto& site : ctx.sites)
      for (const auto& slot : site) {
        if (h[slot.yg] < 0.5) continue;
        for (const auto& mem : slot.members)
          while (h[mem.ym] > 0.5 && h[mem.xm] + 1 <= h[slot.xg] + 1e-9 &&
                 can_bump(mem.xm, 1.0)) {
            bump(mem.xm, 1.0);
            any = true;
          }
        // an extra group hour pays only through the members it unlocks
        if (can_bump(slot.xg, 1.0)) {
          bump(slot.xg, 1.0);
          bool used = false;
          for (const auto& mem : slot.members)
            if (h[mem.ym] > 0.5 && h[mem.xm] + 1 <= h[slot.xg] + 1e-9 &&
                can_bump(mem.xm, 1.0)) {
              bump(mem.xm, 1.0);
              used = true;
            }
          if (!used) bump(slot.xg, -1.0);
          else any = true;
        }
      }
    if (!any) break;
  }
  complete_implied(m, h);
  return rows_satisfied(m, h, 1e-6);
}

}  // namespace detail

inline SolveResult solve(const MilpModel& model, const SolveLimits& limits = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  SolveResult res;
  const size_t n = model.vars.size();
  res.assignment.assign(n, 0.0);  // the empty solution is always feasible
  res.objective = 0.0;
  if (n == 0) {
    res.status = SolveStatus::Optimal;
    return res;
  }

  BoundedLp lp = make_lp_relaxation(model);
  detail::HeurCtx heur(model);
  std::vector<double> hx;

  struct BoundChange {
    std::shared_ptr<BoundChange> parent;
    int var;
    double lo, hi;
  };
  struct Node {
    double bound;
    long seq;
    std::shared_ptr<BoundChange> changes;
    // branching decision that created this node, for pseudocost updates
    int bvar = -1;
    bool up = false;
    double frac = 0.0;        // fractional part of bvar at the parent
    double parent_obj = 0.0;  // parent LP objective
    bool operator<(const Node& o) const {
      if (bound != o.bound) return bound < o.bound;  // max-heap on bound
      return seq < o.seq;  // ties: newest first, dives through bound plateaus
    }
  };

  std::vector<double> root_lo(n), root_hi(n);
  for (size_t j = 0; j < n; ++j) {
    root_lo[j] = model.vars[j].lo;
    root_hi[j] = model.vars[j].hi;
  }
  auto apply_bounds = [&](const std::shared_ptr<BoundChange>& c,
                          std::vector<double>& lo, std::vector<double>& hi) {
    lo = root_lo;
    hi = root_hi;
    for (auto p = c; p; p = p->parent) {
      lo[p->var] = std::max(lo[p->var], p->lo);
      hi[p->var] = std::min(hi[p->var], p->hi);
    }
  };

  const double prune_tol = 1e-6;
  double incumbent = 0.0;  // empty solution
  bool have_incumbent = true;

  // pseudocosts: average LP degradation per unit of fractionality
  std::vector<double> pc_sum_up(n, 0.0), pc_sum_dn(n, 0.0);
  std::vector<int> pc_cnt_up(n, 0), pc_cnt_dn(n, 0);
  double pc_global_sum = 0.0;
  int pc_global_cnt = 0;
  std::priority_queue<Node> open;
  long seq = 0;
  bool exhausted = true;
  std::vector<double> lo(n), hi(n);

  std::optional<Node> current = Node{std::numeric_limits<double>::infinity(), seq++, nullptr};
  double root_bound = std::numeric_limits<double>::infinity();
  bool root_solved = false;

  auto stop_status = [&](SolveStatus s) {
    res.status = s;
    res.dual_bound = root_solved
                         ? std::max(incumbent,
                                    std::max(current ? current->bound
                                                     : -std::numeric_limits<double>::infinity(),
                                             open.empty() ? -std::numeric_limits<double>::infinity()
                                                          : open.top().bound))
                         : root_bound;
    if (res.dual_bound == -std::numeric_limits<double>::infinity())
      res.dual_bound = incumbent;
    res.wall_seconds = elapsed();
  };

  // LP-guided dive: repeatedly fix the most-nearly-integral fractional
  // variable to its rounded value and re-solve; cheap on warm starts and
  // much better at finding incumbents on large instances than rounding
  auto dive = [&](std::vector<double> dlo, std::vector<double> dhi) {
    for (int round = 0; round < 2000; ++round) {
      lp.set_bounds(dlo, dhi);
      LpResult dr = lp.solve();
      if (dr.status != LpResult::Status::Optimal) return;
      if (dr.objective <= incumbent + prune_tol) return;
      std::vector<double> dx = lp.primal();
      // fix a batch of the most-nearly-integral fractional variables per
      // round; one-at-a-time needs too many LP solves on large instances
      std::vector<std::pair<double, int>> fr;
      for (size_t j = 0; j < n; ++j) {
        if (!detail::branchable(model.vars[j].tag)) continue;
        double f = dx[j] - std::floor(dx[j]);
        double dist = std::min(f, 1.0 - f);
        if (dist <= limits.int_tol) continue;
        fr.push_back({dist, static_cast<int>(j)});
      }
      if (fr.empty()) {
        detail::complete_implied(model, dx);
        if (!detail::rows_satisfied(model, dx, 1e-6)) return;
        double value = model.objective_at(dx);
        if (!have_incumbent || value > incumbent) {
          incumbent = value;
          res.assignment = dx;
          res.objective = value;
          have_incumbent = true;
        }
        return;
      }
      std::sort(fr.begin(), fr.end());
      size_t take = 1;
      while (take < fr.size() && take < 24 && fr[take].first <= 0.2) ++take;
      for (size_t k = 0; k < take; ++k) {
        int pick = fr[k].second;
        double rv = std::round(dx[pick]);
        dlo[pick] = rv;
        dhi[pick] = rv;
      }
    }
  };

  while (current || !open.empty()) {
    if (!current) {
      current = open.top();
      open.pop();
      if (current->bound <= incumbent + prune_tol) {
        current.reset();
        continue;
      }
    }
    if (res.nodes >= limits.node_limit || elapsed() > limits.time_limit_seconds) {
      exhausted = false;
      break;
    }
    ++res.nodes;

    apply_bounds(current->changes, lo, hi);
    lp.set_bounds(lo, hi);
    LpResult lpres = lp.solve();
    if (lpres.status == LpResult::Status::Infeasible) {
      current.reset();
      continue;
    }
    double bound = std::min(lpres.objective, current->bound);
    if (!root_solved) {
      root_bound = bound;
      root_solved = true;
    }
    if (current->bvar >= 0) {
      double drop = std::max(0.0, current->parent_obj - lpres.objective);
      double dist = current->up ? 1.0 - current->frac : current->frac;
      if (dist > 1e-9) {
        double per_unit = drop / dist;
        if (current->up) {
          pc_sum_up[current->bvar] += per_unit;
          ++pc_cnt_up[current->bvar];
        } else {
          pc_sum_dn[current->bvar] += per_unit;
          ++pc_cnt_dn[current->bvar];
        }
        pc_global_sum += per_unit;
        ++pc_global_cnt;
      }
    }
    if (bound <= incumbent + prune_tol) {
      current.reset();
      continue;
    }

    std::vector<double> x = lp.primal();
    if (detail::round_heuristic(model, heur, x, hx)) {
      double value = model.objective_at(hx);
      if (!have_incumbent || value > incumbent) {
        incumbent = value;
        res.assignment = hx;
        res.objective = value;
        have_incumbent = true;
      }
    }
    // reduced-cost fixing: a nonbasic integer variable whose reduced cost
    // proves one unit of movement already drops below the incumbent can be
    // fixed at its bound for the whole subtree
    if (have_incumbent) {
      for (size_t j = 0; j < n; ++j) {
        if (!detail::branchable(model.vars[j].tag)) continue;
        // the LP may carry tighter bounds than the node (singleton rows are
        // folded into its base bounds); the fixing must use those
        double elo = lp.var_lo(static_cast<int>(j));
        double ehi = lp.var_hi(static_cast<int>(j));
        if (ehi - elo < 0.5) continue;
        double d = lp.reduced_cost(static_cast<int>(j));
        bool fix_lo = lp.nonbasic_at_lower(static_cast<int>(j)) &&
                      lpres.objective + d <= incumbent + prune_tol;
        bool fix_hi = lp.nonbasic_at_upper(static_cast<int>(j)) &&
                      lpres.objective - d <= incumbent + prune_tol;
        if (!fix_lo && !fix_hi) continue;
        auto ch = std::make_shared<BoundChange>();
        ch->parent = current->changes;
        ch->var = static_cast<int>(j);
        ch->lo = fix_lo ? -std::numeric_limits<double>::infinity() : ehi;
        ch->hi = fix_lo ? elo : std::numeric_limits<double>::infinity();
        current->changes = ch;
      }
    }

    if (res.nodes % 500 == 1) dive(lo, hi);

    // branching variable: best pseudocost score among fractional variables,
    // binaries first; uninitialized costs fall back to the global average
    double pc_avg = pc_global_cnt > 0 ? pc_global_sum / pc_global_cnt : 1.0;
    auto pc_up = [&](size_t j) {
      return pc_cnt_up[j] > 0 ? pc_sum_up[j] / pc_cnt_up[j] : pc_avg;
    };
    auto pc_dn = [&](size_t j) {
      return pc_cnt_dn[j] > 0 ? pc_sum_dn[j] / pc_cnt_dn[j] : pc_avg;
    };
    int bvar = -1;
    double bscore = -1;
    bool bbinary = false;
    for (size_t j = 0; j < n; ++j) {
      if (!detail::branchable(model.vars[j].tag)) continue;
      double f = x[j] - std::floor(x[j]);
      double dist = std::min(f, 1.0 - f);
      if (dist <= limits.int_tol) continue;
      double eu = pc_up(j) * (1.0 - f);
      double ed = pc_dn(j) * f;
      double score = std::max(eu, 1e-6) * std::max(ed, 1e-6);
      bool is_bin = model.vars[j].binary;
      bool better;
      if (bvar < 0) better = true;
      else if (is_bin != bbinary) better = is_bin;
      else if (std::abs(score - bscore) > 1e-12 * std::max(1.0, bscore))
        better = score > bscore;
      else {
        int pj = detail::branch_priority(model.vars[j].tag);
        int pb = detail::branch_priority(model.vars[bvar].tag);
        better = pj < pb || (pj == pb && static_cast<int>(j) < bvar);
      }
      if (better) {
        bvar = static_cast<int>(j);
        bscore = score;
        bbinary = is_bin;
      }
    }

    if (bvar < 0) {
      // decision variables integral: complete indicators and take incumbent
      detail::complete_implied(model, x);
      double value = model.objective_at(x);
      if (!have_incumbent || value > incumbent) {
        incumbent = value;
        res.assignment = x;
        res.objective = value;
        have_incumbent = true;
      }
      current.reset();
    } else {
      double f = x[bvar];
      double down = std::floor(f);
      bool up_first = (f - down) >= 0.5;
      auto mk = [&](double clo, double chi, bool up_dir) {
        auto ch = std::make_shared<BoundChange>();
        ch->parent = current->changes;
        ch->var = bvar;
        ch->lo = clo;
        ch->hi = chi;
        Node node{bound, seq++, ch};
        node.bvar = bvar;
        node.up = up_dir;
        node.frac = f - down;
        node.parent_obj = lpres.objective;
        return node;
      };
      Node down_node = mk(-std::numeric_limits<double>::infinity(), down, false);
      Node up_node = mk(down + 1, std::numeric_limits<double>::infinity(), true);
      if (up_first) {
        open.push(down_node);
        current = up_node;  // plunge
      } else {
        open.push(up_node);
        current = down_node;
      }
    }

    // gap termination
    double global_bound = incumbent;
    if (current) global_bound = std::max(global_bound, current->bound);
    if (!open.empty()) global_bound = std::max(global_bound, open.top().bound);
    if (limits.gap > 0 && have_incumbent &&
        global_bound - incumbent <= limits.gap * std::max(1.0, std::abs(incumbent))) {
      current.reset();
      while (!open.empty()) open.pop();
      stop_status(SolveStatus::GapReached);
      return res;
    }
  }

  if (exhausted) {
    res.dual_bound = incumbent;
    res.status = SolveStatus::Optimal;
    res.wall_seconds = elapsed();
    return res;
  }
  stop_status(SolveStatus::LimitReached);
  return res;
}

// Parses an externally produced solution ("name = value" per line, '#'
// comments) into an assignment vector over the model's variables; missing
// variables default to 0.
inline std::vector<double> parse_assignment(const MilpModel& m,
                                            const std::string& text) {
  std::map<std::string, int> by_name;
  for (size_t j = 0; j < m.vars.size(); ++j) by_name[m.vars[j].name] = static_cast<int>(j);
  std::vector<double> x(m.vars.size(), 0.0);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string name = line.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (name.empty()) continue;
    auto it = by_name.find(name);
    if (it == by_name.end()) throw Error("unknown variable in solution file: " + name);
    x[it->second] = std::stod(line.substr(eq + 1));
  }
  return x;
}

}  // namespace mm
