#pragma once

// Bounded-variable dual simplex for the LP relaxations used by the
// branch-and-bound search. All variables carry finite bounds, so a slack
// basis with sign-chosen nonbasic statuses is always dual feasible and a
// single dual phase reaches the optimum (or proves primal infeasibility).
//
// The basis inverse is kept as a sparse LU factorization plus a product-form
// eta file, refactorized periodically.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mm/milp.hpp"

namespace mm {

struct LpResult {
  enum class Status { Optimal, Infeasible, IterLimit };
  Status status = Status::IterLimit;
  double objective = 0.0;
  long iterations = 0;
};

class BoundedLp {
 public:
  // Columns are structural variables; each row r has range [row_lo, row_hi].
  BoundedLp(int ncols, std::vector<double> obj,
            std::vector<std::vector<std::pair<int, double>>> cols,
            std::vector<double> row_lo, std::vector<double> row_hi,
            std::vector<double> var_lo, std::vector<double> var_hi)
      : n_(ncols),
        obj_(std::move(obj)),
        base_lo_(std::move(var_lo)),
        base_hi_(std::move(var_hi)),
        row_lo_(std::move(row_lo)),
        row_hi_(std::move(row_hi)) {
    m_ = static_cast<int>(row_lo_.size());
    // CSC storage
    colptr_.resize(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) colptr_[j + 1] = colptr_[j] + static_cast<int>(cols[j].size());
    rowidx_.resize(colptr_[n_]);
    vals_.resize(colptr_[n_]);
    for (int j = 0; j < n_; ++j) {
      int p = colptr_[j];
      for (const auto& [r, v] : cols[j]) {
        rowidx_[p] = r;
        vals_[p] = v;
        ++p;
      }
    }
    cur_lo_ = base_lo_;
    cur_hi_ = base_hi_;
    reset_basis();
  }

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }

  // Node bounds are intersected with the presolved base bounds.
  void set_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    for (int j = 0; j < n_; ++j) {
      cur_lo_[j] = std::max(base_lo_[j], lo[j]);
      cur_hi_[j] = std::min(base_hi_[j], hi[j]);
    }
  }
  void reset_bounds() {
    cur_lo_ = base_lo_;
    cur_hi_ = base_hi_;
  }
  double base_lo(int j) const { return base_lo_[j]; }
  double base_hi(int j) const { return base_hi_[j]; }
  // effective bounds actually used by the LP (externally set bounds
  // intersected with the base bounds the relaxation was built with)
  double var_lo(int j) const { return cur_lo_[j]; }
  double var_hi(int j) const { return cur_hi_[j]; }

  void reset_basis() {
    const int N = n_ + m_;
    status_.assign(N, NB_LO);
    basis_.resize(m_);
    pos_.assign(N, -1);
    for (int r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      pos_[n_ + r] = r;
      status_[n_ + r] = BASIC;
    }
    for (int j = 0; j < n_; ++j) status_[j] = obj_[j] > 0 ? NB_HI : NB_LO;
    devex_.assign(m_, 1.0);
    factorized_ = false;
  }

  LpResult solve(long iter_limit = 0) {
    LpResult res;
    if (iter_limit <= 0) iter_limit = 20000 + 200L * (m_ + n_);
    if (m_ == 0) {
      res.status = infeasible_bounds() ? LpResult::Status::Infeasible
                                       : LpResult::Status::Optimal;
      res.objective = res.status == LpResult::Status::Optimal ? bound_objective() : 0;
      return res;
    }
    if (infeasible_bounds()) {
      res.status = LpResult::Status::Infeasible;
      return res;
    }
    // basis and eta file stay valid across solves; only bounds change
    if (!factorized_ && !refactorize()) {
      reset_basis();
      refactorize();
    }
    compute_duals();
    repair_dual_feasibility();
    compute_primal();

    const double feas_tol = 1e-7;
    int stall = 0;
    bool bland = false;
    bool verified = false;  // primal/duals recomputed from a fresh factorization
    std::vector<double> alpha(n_ + m_);
    Eigen::VectorXd rho(m_), u(m_);
    devex_.assign(m_, 1.0);  // fresh reference framework each solve

    for (long iter = 0; iter < iter_limit; ++iter) {
      // --- leaving variable: devex-weighted most infeasible (Bland: lowest
      // index). Weights approximate dual steepest edge. ---
      int r = -1;
      int sigma = 0;
      double worst = 0;
      for (int i = 0; i < m_; ++i) {
        int v = basis_[i];
        double lo = vlo(v), hi = vhi(v);
        double below = lo - xb_[i];
        double above = xb_[i] - hi;
        if (bland) {
          if (below > feas_tol && (r < 0 || v < basis_[r])) { r = i; sigma = +1; }
          else if (above > feas_tol && (r < 0 || v < basis_[r])) { r = i; sigma = -1; }
        } else {
          double infeas = std::max(below, above);
          if (infeas <= feas_tol) continue;
          double score = infeas * infeas / devex_[i];
          if (score > worst) { worst = score; r = i; sigma = below > above ? +1 : -1; }
        }
      }
      if (r < 0) {
        if (!verified && !etas_.empty()) {
          // incremental primal/dual updates drift; confirm optimality against
          // freshly factorized values before terminating
          if (!refactorize()) reset_basis(), refactorize();
          compute_duals();
          repair_dual_feasibility();
          compute_primal();
          verified = true;
          continue;
        }
        res.status = LpResult::Status::Optimal;
        res.objective = current_objective();
        res.iterations = iter;
        return res;
      }
      verified = false;

      // --- pivot row ---
      rho.setZero();
      rho[r] = 1.0;
      btran(rho);
      const double ztol = 1e-9;
      // alpha_j = rho' A_j for nonbasic j
      for (int j = 0; j < n_ + m_; ++j) alpha[j] = 0;
      for (int j = 0; j < n_; ++j) {
        if (status_[j] == BASIC) continue;
        double a = 0;
        for (int p = colptr_[j]; p < colptr_[j + 1]; ++p) a += rho[rowidx_[p]] * vals_[p];
        alpha[j] = a;
      }
      for (int rr = 0; rr < m_; ++rr)
        if (status_[n_ + rr] != BASIC) alpha[n_ + rr] = -rho[rr];

      // --- dual ratio test ---
      int q = -1;
      double best_ratio = 0;
      double best_alpha = 0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == BASIC) continue;
        if (vhi(j) - vlo(j) < 1e-12) continue;  // fixed, cannot enter
        double a = alpha[j];
        if (std::abs(a) <= ztol) continue;
        bool cand = (sigma > 0)
                        ? ((status_[j] == NB_LO && a < 0) || (status_[j] == NB_HI && a > 0))
                        : ((status_[j] == NB_LO && a > 0) || (status_[j] == NB_HI && a < 0));
        if (!cand) continue;
        double ratio = std::abs(d_[j] / a);
        if (q < 0 || ratio < best_ratio - 1e-10 ||
            (ratio < best_ratio + 1e-10 &&
             (bland ? j < q : std::abs(a) > std::abs(best_alpha)))) {
          q = j;
          best_ratio = ratio;
          best_alpha = a;
        }
      }
      if (q < 0) {
        res.status = LpResult::Status::Infeasible;
        res.iterations = iter;
        return res;
      }

      // --- pivot ---
      column_into(q, u);
      ftran(u);
      double urq = u[r];
      if (std::abs(urq) < 1e-10) {
        // numerically unusable pivot; refactorize and retry once, else bail
        if (!refactorize()) reset_basis(), refactorize();
        compute_duals();
        repair_dual_feasibility();
        compute_primal();
        if (++stall > 3000) bland = true;
        continue;
      }
      // devex weight update (reference framework on basic positions)
      double wr = std::max(devex_[r] / (urq * urq), 1.0);
      for (int i = 0; i < m_; ++i) {
        if (i == r || u[i] == 0.0) continue;
        double g = u[i] / urq;
        double cand = g * g * wr;
        if (cand > devex_[i]) devex_[i] = cand;
      }
      devex_[r] = wr;

      int leaving = basis_[r];
      double target = sigma > 0 ? vlo(leaving) : vhi(leaving);
      double delta = target - xb_[r];
      double t;
      double enter_val;
      if (status_[q] == NB_LO) {
        t = -delta / urq;
        for (int i = 0; i < m_; ++i) xb_[i] -= u[i] * t;
        enter_val = vlo(q) + t;
      } else {
        t = delta / urq;
        for (int i = 0; i < m_; ++i) xb_[i] += u[i] * t;
        enter_val = vhi(q) - t;
      }
      double theta = d_[q] / urq;
      // dual update over nonbasic + the leaving variable
      for (int j = 0; j < n_ + m_; ++j)
        if (status_[j] != BASIC && alpha[j] != 0.0) d_[j] -= theta * alpha[j];
      d_[leaving] = -theta;
      d_[q] = 0;

      status_[leaving] = sigma > 0 ? NB_LO : NB_HI;
      pos_[leaving] = -1;
      basis_[r] = q;
      pos_[q] = r;
      status_[q] = BASIC;
      xb_[r] = enter_val;

      Eta eta;
      eta.r = r;
      eta.ur = urq;
      for (int i = 0; i < m_; ++i)
        if (i != r && std::abs(u[i]) > 1e-12) eta.nz.push_back({i, u[i]});
      etas_.push_back(std::move(eta));
      if (static_cast<int>(etas_.size()) >= 64) {
        if (!refactorize()) reset_basis(), refactorize();
        compute_duals();
        repair_dual_feasibility();
        compute_primal();
      }

      if (std::abs(t) <= 1e-11) {
        if (++stall > 3000) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }
    res.status = LpResult::Status::IterLimit;
    res.objective = current_objective();
    res.iterations = iter_limit;
    return res;
  }

  // reduced cost and bound status of a structural column at the last basis
  double reduced_cost(int j) const { return d_[j]; }
  bool nonbasic_at_lower(int j) const { return status_[j] == NB_LO; }
  bool nonbasic_at_upper(int j) const { return status_[j] == NB_HI; }

  // structural variable values at the current basis
  std::vector<double> primal() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j)
      x[j] = status_[j] == BASIC ? xb_[pos_[j]]
             : status_[j] == NB_HI ? vhi(j) : vlo(j);
    return x;
  }

 private:
  enum Status : uint8_t { NB_LO, NB_HI, BASIC };

  double vlo(int v) const { return v < n_ ? cur_lo_[v] : row_lo_[v - n_]; }
  double vhi(int v) const { return v < n_ ? cur_hi_[v] : row_hi_[v - n_]; }
  double vobj(int v) const { return v < n_ ? obj_[v] : 0.0; }

  bool infeasible_bounds() const {
    for (int j = 0; j < n_; ++j)
      if (cur_lo_[j] > cur_hi_[j] + 1e-12) return true;
    return false;
  }
  double bound_objective() const {
    double v = 0;
    for (int j = 0; j < n_; ++j) v += obj_[j] * (obj_[j] > 0 ? cur_hi_[j] : cur_lo_[j]);
    return v;
  }
  double current_objective() const {
    double v = 0;
    for (int j = 0; j < n_; ++j)
      v += obj_[j] * (status_[j] == BASIC ? xb_[pos_[j]]
                      : status_[j] == NB_HI ? vhi(j) : vlo(j));
    return v;
  }

  void column_into(int v, Eigen::VectorXd& out) const {
    out.setZero();
    if (v < n_) {
      for (int p = colptr_[v]; p < colptr_[v + 1]; ++p) out[rowidx_[p]] = vals_[p];
    } else {
      out[v - n_] = -1.0;
    }
  }

  bool refactorize() {
    Eigen::SparseMatrix<double> B(m_, m_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m_) * 4);
    for (int i = 0; i < m_; ++i) {
      int v = basis_[i];
      if (v < n_) {
        for (int p = colptr_[v]; p < colptr_[v + 1]; ++p)
          trip.emplace_back(rowidx_[p], i, vals_[p]);
      } else {
        trip.emplace_back(v - n_, i, -1.0);
      }
    }
    B.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(B);
    etas_.clear();
    factorized_ = lu_.info() == Eigen::Success;
    return factorized_;
  }

  void ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      double t = v[e.r] / e.ur;
      if (t != 0.0)
        for (const auto& [i, ui] : e.nz) v[i] -= ui * t;
      v[e.r] = t;
    }
  }

  void btran(Eigen::VectorXd& v) const {
    for (size_t k = etas_.size(); k-- > 0;) {
      const Eta& e = etas_[k];
      // v_r' = (v_r - sum_{i != r} u_i v_i) / u_r; others unchanged.
      double acc = 0;
      for (const auto& [i, ui] : e.nz) acc += ui * v[i];
      v[e.r] = (v[e.r] - acc) / e.ur;
    }
    v = lu_.adjoint().solve(v);
  }

  void compute_primal() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == BASIC) continue;
      double x = status_[j] == NB_HI ? cur_hi_[j] : cur_lo_[j];
      if (x == 0.0) continue;
      for (int p = colptr_[j]; p < colptr_[j + 1]; ++p)
        rhs[rowidx_[p]] -= vals_[p] * x;
    }
    for (int r = 0; r < m_; ++r) {
      int v = n_ + r;
      if (status_[v] == BASIC) continue;
      double x = status_[v] == NB_HI ? row_hi_[r] : row_lo_[r];
      rhs[r] += x;
    }
    ftran(rhs);
    xb_.resize(m_);
    for (int i = 0; i < m_; ++i) xb_[i] = rhs[i];
  }

  // Dual feasibility is maintained incrementally during pivoting, so after a
  // warm start or refactorization the freshly computed reduced costs can
  // contradict the inherited nonbasic statuses. Flipping the offending
  // variables to their other (finite) bound restores the invariant the dual
  // ratio test relies on; without this the solve can stop at a primal
  // feasible but suboptimal basis.
  void repair_dual_feasibility() {
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == BASIC) continue;
      if (status_[j] == NB_LO && d_[j] > 1e-9) status_[j] = NB_HI;
      else if (status_[j] == NB_HI && d_[j] < -1e-9) status_[j] = NB_LO;
    }
  }

  void compute_duals() {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = vobj(basis_[i]);
    btran(cb);
    d_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == BASIC) continue;
      double yAj = 0;
      for (int p = colptr_[j]; p < colptr_[j + 1]; ++p) yAj += cb[rowidx_[p]] * vals_[p];
      d_[j] = obj_[j] - yAj;
    }
    for (int r = 0; r < m_; ++r)
      if (status_[n_ + r] != BASIC) d_[n_ + r] = cb[r];
  }

  int n_ = 0, m_ = 0;
  std::vector<double> obj_;
  std::vector<int> colptr_, rowidx_;
  std::vector<double> vals_;
  std::vector<double> base_lo_, base_hi_, cur_lo_, cur_hi_;
  std::vector<double> row_lo_, row_hi_;

  std::vector<uint8_t> status_;
  std::vector<int> basis_, pos_;
  std::vector<double> xb_;
  std::vector<double> d_;
  std::vector<double> devex_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;  // adjoint() is non-const in Eigen 3.4
  struct Eta {
    int r;
    double ur;  // u[r]
    std::vector<std::pair<int, double>> nz;  // entries i != r
  };
  std::vector<Eta> etas_;
  bool factorized_ = false;
};

// ---------------------------------------------------------------------------
// LP relaxation of a MILP model, with light presolve.

// Rows dropped by presolve never tighten the relaxation, so the LP value
// stays a valid upper bound and implied-variable completion restores the
// dropped structure exactly for integral points:
//  - singleton rows are folded into variable bounds;
//  - same-group linearization rows that cannot bind at an optimum (given the
//    sign of the indicator's objective coefficient) are skipped.
inline BoundedLp make_lp_relaxation(const MilpModel& m) {
  const int n = static_cast<int>(m.vars.size());
  std::vector<double> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    lo[j] = m.vars[j].lo;
    hi[j] = m.vars[j].hi;
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  std::vector<double> row_lo, row_hi;
  for (const auto& c : m.cons) {
    if (c.coeffs.size() == 1) {
      int v = c.coeffs[0].first;
      double a = c.coeffs[0].second;
      double b = c.rhs / a;
      bool upper = (c.sense == 'L') == (a > 0);
      if (c.sense == 'E') {
        lo[v] = std::max(lo[v], b);
        hi[v] = std::min(hi[v], b);
      } else if (upper) {
        hi[v] = std::min(hi[v], b);
      } else {
        lo[v] = std::max(lo[v], b);
      }
      continue;
    }
    if (c.tag == "mentor_pair_lo") continue;  // m <= sum y never binds (m is penalized)
    // beta/gamma carry no objective weight and nothing else constrains them;
    // complete_implied reconstructs them for integral points
    if (c.tag == "subject_indicator" || c.tag == "student_indicator_lo" ||
        c.tag == "student_indicator_hi")
      continue;
    if (c.tag == "mentor_pair_hi") {
      // disaggregate sum y <= 5m into y_e <= m: stronger relaxation, same
      // integer points (at most 5 activities share a (student, mentor) pair)
      int mp = -1;
      for (const auto& [v, a] : c.coeffs)
        if (a < 0) mp = v;
      for (const auto& [v, a] : c.coeffs) {
        if (v == mp) continue;
        int r = static_cast<int>(row_lo.size());
        cols[v].push_back({r, 1.0});
        cols[mp].push_back({r, -1.0});
        row_lo.push_back(-inf);
        row_hi.push_back(0.0);
      }
      continue;
    }
    if (c.tag.rfind("same_group", 0) == 0 && !c.coeffs.empty()) {
      int zv = c.coeffs[0].first;
      double zobj = m.objective[zv];
      bool lower_row = c.tag == "same_group_lo";
      // objective pushes z up: the lower row never binds; pushes down: the
      // upper rows never bind. Either way the optimum value is unchanged.
      if (zobj >= 0 && lower_row) continue;
      if (zobj <= 0 && !lower_row) continue;
    }
    int r = static_cast<int>(row_lo.size());
    for (const auto& [v, a] : c.coeffs) cols[v].push_back({r, a});
    if (c.sense == 'L') {
      row_lo.push_back(-inf);
      row_hi.push_back(c.rhs);
    } else if (c.sense == 'G') {
      row_lo.push_back(c.rhs);
      row_hi.push_back(inf);
    } else {
      row_lo.push_back(c.rhs);
      row_hi.push_back(c.rhs);
    }
  }
  // disaggregated membership coupling: a member indicator never exceeds its
  // slot indicator (implied for integer points by the group fill rows, but
  // strictly tighter fractionally)
  for (const auto& [key, ym] : m.ym_of) {
    int site = m.vars[ym].c;
    int yg = m.yg_of_site[site][key.second - 1];
    int r = static_cast<int>(row_lo.size());
    cols[ym].push_back({r, 1.0});
    cols[yg].push_back({r, -1.0});
    row_lo.push_back(-inf);
    row_hi.push_back(0.0);
  }
  // slack bounds must stay finite for the dual-feasible slack start; clamp
  // infinities to a box no optimum can touch.
  double big = 1.0;
  for (const auto& c : m.cons) {
    double s = std::abs(c.rhs);
    for (const auto& [v, a] : c.coeffs)
      s += std::abs(a) * std::max(std::abs(m.vars[v].lo), std::abs(m.vars[v].hi));
    big = std::max(big, s);
  }
  big *= 4;
  for (auto& v : row_lo)
    if (v == -inf) v = -big;
  for (auto& v : row_hi)
    if (v == inf) v = big;
  std::vector<double> obj = m.objective;
  return BoundedLp(n, std::move(obj), std::move(cols), std::move(row_lo),
                   std::move(row_hi), std::move(lo), std::move(hi));
}

// Upper bound of the LP relaxation under partial variable fixings; empty if
// the fixings make the LP infeasible.
inline std::optional<double> lp_bound(
    const MilpModel& m, const std::vector<std::pair<int, double>>& fixings = {}) {
  BoundedLp lp = make_lp_relaxation(m);
  std::vector<double> lo(m.vars.size()), hi(m.vars.size());
  for (size_t j = 0; j < m.vars.size(); ++j) {
    lo[j] = m.vars[j].lo;
    hi[j] = m.vars[j].hi;
  }
  for (const auto& [v, x] : fixings) {
    lo[v] = x;
    hi[v] = x;
  }
  lp.set_bounds(lo, hi);
  LpResult r = lp.solve();
  if (r.status == LpResult::Status::Infeasible) return std::nullopt;
  return r.objective;
}

}  // namespace mm
