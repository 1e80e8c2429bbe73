#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rhsdecomp/errors.hpp"
#include "rhsdecomp/linalg.hpp"
#include "rhsdecomp/problem.hpp"

namespace rhsd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, GreaterEq, Equal };

enum class LPStatus { Optimal, Infeasible, Unbounded };

// Dense LP in min form:
//   min <c, x>  s.t.  rows(r) . x  (<=, >=, =)  rhs(r),  lower <= x <= upper.
// Variable bounds default to [0, +inf).
struct LPInstance {
  Vec c;
  Matrix A;                    // one row per constraint
  std::vector<Relation> rel;   // per row
  Vec rhs;
  Vec lower;                   // defaults filled by normalize()
  Vec upper;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  void normalize() {
    if (lower.empty()) lower.assign(c.size(), 0.0);
    if (upper.empty()) upper.assign(c.size(), kInf);
  }

  void validate() const {
    const std::size_t n = c.size();
    const std::size_t k = rhs.size();
    if (A.rows() != k || (k > 0 && A.cols() != n))
      throw DimensionError("LPInstance: A shape does not match c/rhs");
    if (rel.size() != k) throw DimensionError("LPInstance: rel size mismatch");
    if (lower.size() != n || upper.size() != n)
      throw DimensionError("LPInstance: bound size mismatch");
    for (std::size_t j = 0; j < n; ++j) {
      if (lower[j] > upper[j]) throw InvalidProblem("LPInstance: lower > upper");
      if (std::isnan(lower[j]) || std::isnan(upper[j]))
        throw FormatError("LPInstance: NaN bound");
    }
    if (!all_finite(c) || !all_finite(rhs) || !all_finite(A.data()))
      throw FormatError("LPInstance: non-finite data");
  }
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Vec x;          // structural variables, valid when Optimal
  double objective = 0.0;
  Vec row_duals;  // y per row: reduced cost of column j is c_j - <y, A_j>
  int pivots = 0;
};

struct SimplexOptions {
  int max_pivots = 50000;
  double tol = 1e-10;
};

namespace detail {

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

// Two-phase dense simplex on the equality form with explicit variable
// bounds. Bland's rule picks the entering column; ratio-test ties break
// toward the lowest leaving variable index. Artificial columns stay in
// the tableau so B^{-1} (and hence the duals) can be read off at the end.
class SimplexTableau {
public:
  SimplexTableau(const LPInstance& inst, const SimplexOptions& opt)
      : opt_(opt), n_(inst.num_vars()), k_(inst.num_rows()) {
    // columns: [structural | slack | artificial]
    nreal_ = n_ + k_;
    ncols_ = nreal_ + k_;
    lower_.assign(ncols_, 0.0);
    upper_.assign(ncols_, kInf);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = inst.lower[j];
      upper_[j] = inst.upper[j];
    }
    for (std::size_t r = 0; r < k_; ++r) {
      const std::size_t s = n_ + r;
      switch (inst.rel[r]) {
        case Relation::LessEq:    lower_[s] = 0.0;   upper_[s] = kInf; break;
        case Relation::GreaterEq: lower_[s] = -kInf; upper_[s] = 0.0;  break;
        case Relation::Equal:     lower_[s] = 0.0;   upper_[s] = 0.0;  break;
      }
    }

    // original (unscaled) equality-form matrix, used for reduced costs
    orig_.assign(k_, Vec(nreal_, 0.0));
    for (std::size_t r = 0; r < k_; ++r) {
      for (std::size_t j = 0; j < n_; ++j) orig_[r][j] = inst.A(r, j);
      orig_[r][n_ + r] = 1.0;
    }

    // start every non-artificial variable at a finite bound (0 for free)
    state_.assign(ncols_, VarState::AtLower);
    for (std::size_t j = 0; j < nreal_; ++j) {
      if (std::isfinite(lower_[j])) state_[j] = VarState::AtLower;
      else if (std::isfinite(upper_[j])) state_[j] = VarState::AtUpper;
      else state_[j] = VarState::FreeZero;
    }

    Vec resid = inst.rhs;
    for (std::size_t r = 0; r < k_; ++r)
      for (std::size_t j = 0; j < nreal_; ++j)
        resid[r] -= orig_[r][j] * nonbasic_value(j);

    row_sign_.assign(k_, 1.0);
    tab_.assign(k_, Vec(ncols_, 0.0));
    xB_.assign(k_, 0.0);
    basis_.resize(k_);
    for (std::size_t r = 0; r < k_; ++r) {
      row_sign_[r] = resid[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < nreal_; ++j) tab_[r][j] = row_sign_[r] * orig_[r][j];
      tab_[r][nreal_ + r] = 1.0;  // artificial
      xB_[r] = row_sign_[r] * resid[r];
      basis_[r] = nreal_ + r;
      state_[nreal_ + r] = VarState::Basic;
    }
  }

  LPSolution solve(const LPInstance& inst) {
    LPSolution sol;

    // phase 1: minimize the artificial sum
    Vec cost(ncols_, 0.0);
    for (std::size_t r = 0; r < k_; ++r) cost[nreal_ + r] = 1.0;
    bool bounded = iterate(cost, /*phase1=*/true);
    if (!bounded) throw SolverError("phase 1 reported unbounded");  // cannot happen
    if (phase_value(cost) > 1e-7) {
      sol.status = LPStatus::Infeasible;
      sol.pivots = pivots_;
      return sol;
    }

    // pin artificials at zero for phase 2
    for (std::size_t r = 0; r < k_; ++r) {
      const std::size_t a = nreal_ + r;
      lower_[a] = upper_[a] = 0.0;
      if (state_[a] != VarState::Basic) state_[a] = VarState::AtLower;
    }

    cost.assign(ncols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = inst.c[j];
    bounded = iterate(cost, /*phase1=*/false);
    sol.pivots = pivots_;
    if (!bounded) {
      sol.status = LPStatus::Unbounded;
      return sol;
    }

    sol.status = LPStatus::Optimal;
    sol.x.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) sol.x[j] = value_of(j);
    sol.objective = dot(inst.c, sol.x);
    sol.row_duals = duals(cost);
    return sol;
  }

private:
  // y = c_B B^{-1}, read from the artificial columns
  Vec duals(const Vec& cost) const {
    Vec y(k_, 0.0);
    for (std::size_t s = 0; s < k_; ++s)
      if (cost[basis_[s]] != 0.0)
        for (std::size_t r = 0; r < k_; ++r)
          y[r] += cost[basis_[s]] * tab_[s][nreal_ + r];
    for (std::size_t r = 0; r < k_; ++r) y[r] *= row_sign_[r];  // undo row scaling
    return y;
  }

  double nonbasic_value(std::size_t j) const {
    switch (state_[j]) {
      case VarState::AtLower: return lower_[j];
      case VarState::AtUpper: return upper_[j];
      default: return 0.0;
    }
  }

  double value_of(std::size_t j) const {
    if (state_[j] == VarState::Basic) {
      for (std::size_t r = 0; r < k_; ++r)
        if (basis_[r] == j) return xB_[r];
    }
    return nonbasic_value(j);
  }

  double phase_value(const Vec& cost) const {
    double v = 0.0;
    for (std::size_t r = 0; r < k_; ++r) v += cost[basis_[r]] * xB_[r];
    return v;
  }

  double reduced_cost(std::size_t j, const Vec& cost, const Vec& y) const {
    double d = cost[j];
    if (j < nreal_) {
      for (std::size_t r = 0; r < k_; ++r)
        if (orig_[r][j] != 0.0) d -= y[r] * orig_[r][j];
    } else {
      const std::size_t r = j - nreal_;
      d -= y[r] * row_sign_[r];
    }
    return d;
  }

  // returns false on an unbounded ray
  bool iterate(const Vec& cost, bool phase1) {
    const double tol = opt_.tol;
    for (;;) {
      if (pivots_ > opt_.max_pivots)
        throw MaxPivotsExceeded("simplex pivot cap exceeded (" +
                                std::to_string(opt_.max_pivots) + ")");

      const Vec y = duals(cost);

      // Bland: smallest-index eligible entering column
      std::size_t enter = ncols_;
      double dir = 0.0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        if (lower_[j] == upper_[j]) continue;  // fixed
        const double d = reduced_cost(j, cost, y);
        if (state_[j] == VarState::AtLower && d < -tol) { enter = j; dir = 1.0; break; }
        if (state_[j] == VarState::AtUpper && d > tol) { enter = j; dir = -1.0; break; }
        if (state_[j] == VarState::FreeZero && std::abs(d) > tol) {
          enter = j;
          dir = d < 0.0 ? 1.0 : -1.0;
          break;
        }
      }
      if (enter == ncols_) return true;  // optimal for this cost

      Vec col(k_);
      for (std::size_t r = 0; r < k_; ++r) col[r] = tab_[r][enter];

      // ratio test; smallest step wins, ties to the lowest leaving index
      double step = upper_[enter] - lower_[enter];  // own bound-flip distance
      std::size_t leave_row = k_;
      double leave_bound = 0.0;
      for (std::size_t r = 0; r < k_; ++r) {
        const double rate = -col[r] * dir;  // d x_B(r) / d step
        const std::size_t bj = basis_[r];
        double lim = kInf, target = 0.0;
        if (rate > tol && std::isfinite(upper_[bj])) {
          lim = (upper_[bj] - xB_[r]) / rate;
          target = upper_[bj];
        } else if (rate < -tol && std::isfinite(lower_[bj])) {
          lim = (xB_[r] - lower_[bj]) / (-rate);
          target = lower_[bj];
        } else {
          continue;
        }
        if (lim < 0.0) lim = 0.0;  // degenerate basic beyond its bound
        bool take = false;
        if (lim < step - 1e-12) {
          take = true;
        } else if (lim <= step) {
          // tie: prefer a pivot over a bound flip, then the lowest index
          take = leave_row == k_ || bj < basis_[leave_row];
        }
        if (take) {
          step = lim;
          leave_row = r;
          leave_bound = target;
        }
      }

      if (!std::isfinite(step)) {
        if (phase1) throw SolverError("phase 1 unbounded ray");
        return false;
      }

      ++pivots_;
      if (leave_row == k_) {
        // bound flip, basis unchanged
        for (std::size_t r = 0; r < k_; ++r) xB_[r] -= col[r] * dir * step;
        state_[enter] =
            state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        continue;
      }

      // pivot enter into the basis at leave_row
      const double enter_val = nonbasic_value(enter) + dir * step;
      const std::size_t leave = basis_[leave_row];
      const double piv = tab_[leave_row][enter];
      if (std::abs(piv) < 1e-12) throw SolverError("numerically singular pivot");
      for (std::size_t j = 0; j < ncols_; ++j) tab_[leave_row][j] /= piv;
      for (std::size_t r = 0; r < k_; ++r) {
        if (r == leave_row) continue;
        const double f = tab_[r][enter];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < ncols_; ++j) tab_[r][j] -= f * tab_[leave_row][j];
        xB_[r] -= col[r] * dir * step;
      }
      xB_[leave_row] = enter_val;
      basis_[leave_row] = enter;
      state_[enter] = VarState::Basic;
      if (lower_[leave] == -kInf && upper_[leave] == kInf)
        state_[leave] = VarState::FreeZero;
      else
        state_[leave] = leave_bound == lower_[leave] ? VarState::AtLower : VarState::AtUpper;
    }
  }

  SimplexOptions opt_;
  std::size_t n_, k_, nreal_, ncols_;
  std::vector<Vec> orig_;
  std::vector<Vec> tab_;
  Vec xB_;
  std::vector<std::size_t> basis_;
  std::vector<VarState> state_;
  Vec lower_, upper_;
  Vec row_sign_;
  int pivots_ = 0;
};

}  // namespace detail

inline LPSolution solve_lp(LPInstance inst, const SimplexOptions& opt = {}) {
  inst.normalize();
  inst.validate();
  detail::SimplexTableau tab(inst, opt);
  return tab.solve(inst);
}

// Assembles the monolithic min-form LP for the whole decomposable
// problem and returns its optimum together with the joint-constraint
// multipliers lambda >= 0 (Lagrangian convention f + <lambda, sum h - b>).
struct ReferenceSolution {
  LPSolution lp;
  BlockPoint x;
  Vec lambda;       // length m, nonnegative
  double objective;  // f*
};

inline ReferenceSolution solve_full_reference(const DecomposableLP& p,
                                              const SimplexOptions& opt = {}) {
  p.validate();
  const std::size_t m = p.num_resources();
  const std::size_t n = p.total_vars();

  LPInstance inst;
  inst.c.reserve(n);
  inst.A = Matrix(m, n);
  std::size_t off = 0;
  for (const auto& blk : p.blocks) {
    for (std::size_t j = 0; j < blk.num_vars(); ++j) {
      inst.c.push_back(-blk.c[j]);
      for (std::size_t r = 0; r < m; ++r) inst.A(r, off + j) = blk.A(r, j);
    }
    off += blk.num_vars();
  }
  inst.rel.assign(m, Relation::LessEq);
  inst.rhs = p.b;

  LPSolution sol = solve_lp(std::move(inst), opt);
  if (sol.status == LPStatus::Unbounded)
    throw InvalidProblem("reference LP unbounded: invalid generator output");
  if (sol.status == LPStatus::Infeasible)
    throw InvalidProblem("reference LP infeasible");

  ReferenceSolution out;
  out.objective = sol.objective;
  out.lambda.assign(m, 0.0);
  // for <= rows in a min problem the equality-form dual is nonpositive
  for (std::size_t r = 0; r < m; ++r) out.lambda[r] = std::max(0.0, -sol.row_duals[r]);
  off = 0;
  for (const auto& blk : p.blocks) {
    out.x.x.emplace_back(sol.x.begin() + static_cast<std::ptrdiff_t>(off),
                         sol.x.begin() + static_cast<std::ptrdiff_t>(off + blk.num_vars()));
    off += blk.num_vars();
  }
  out.lp = std::move(sol);
  return out;
}

}  // namespace rhsd
