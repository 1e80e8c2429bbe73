#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rhsdecomp/errors.hpp"
#include "rhsdecomp/linalg.hpp"
#include "rhsdecomp/lp.hpp"
#include "rhsdecomp/problem.hpp"

namespace rhsd {

// One penalized block evaluation: value mu_i, the bounded dual solution
// y in [0, t] (so -y is a subgradient of mu_i at u_i), and the primal
// block minimizer x.
struct BlockEvaluation {
  double mu = 0.0;
  Vec y;
  Vec x;
};

struct MasterEvaluation {
  double value = 0.0;
  Vec subgradient;                      // stacked -y_i, length l*m
  std::vector<BlockEvaluation> blocks;  // fixed block order
};

struct CalibrationResult {
  Vec lambda_star;
  PenaltyBound t;
  double f_star;
};

// Penalized block value through the bounded dual LP:
//   min <u_i, y>  s.t.  A_i^T y >= c_i,  0 <= y <= t.
// mu_i = -<y', u_i>; the dual LP's row multipliers recover the primal x_i.
inline BlockEvaluation eval_mu_block(const Block& blk, const Vec& u_i,
                                     const PenaltyBound& t, int block_index = 0,
                                     const SimplexOptions& opt = {}) {
  const std::size_t m = t.t.size();
  const std::size_t n = blk.num_vars();
  if (u_i.size() != m || blk.A.rows() != m)
    throw DimensionError("eval_mu_block: resource dimension mismatch");

  LPInstance inst;
  inst.c = u_i;
  inst.A = Matrix(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < m; ++j) inst.A(r, j) = blk.A(j, r);
  inst.rel.assign(n, Relation::GreaterEq);
  inst.rhs = blk.c;
  inst.lower.assign(m, 0.0);
  inst.upper = t.t;

  LPSolution sol = solve_lp(std::move(inst), opt);
  if (sol.status == LPStatus::Infeasible)
    throw InvalidPenaltyBound(
        block_index, "penalty weight t too small: bounded dual infeasible for block " +
                         std::to_string(block_index));
  if (sol.status != LPStatus::Optimal)
    throw SolverError("bounded dual LP not solved for block " + std::to_string(block_index));

  BlockEvaluation out;
  out.y = sol.x;
  out.mu = -sol.objective;
  out.x = sol.row_duals;  // multipliers of A^T y >= c are the primal outputs
  for (double& v : out.x) v = std::max(0.0, v);
  return out;
}

// Cross-check path: the penalized block problem as an epigraph LP,
//   min -<c, x> + <t, z>  s.t.  A x - z <= u_i,  x >= 0,  z >= 0.
inline double eval_mu_block_primal(const Block& blk, const Vec& u_i, const PenaltyBound& t,
                                   const SimplexOptions& opt = {}) {
  const std::size_t m = t.t.size();
  const std::size_t n = blk.num_vars();
  if (u_i.size() != m || blk.A.rows() != m)
    throw DimensionError("eval_mu_block_primal: resource dimension mismatch");

  LPInstance inst;
  inst.c.reserve(n + m);
  for (std::size_t j = 0; j < n; ++j) inst.c.push_back(-blk.c[j]);
  for (std::size_t j = 0; j < m; ++j) inst.c.push_back(t.t[j]);
  inst.A = Matrix(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) inst.A(r, j) = blk.A(r, j);
    inst.A(r, n + r) = -1.0;
  }
  inst.rel.assign(m, Relation::LessEq);
  inst.rhs = u_i;

  LPSolution sol = solve_lp(std::move(inst), opt);
  if (sol.status == LPStatus::Unbounded)
    throw SolverError("penalized block LP unbounded (should not happen for c >= 0, t >= 0)");
  if (sol.status != LPStatus::Optimal)
    throw SolverError("penalized block LP not solved");
  return sol.objective;
}

struct MasterOptions {
  SimplexOptions simplex;
  // when set, every evaluation is re-done through the primal epigraph LP
  // and a mismatch beyond cross_check_tol raises SolverError
  bool cross_check = false;
  double cross_check_tol = 1e-6;
};

// mu(u, t) = sum_i mu_i(u_i, t); subgradient is the stack of -y_i.
inline MasterEvaluation eval_master(const DecomposableLP& p, const ShareAllocation& u,
                                    const PenaltyBound& t, const MasterOptions& opt = {}) {
  const std::size_t l = p.num_blocks();
  const std::size_t m = p.num_resources();
  if (u.num_blocks != l || u.num_resources != m)
    throw DimensionError("eval_master: allocation shape mismatch");

  MasterEvaluation out;
  out.subgradient.assign(l * m, 0.0);
  out.blocks.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    Vec u_i = u.block(i);
    BlockEvaluation be =
        eval_mu_block(p.blocks[i], u_i, t, static_cast<int>(i), opt.simplex);
    if (opt.cross_check) {
      const double primal = eval_mu_block_primal(p.blocks[i], u_i, t, opt.simplex);
      if (std::abs(primal - be.mu) > opt.cross_check_tol)
        throw SolverError("block " + std::to_string(i) +
                          ": primal/dual value mismatch " + std::to_string(be.mu) +
                          " vs " + std::to_string(primal));
    }
    out.value += be.mu;
    for (std::size_t j = 0; j < m; ++j) out.subgradient[i * m + j] = -be.y[j];
    out.blocks.push_back(std::move(be));
  }
  return out;
}

// t_j = 2 lambda*_j + margin, strictly dominating the reference multipliers.
inline CalibrationResult calibrate_penalty(const DecomposableLP& p, double margin = 1.0,
                                           const SimplexOptions& opt = {}) {
  ReferenceSolution ref = solve_full_reference(p, opt);
  Vec t = ref.lambda;
  for (double& v : t) v = 2.0 * v + margin;
  return CalibrationResult{ref.lambda, PenaltyBound(std::move(t)), ref.objective};
}

// Extracts the stacked block minimizers from a master evaluation.
inline BlockPoint recover_primal(const MasterEvaluation& eval) {
  BlockPoint out;
  out.x.reserve(eval.blocks.size());
  for (const auto& be : eval.blocks) out.x.push_back(be.x);
  return out;
}

// Uniform bound C = sqrt(l) ||t|| on master subgradient norms.
inline double subgradient_norm_bound(std::size_t l, const PenaltyBound& t) {
  return std::sqrt(static_cast<double>(l)) * norm2(t.t);
}

// Optimal share allocation built from a reference solution:
//   u*_i = (1/l)[b - sum_s A_s x*_s] + A_i x*_i.
inline ShareAllocation optimal_shares(const DecomposableLP& p, const BlockPoint& x_star) {
  const std::size_t l = p.num_blocks();
  const std::size_t m = p.num_resources();
  std::vector<Vec> usage(l);
  Vec total(m, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    usage[i] = p.blocks[i].A.apply(x_star.x[i]);
    for (std::size_t j = 0; j < m; ++j) total[j] += usage[i][j];
  }
  ShareAllocation out{l, m, Vec(l * m, 0.0)};
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j)
      out.u[i * m + j] = (p.b[j] - total[j]) / static_cast<double>(l) + usage[i][j];
  return out;
}

}  // namespace rhsd
