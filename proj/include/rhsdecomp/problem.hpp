#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rhsdecomp/errors.hpp"
#include "rhsdecomp/linalg.hpp"

namespace rhsd {

// Tolerance for membership in the share-partition set U.
inline constexpr double kShareSumTol = 1e-9;

// One block of a decomposable linear program: prices c and the m x n_i
// consumption matrix A. The block objective is <-c, x> over x >= 0.
struct Block {
  Vec c;
  Matrix A;

  std::size_t num_vars() const { return c.size(); }
};

// min sum_i <-c_i, x_i>  s.t.  sum_i A_i x_i <= b,  x_i >= 0.
struct DecomposableLP {
  std::vector<Block> blocks;
  Vec b;

  std::size_t num_blocks() const { return blocks.size(); }
  std::size_t num_resources() const { return b.size(); }
  std::size_t total_vars() const {
    std::size_t n = 0;
    for (const auto& blk : blocks) n += blk.num_vars();
    return n;
  }

  void validate() const {
    if (blocks.empty()) throw InvalidProblem("problem has no blocks");
    const std::size_t m = b.size();
    if (m == 0) throw InvalidProblem("problem has no joint constraints");
    if (!all_finite(b)) throw FormatError("b contains non-finite entries");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& blk = blocks[i];
      if (blk.A.rows() != m)
        throw DimensionError("block " + std::to_string(i) + ": A has " +
                             std::to_string(blk.A.rows()) + " rows, expected " +
                             std::to_string(m));
      if (blk.A.cols() != blk.c.size())
        throw DimensionError("block " + std::to_string(i) +
                             ": A column count does not match c length");
      if (!all_finite(blk.c) || !all_finite(blk.A.data()))
        throw FormatError("block " + std::to_string(i) + " contains non-finite entries");
    }
  }
};

// Nonnegative per-constraint penalty weights t (dual-price units).
struct PenaltyBound {
  Vec t;

  explicit PenaltyBound(Vec weights) : t(std::move(weights)) {
    for (double v : t)
      if (v < 0.0) throw InvalidProblem("penalty weights must be nonnegative");
  }
};

// A point of the affine set U = { u : sum_i u_i = b }, stored as the
// full stacked (l*m)-vector. Shares may be negative.
struct ShareAllocation {
  std::size_t num_blocks = 0;
  std::size_t num_resources = 0;
  Vec u;  // length num_blocks * num_resources

  Vec block(std::size_t i) const {
    return Vec(u.begin() + static_cast<std::ptrdiff_t>(i * num_resources),
               u.begin() + static_cast<std::ptrdiff_t>((i + 1) * num_resources));
  }

  bool in_partition_set(const Vec& b, double tol = kShareSumTol) const {
    Vec sum(num_resources, 0.0);
    for (std::size_t i = 0; i < num_blocks; ++i)
      for (std::size_t j = 0; j < num_resources; ++j) sum[j] += u[i * num_resources + j];
    for (std::size_t j = 0; j < num_resources; ++j)
      if (std::abs(sum[j] - b[j]) > tol) return false;
    return true;
  }
};

// Stacked block variables x = (x_1, ..., x_l), each x_i >= 0.
struct BlockPoint {
  std::vector<Vec> x;

  std::size_t num_blocks() const { return x.size(); }
};

namespace detail {
inline void check_stacked_dims(std::size_t vec_len, std::size_t l, std::size_t m,
                               const char* who) {
  if (l == 0 || m == 0 || vec_len != l * m)
    throw DimensionError(std::string(who) + ": vector length " + std::to_string(vec_len) +
                         " does not split into " + std::to_string(l) + " blocks of " +
                         std::to_string(m));
}
}  // namespace detail

// Euclidean projection of a stacked (l*m)-vector onto U:
//   u_i = v_i - (1/l) (sum_s v_s - b).
inline ShareAllocation project_onto_U(const Vec& v, std::size_t l, const Vec& b) {
  const std::size_t m = b.size();
  detail::check_stacked_dims(v.size(), l, m, "project_onto_U");
  Vec excess(m, 0.0);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j) excess[j] += v[i * m + j];
  for (std::size_t j = 0; j < m; ++j) excess[j] = (excess[j] - b[j]) / static_cast<double>(l);
  ShareAllocation out{l, m, v};
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j) out.u[i * m + j] -= excess[j];
  return out;
}

// Projection of a direction onto the tangent subspace of U (block sums
// zero): g_i - (1/l) sum_s g_s per block.
inline Vec project_direction_onto_U0(const Vec& g, std::size_t l, std::size_t m) {
  detail::check_stacked_dims(g.size(), l, m, "project_direction_onto_U0");
  Vec mean(m, 0.0);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j) mean[j] += g[i * m + j];
  for (std::size_t j = 0; j < m; ++j) mean[j] /= static_cast<double>(l);
  Vec out = g;
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] -= mean[j];
  return out;
}

// sum_i <-c_i, x_i>
inline double full_objective(const DecomposableLP& p, const BlockPoint& x) {
  if (x.num_blocks() != p.num_blocks())
    throw DimensionError("full_objective: block count mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) v -= dot(p.blocks[i].c, x.x[i]);
  return v;
}

// [sum_i A_i x_i - b]_+ componentwise.
inline Vec joint_violation(const DecomposableLP& p, const BlockPoint& x) {
  if (x.num_blocks() != p.num_blocks())
    throw DimensionError("joint_violation: block count mismatch");
  Vec usage(p.num_resources(), 0.0);
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    Vec ai = p.blocks[i].A.apply(x.x[i]);
    for (std::size_t j = 0; j < usage.size(); ++j) usage[j] += ai[j];
  }
  return pos_part(usage - p.b);
}

}  // namespace rhsd
