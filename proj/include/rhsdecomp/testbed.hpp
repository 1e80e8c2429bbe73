#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "rhsdecomp/linalg.hpp"
#include "rhsdecomp/problem.hpp"

namespace rhsd {

// Max-of-quadratics test problem (Shor & Shabashova):
//   phi(v) = max_i eta_i(v),  eta_i(v) = b_i sum_j (v_j - a_ij)^2,
// n = 5 variables, 10 quadratics, known optimum 22.60016.
struct ShorProblem {
  static constexpr std::size_t n = 5;
  static constexpr std::size_t m = 10;
  static constexpr double optimal_value = 22.60016;

  static constexpr std::array<double, m> b = {1.0, 5.0, 10.0,  2.0, 4.0,
                                              3.0, 1.7, 2.5, 6.0, 3.5};
  // a[i][j]: center of quadratic i
  static constexpr std::array<std::array<double, n>, m> a = {{
      {0, 0, 0, 0, 0},
      {2, 1, 1, 1, 3},
      {1, 2, 1, 1, 2},
      {1, 4, 1, 2, 2},
      {3, 2, 1, 0, 1},
      {0, 2, 1, 0, 1},
      {1, 1, 1, 1, 1},
      {1, 0, 1, 2, 1},
      {0, 0, 2, 1, 0},
      {1, 1, 2, 0, 0},
  }};

  static Vec start_point() { return {0.0, 0.0, 0.0, 0.0, 1.0}; }
};

struct ShorEvaluation {
  double value = 0.0;
  Vec subgradient;
  std::size_t argmax = 0;
};

// Value, one subgradient (2 b_i* (v - a_i*), lowest maximizing index),
// and the active quadratic.
inline ShorEvaluation shor_eval(const Vec& v) {
  ShorEvaluation out;
  out.value = -1.0;
  for (std::size_t i = 0; i < ShorProblem::m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < ShorProblem::n; ++j) {
      const double d = v[j] - ShorProblem::a[i][j];
      s += d * d;
    }
    const double eta = ShorProblem::b[i] * s;
    if (eta > out.value) {
      out.value = eta;
      out.argmax = i;
    }
  }
  out.subgradient.assign(ShorProblem::n, 0.0);
  for (std::size_t j = 0; j < ShorProblem::n; ++j)
    out.subgradient[j] =
        2.0 * ShorProblem::b[out.argmax] * (v[j] - ShorProblem::a[out.argmax][j]);
  return out;
}

// Deterministic generator for decomposable LP instances with m = 2,
// n_i = 2, strictly positive data built from shifted trig waves.
struct GeneratorSpec {
  std::size_t l = 2;
  double phase = 0.0;

  static constexpr std::size_t m = 2;
  static constexpr std::size_t n_per_block = 2;
};

inline DecomposableLP generate_declp(const GeneratorSpec& spec) {
  const std::size_t m = GeneratorSpec::m;
  const std::size_t n = GeneratorSpec::n_per_block;
  DecomposableLP p;
  p.b.resize(m);
  for (std::size_t j = 1; j <= m; ++j)
    p.b[j - 1] = static_cast<double>(spec.l) * (2.0 + 0.5 * std::sin(j + 1 + spec.phase));
  for (std::size_t i = 1; i <= spec.l; ++i) {
    Block blk;
    blk.c.resize(n);
    blk.A = Matrix(m, n);
    for (std::size_t k = 1; k <= n; ++k)
      blk.c[k - 1] = 2.0 + std::cos(static_cast<double>(i + k) + spec.phase);
    for (std::size_t j = 1; j <= m; ++j)
      for (std::size_t k = 1; k <= n; ++k)
        blk.A(j - 1, k - 1) =
            1.5 + std::sin(static_cast<double>(i * (j + 1) + k) + spec.phase);
    p.blocks.push_back(std::move(blk));
  }
  return p;
}

// Starting shares u0_i = b / l (the uniform split, always in U).
inline ShareAllocation initial_allocation(const DecomposableLP& p) {
  const std::size_t l = p.num_blocks();
  const std::size_t m = p.num_resources();
  ShareAllocation out{l, m, Vec(l * m, 0.0)};
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < m; ++j) out.u[i * m + j] = p.b[j] / static_cast<double>(l);
  return out;
}

}  // namespace rhsd
