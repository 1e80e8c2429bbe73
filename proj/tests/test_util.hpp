#pragma once

// Test-only oracles: dense Gaussian elimination and brute-force LP
// solving by basic-feasible-solution enumeration. Kept independent of
// the simplex implementation they certify.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "rhsdecomp/linalg.hpp"
#include "rhsdecomp/lp.hpp"

namespace testutil {

using rhsd::Vec;

// Solves M x = rhs by partial-pivot Gaussian elimination; nullopt when
// (numerically) singular.
inline std::optional<Vec> gauss_solve(std::vector<Vec> M, Vec rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-11) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = M[r][col] / M[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / M[i][i];
  return x;
}

struct BruteForceResult {
  bool feasible = false;
  double objective = 0.0;
  Vec x;
};

// Enumerates every basic solution (n active constraints drawn from the
// rows and the variable bounds) of a bounded-region LP and returns the
// best feasible one. All bounds must be finite for the enumeration to
// cover every vertex.
inline BruteForceResult brute_force_lp(const rhsd::LPInstance& inst, double tol = 1e-7) {
  const std::size_t n = inst.num_vars();
  const std::size_t k = inst.num_rows();

  // candidate active constraints: each row as equality, each finite bound
  struct Con {
    Vec a;
    double rhs;
  };
  std::vector<Con> cons;
  for (std::size_t r = 0; r < k; ++r) {
    Con c;
    c.a.resize(n);
    for (std::size_t j = 0; j < n; ++j) c.a[j] = inst.A(r, j);
    c.rhs = inst.rhs[r];
    cons.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(inst.lower[j])) {
      Con c;
      c.a.assign(n, 0.0);
      c.a[j] = 1.0;
      c.rhs = inst.lower[j];
      cons.push_back(std::move(c));
    }
    if (std::isfinite(inst.upper[j]) && inst.upper[j] != inst.lower[j]) {
      Con c;
      c.a.assign(n, 0.0);
      c.a[j] = 1.0;
      c.rhs = inst.upper[j];
      cons.push_back(std::move(c));
    }
  }

  auto feasible = [&](const Vec& x) {
    for (std::size_t r = 0; r < k; ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += inst.A(r, j) * x[j];
      switch (inst.rel[r]) {
        case rhsd::Relation::LessEq:
          if (lhs > inst.rhs[r] + tol) return false;
          break;
        case rhsd::Relation::GreaterEq:
          if (lhs < inst.rhs[r] - tol) return false;
          break;
        case rhsd::Relation::Equal:
          if (std::abs(lhs - inst.rhs[r]) > tol) return false;
          break;
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] < inst.lower[j] - tol || x[j] > inst.upper[j] + tol) return false;
    return true;
  };

  BruteForceResult best;
  std::vector<std::size_t> pick(n);
  // iterate over all n-subsets of cons
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  const std::size_t total = cons.size();
  if (total < n) return best;
  for (;;) {
    std::vector<Vec> M(n, Vec(n));
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      M[i] = cons[idx[i]].a;
      rhs[i] = cons[idx[i]].rhs;
    }
    if (auto x = gauss_solve(std::move(M), std::move(rhs)); x && feasible(*x)) {
      const double obj = rhsd::dot(inst.c, *x);
      if (!best.feasible || obj < best.objective) {
        best.feasible = true;
        best.objective = obj;
        best.x = *x;
      }
    }
    // next combination
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (idx[i] != i + total - n) {
        ++idx[i];
        for (std::size_t j2 = i + 1; j2 < n; ++j2) idx[j2] = idx[j2 - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
  }
}

// Random bounded LP with rows <= / >= / = and finite box bounds.
inline rhsd::LPInstance random_bounded_lp(std::mt19937_64& rng, std::size_t max_rows = 5,
                                          std::size_t max_vars = 6) {
  std::uniform_int_distribution<std::size_t> nrows(1, max_rows), nvars(1, max_vars);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), rhsd_(-1.0, 3.0);
  std::uniform_int_distribution<int> relpick(0, 9);
  const std::size_t k = nrows(rng), n = nvars(rng);
  rhsd::LPInstance inst;
  inst.c.resize(n);
  for (auto& v : inst.c) v = coef(rng);
  inst.A = rhsd::Matrix(k, n);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < n; ++j) inst.A(r, j) = coef(rng);
  inst.rhs.resize(k);
  for (auto& v : inst.rhs) v = rhsd_(rng);
  inst.rel.resize(k);
  for (auto& rel : inst.rel) {
    const int p = relpick(rng);
    rel = p < 6 ? rhsd::Relation::LessEq
                : (p < 9 ? rhsd::Relation::GreaterEq : rhsd::Relation::Equal);
  }
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, 4.0);
  return inst;
}

}  // namespace testutil
