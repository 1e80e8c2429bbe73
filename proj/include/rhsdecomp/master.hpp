#pragma once

#include <utility>

#include "rhsdecomp/penalty.hpp"
#include "rhsdecomp/problem.hpp"
#include "rhsdecomp/subgradient.hpp"

namespace rhsd {

// First-order oracle for the master function mu(u, t) over stacked
// share vectors.
inline Oracle make_master_oracle(const DecomposableLP& p, const PenaltyBound& t,
                                 const MasterOptions& opt = {}) {
  return [&p, t, opt](const Vec& v) {
    ShareAllocation u{p.num_blocks(), p.num_resources(), v};
    MasterEvaluation eval = eval_master(p, u, t, opt);
    return std::make_pair(eval.value, std::move(eval.subgradient));
  };
}

// Projection onto U = { u : sum_i u_i = b }.
inline Projector make_share_projector(const DecomposableLP& p) {
  const std::size_t l = p.num_blocks();
  const Vec b = p.b;
  return [l, b](const Vec& v) { return project_onto_U(v, l, b).u; };
}

}  // namespace rhsd
