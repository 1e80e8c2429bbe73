#pragma once

#include <stdexcept>
#include <string>

namespace rhsd {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simplex pivot cap exceeded (likely cycling or pathological degeneracy).
struct MaxPivotsExceeded : SolverError {
  using SolverError::SolverError;
};

// Penalty weight t is too small: the bounded dual block problem is
// infeasible, i.e. the penalized block problem is unbounded below.
struct InvalidPenaltyBound : SolverError {
  explicit InvalidPenaltyBound(int block, const std::string& what)
      : SolverError(what), block_index(block) {}
  int block_index;
};

struct InvalidProblem : SolverError {
  using SolverError::SolverError;
};

}  // namespace rhsd
