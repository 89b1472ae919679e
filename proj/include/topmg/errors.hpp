#pragma once

#include <stdexcept>
#include <string>

namespace topmg {

// Bad user-facing configuration (mesh sizes, fractions, config files).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix/grid dimensions between operands.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base for failures of the numerical methods themselves.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-positive pivot during factorization or a breakdown direction in CG.
struct DefinitenessError : NumericError {
  explicit DefinitenessError(const std::string& what, int row_index = -1)
      : NumericError(what), row(row_index) {}
  int row;
};

// Matrix splitting is unusable (zero diagonal entry).
struct SplittingError : NumericError {
  using NumericError::NumericError;
};

// Preconditioner turned out indefinite inside PCG.
struct PreconditionerError : NumericError {
  using NumericError::NumericError;
};

// Lagrange-multiplier bisection could not meet a volume target.
struct MultiplierError : NumericError {
  using NumericError::NumericError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace topmg
