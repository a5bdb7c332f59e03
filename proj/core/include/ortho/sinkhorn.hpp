#pragma once

#include <cstddef>

#include "ortho/types.hpp"

namespace ortho {

struct SinkhornResult {
  Matrix scaled;  // diag(d) K diag(d), symmetric and doubly stochastic
  Vector scaling;
  std::size_t iterations = 0;
  double max_deviation = 0.0;  // max |row sum - 1| of `scaled`
};

/// Symmetric Sinkhorn-Knopp scaling of a positive symmetric matrix using the
/// damped update d <- sqrt(d / (K d)). Stops once every row (and column) sum
/// is within `tol` of one; throws ConvergenceFailure after `max_iter` sweeps.
SinkhornResult symmetric_sinkhorn(const Matrix& k, double tol = 1e-10, std::size_t max_iter = 10000);

}  // namespace ortho
