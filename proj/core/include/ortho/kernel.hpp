#pragma once

#include <cstddef>
#include <optional>

#include "ortho/types.hpp"

namespace ortho {

/// Lower clamp applied to kernel entries after exponentials.
inline constexpr double kPositivityFloor = 1e-300;

/// Row-stochastic, strictly positive Markov kernel with its stationary
/// distribution. When the kernel came from row-normalizing a symmetric
/// matrix, that matrix is kept so pi is available in closed form.
class StochasticKernel {
 public:
  /// Wraps an already row-stochastic matrix; pi is found by power iteration.
  static StochasticKernel from_row_stochastic(Matrix p);

  Index size() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Vector& pi() const noexcept { return pi_; }
  const std::optional<Matrix>& symmetric_numerator() const noexcept { return numerator_; }
  double operator()(Index i, Index j) const { return matrix_(i, j); }

 private:
  friend StochasticKernel row_normalize(const SquareMatrix& k);
  friend StochasticKernel row_normalize_unchecked(Matrix numerator, bool symmetric);
  friend StochasticKernel as_doubly_stochastic_kernel(Matrix p);

  StochasticKernel(Matrix matrix, Vector pi, std::optional<Matrix> numerator)
      : matrix_(std::move(matrix)), pi_(std::move(pi)), numerator_(std::move(numerator)) {}

  Matrix matrix_;
  Vector pi_;
  std::optional<Matrix> numerator_;
};

struct BandwidthSet {
  Vector c1;  // per-point inverse squared scale
  std::size_t n_neighbors = 0;
};

/// D(i,j) = sum_k (x_ik - x_jk)^2, one row of `points` per point.
SquareMatrix pairwise_sq_distances(const Matrix& points);

/// c1[i] = 1/(sqrt(2) s_i), s_i the n_neighbors-th smallest off-diagonal
/// entry of row i. If s_i is zero (duplicates) the smallest positive entry of
/// the row is used instead; a row with no positive entry throws
/// DegenerateNeighborhood.
BandwidthSet adaptive_bandwidths(const SquareMatrix& d, std::size_t n_neighbors);

/// K(i,j) = exp(-c1[i] D(i,j)), optionally replaced by (K + K^T)/2.
SquareMatrix affinity_kernel(const SquareMatrix& d, const BandwidthSet& bandwidths,
                             bool symmetrize = true);

/// K(i,j) = exp(-D(i,j)/epsilon).
SquareMatrix affinity_kernel(const SquareMatrix& d, double epsilon);

/// K'(i,j) = K(i,j) / (q_i^alpha q_j^alpha) with q the row sums of K.
SquareMatrix alpha_normalize(const SquareMatrix& k, double alpha);

/// Divides each row by its sum. A symmetric input is retained as the
/// numerator of the result.
StochasticKernel row_normalize(const SquareMatrix& k);

/// Internal fast path for iterates whose numerator is known to be positive
/// and finite; skips the validation pass of row_normalize.
StochasticKernel row_normalize_unchecked(Matrix numerator, bool symmetric);

/// Wraps a symmetric doubly stochastic matrix without renormalizing it; the
/// matrix doubles as its own symmetric numerator.
StochasticKernel as_doubly_stochastic_kernel(Matrix p);

/// pi(i) = sum_j K(i,j) / sum_ij K(i,j).
Vector stationary_distribution_closed_form(const Matrix& symmetric_numerator);

/// Left Perron vector of a row-stochastic matrix by power iteration on p^T,
/// stopping when ||p^T pi - pi||_1 < tol. Throws ConvergenceFailure.
Vector stationary_distribution_power(const Matrix& p, double tol = 1e-12,
                                     std::size_t max_iter = 1'000'000);

/// Closed form when a symmetric numerator is given, power iteration otherwise.
Vector stationary_distribution(const Matrix& p, const Matrix* symmetric_numerator = nullptr);

}  // namespace ortho
