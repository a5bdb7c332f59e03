#pragma once

#include <Eigen/Dense>
#include <cstddef>

namespace ortho {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Tag describing what the entries of a SquareMatrix mean.
enum class MatrixKind { generic, distance, affinity };

const char* to_string(MatrixKind kind) noexcept;

/// Dense n x n matrix carrying a kind tag. The distance and affinity
/// factories validate their invariants; generic accepts any finite square
/// matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;

  static SquareMatrix generic(Matrix values);
  /// Entries >= 0, zero diagonal, symmetric (to 1e-12 relative).
  static SquareMatrix distance(Matrix values);
  /// Entries > 0 and symmetric (to 1e-12 relative).
  static SquareMatrix affinity(Matrix values);
  /// Entries > 0; symmetry not required (asymmetric bandwidth priors).
  static SquareMatrix positive(Matrix values);

  Index size() const noexcept { return values_.rows(); }
  MatrixKind kind() const noexcept { return kind_; }
  const Matrix& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }

  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  SquareMatrix(Matrix values, MatrixKind kind) : values_(std::move(values)), kind_(kind) {}

  Matrix values_;
  MatrixKind kind_ = MatrixKind::generic;
};

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

}  // namespace ortho
