#include "ortho/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ortho/errors.hpp"

namespace ortho {

namespace {

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput(std::string(what) + ": expected a non-empty square matrix, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

}  // namespace

const char* to_string(MatrixKind kind) noexcept {
  switch (kind) {
    case MatrixKind::distance: return "distance";
    case MatrixKind::affinity: return "affinity";
    case MatrixKind::generic: break;
  }
  return "generic";
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) return false;
    }
  }
  return true;
}

bool SquareMatrix::is_symmetric(double rel_tol) const { return ortho::is_symmetric(values_, rel_tol); }

SquareMatrix SquareMatrix::generic(Matrix values) {
  require_square_finite(values, "matrix");
  return {std::move(values), MatrixKind::generic};
}

SquareMatrix SquareMatrix::distance(Matrix values) {
  require_square_finite(values, "distance matrix");
  if ((values.array() < 0.0).any()) throw InvalidInput("distance matrix: negative entry");
  if ((values.diagonal().array() != 0.0).any())
    throw InvalidInput("distance matrix: non-zero diagonal");
  if (!ortho::is_symmetric(values)) throw InvalidInput("distance matrix: not symmetric");
  return {std::move(values), MatrixKind::distance};
}

SquareMatrix SquareMatrix::affinity(Matrix values) {
  require_square_finite(values, "affinity matrix");
  if ((values.array() <= 0.0).any()) throw InvalidInput("affinity matrix: non-positive entry");
  if (!ortho::is_symmetric(values)) throw InvalidInput("affinity matrix: not symmetric");
  return {std::move(values), MatrixKind::affinity};
}

SquareMatrix SquareMatrix::positive(Matrix values) {
  require_square_finite(values, "kernel matrix");
  if ((values.array() <= 0.0).any()) throw InvalidInput("kernel matrix: non-positive entry");
  const bool sym = ortho::is_symmetric(values);
  return {std::move(values), sym ? MatrixKind::affinity : MatrixKind::generic};
}

SquareMatrix pairwise_sq_distances(const Matrix& points) {
  if (points.rows() == 0 || points.cols() == 0) throw InvalidInput("points: empty matrix");
  if (!points.allFinite()) throw InvalidInput("points: non-finite coordinate");
  const Index n = points.rows();
  Matrix d(n, n);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Index j = 0; j < i; ++j) {
      const double v = (points.row(i) - points.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return SquareMatrix::distance(std::move(d));
}

BandwidthSet adaptive_bandwidths(const SquareMatrix& d, std::size_t n_neighbors) {
  const Index n = d.size();
  if (n_neighbors < 1 || static_cast<Index>(n_neighbors) > n - 1) {
    throw InvalidInput("adaptive_bandwidths: n_neighbors must lie in [1, n-1], got " +
                       std::to_string(n_neighbors) + " for n=" + std::to_string(n));
  }
  BandwidthSet out;
  out.n_neighbors = n_neighbors;
  out.c1.resize(n);
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) row[w++] = d(i, j);
    }
    auto kth = row.begin() + static_cast<std::ptrdiff_t>(n_neighbors - 1);
    std::nth_element(row.begin(), kth, row.end());
    double s = *kth;
    if (s <= 0.0) {
      double smallest_positive = std::numeric_limits<double>::infinity();
      for (double v : row) {
        if (v > 0.0) smallest_positive = std::min(smallest_positive, v);
      }
      if (!std::isfinite(smallest_positive)) {
        throw DegenerateNeighborhood("adaptive_bandwidths: point " + std::to_string(i) +
                                     " coincides with every other point");
      }
      s = smallest_positive;
    }
    out.c1[i] = 1.0 / (std::sqrt(2.0) * s);
  }
  return out;
}

SquareMatrix affinity_kernel(const SquareMatrix& d, const BandwidthSet& bandwidths, bool symmetrize) {
  const Index n = d.size();
  if (bandwidths.c1.size() != n) throw InvalidInput("affinity_kernel: bandwidth count mismatch");
  if (!bandwidths.c1.allFinite() || (bandwidths.c1.array() <= 0.0).any())
    throw InvalidInput("affinity_kernel: bandwidths must be finite and positive");
  Matrix k(n, n);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      k(i, j) = std::max(std::exp(-bandwidths.c1[i] * d(i, j)), kPositivityFloor);
    }
  }
  if (symmetrize) {
    Matrix s = 0.5 * (k + k.transpose());
    return SquareMatrix::affinity(std::move(s));
  }
  return SquareMatrix::positive(std::move(k));
}

SquareMatrix affinity_kernel(const SquareMatrix& d, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidInput("affinity_kernel: epsilon must be finite and positive");
  Matrix k = (-d.values().array() / epsilon).exp().max(kPositivityFloor).matrix();
  return SquareMatrix::affinity(std::move(k));
}

SquareMatrix alpha_normalize(const SquareMatrix& k, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidInput("alpha_normalize: alpha must be finite and >= 0");
  if (alpha == 0.0) return k;
  const Vector q = k.values().rowwise().sum();
  const Vector scale = q.array().pow(-alpha).matrix();
  Matrix out = (scale.asDiagonal() * k.values() * scale.asDiagonal()).array().max(kPositivityFloor).matrix();
  return SquareMatrix::positive(std::move(out));
}

StochasticKernel row_normalize(const SquareMatrix& k) {
  const Matrix& values = k.values();
  if (values.rows() == 0 || !values.allFinite() || (values.array() <= 0.0).any())
    throw InvalidInput("row_normalize: kernel must be finite and strictly positive");
  return row_normalize_unchecked(values, k.is_symmetric());
}

StochasticKernel row_normalize_unchecked(Matrix numerator, bool symmetric) {
  const Vector sums = numerator.rowwise().sum();
  Matrix p = sums.cwiseInverse().asDiagonal() * numerator;
  if (symmetric) {
    Vector pi = sums / sums.sum();
    return StochasticKernel(std::move(p), std::move(pi), std::move(numerator));
  }
  Vector pi = stationary_distribution_power(p);
  return StochasticKernel(std::move(p), std::move(pi), std::nullopt);
}

StochasticKernel as_doubly_stochastic_kernel(Matrix p) {
  if (p.rows() == 0 || p.rows() != p.cols() || !p.allFinite() || (p.array() <= 0.0).any())
    throw InvalidInput("doubly stochastic kernel: expected a positive finite square matrix");
  if (!is_symmetric(p)) throw InvalidInput("doubly stochastic kernel: not symmetric");
  if ((p.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-8)
    throw InvalidInput("doubly stochastic kernel: rows must sum to 1");
  Vector pi = stationary_distribution_closed_form(p);
  Matrix numerator = p;
  return StochasticKernel(std::move(p), std::move(pi), std::move(numerator));
}

StochasticKernel StochasticKernel::from_row_stochastic(Matrix p) {
  if (p.rows() == 0 || p.rows() != p.cols() || !p.allFinite())
    throw InvalidInput("stochastic kernel: expected a finite non-empty square matrix");
  if ((p.array() <= 0.0).any()) throw InvalidInput("stochastic kernel: entries must be positive");
  const Vector sums = p.rowwise().sum();
  if ((sums.array() - 1.0).abs().maxCoeff() > 1e-10)
    throw InvalidInput("stochastic kernel: rows must sum to 1");
  Vector pi = stationary_distribution_power(p);
  return StochasticKernel(std::move(p), std::move(pi), std::nullopt);
}

Vector stationary_distribution_closed_form(const Matrix& symmetric_numerator) {
  const Vector sums = symmetric_numerator.rowwise().sum();
  return sums / sums.sum();
}

Vector stationary_distribution_power(const Matrix& p, double tol, std::size_t max_iter) {
  const Index n = p.rows();
  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Matrix pt = p.transpose();
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vector next = pt * pi;
    next /= next.sum();
    const double residual = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (residual < tol) return pi;
  }
  throw ConvergenceFailure("stationary_distribution: power iteration did not converge in " +
                           std::to_string(max_iter) + " iterations");
}

Vector stationary_distribution(const Matrix& p, const Matrix* symmetric_numerator) {
  if (symmetric_numerator != nullptr) return stationary_distribution_closed_form(*symmetric_numerator);
  return stationary_distribution_power(p);
}

}  // namespace ortho
