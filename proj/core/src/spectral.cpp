#include "ortho/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ortho/errors.hpp"

namespace ortho {

namespace {

// Eigenvalues within this distance of 1 are treated as part of the unit
// eigenspace when pinning the Perron vector.
constexpr double kUnitEigenvalueTol = 1e-10;

// Deterministic sign: the largest-magnitude entry is positive. Entries within
// rounding of the maximum count as tied and the first of them decides.
void fix_sign(Eigen::Ref<Vector> v) {
  const double best = v.cwiseAbs().maxCoeff();
  Index arg = 0;
  while (std::abs(v[arg]) < best * (1.0 - 1e-9)) ++arg;
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

SpectralDecomposition decompose(const StochasticKernel& p) {
  const Index n = p.size();
  const Vector& pi = p.pi();
  const Vector sqrt_pi = pi.cwiseSqrt();
  const Vector inv_sqrt_pi = sqrt_pi.cwiseInverse();

  Matrix a = sqrt_pi.asDiagonal() * p.matrix() * inv_sqrt_pi.asDiagonal();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8) {
    throw NotConjugateSymmetric("decompose: symmetric conjugate deviates by " + std::to_string(asym));
  }
  a = 0.5 * (a + a.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw Error("decompose: eigensolver failed");
  const Vector& raw_values = solver.eigenvalues();
  const Matrix& raw_vectors = solver.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
    const double ax = std::abs(raw_values[x]);
    const double ay = std::abs(raw_values[y]);
    if (ax != ay) return ax > ay;
    return raw_values[x] > raw_values[y];
  });

  Vector values(n);
  Matrix basis(n, n);  // orthonormal eigenvectors of a
  for (Index l = 0; l < n; ++l) {
    values[l] = raw_values[order[static_cast<std::size_t>(l)]];
    basis.col(l) = raw_vectors.col(order[static_cast<std::size_t>(l)]);
  }

  // Rotate the unit eigenspace so its first vector is exactly sqrt(pi).
  std::vector<Index> unit;
  for (Index l = 0; l < n; ++l) {
    if (std::abs(values[l] - 1.0) <= kUnitEigenvalueTol) unit.push_back(l);
  }
  if (unit.empty()) {
    // Perron value drifted beyond tolerance; pin column 0 regardless.
    unit.push_back(0);
  }
  {
    const Index m = static_cast<Index>(unit.size());
    Matrix block(n, m);
    for (Index c = 0; c < m; ++c) block.col(c) = basis.col(unit[static_cast<std::size_t>(c)]);
    const Vector perron = sqrt_pi / sqrt_pi.norm();
    Matrix rest = block - perron * (perron.transpose() * block);
    Matrix complement;
    if (m > 1) {
      Eigen::JacobiSVD<Matrix> svd(rest, Eigen::ComputeThinU);
      complement = svd.matrixU().leftCols(m - 1);
    }
    // Move the unit block to the front, keeping the remaining order.
    std::vector<Index> others;
    for (Index l = 0; l < n; ++l) {
      if (std::find(unit.begin(), unit.end(), l) == unit.end()) others.push_back(l);
    }
    Vector new_values(n);
    Matrix new_basis(n, n);
    new_values[0] = 1.0;
    new_basis.col(0) = perron;
    for (Index c = 1; c < m; ++c) {
      new_values[c] = values[unit[static_cast<std::size_t>(c)]];
      new_basis.col(c) = complement.col(c - 1);
    }
    Index w = m;
    for (Index l : others) {
      new_values[w] = values[l];
      new_basis.col(w) = basis.col(l);
      ++w;
    }
    values = std::move(new_values);
    basis = std::move(new_basis);
  }
  for (Index l = 1; l < n; ++l) fix_sign(basis.col(l));

  SpectralDecomposition out;
  out.eigenvalues = std::move(values);
  out.psi = inv_sqrt_pi.asDiagonal() * basis;
  out.phi = sqrt_pi.asDiagonal() * basis;
  out.pi = pi;
  return out;
}

Vector rescale_right_eigenvector(const Vector& v, const Vector& pi) {
  const double norm = (pi.cwiseSqrt().array() * v.array()).matrix().norm();
  if (!(norm > 0.0)) throw InvalidInput("rescale_right_eigenvector: zero vector");
  return v / norm;
}

DiffusionCoordinates diffusion_coordinates(const SpectralDecomposition& s, double t, Index m,
                                           bool drop_trivial) {
  const Index n = s.size();
  if (m < 1 || m > n) {
    throw InvalidInput("diffusion_coordinates: M must lie in [1, n], got " + std::to_string(m));
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("diffusion_coordinates: t must be >= 0");
  const bool integer_t = std::floor(t) == t;
  const Index first = drop_trivial ? 1 : 0;
  DiffusionCoordinates out;
  out.values.resize(n, m - first);
  for (Index l = first; l < m; ++l) {
    const double lambda = s.eigenvalues[l];
    double scale = 1.0;
    if (lambda >= 0.0 || integer_t) {
      scale = std::pow(lambda, t);
    } else {
      scale = std::pow(std::abs(lambda), t);
      out.abs_power = true;
    }
    out.values.col(l - first) = scale * s.psi.col(l);
  }
  return out;
}

double diffusion_distance_direct(const StochasticKernel& p, Index i, Index j) {
  const Index n = p.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidInput("diffusion_distance_direct: index out of range");
  if (i == j) return 0.0;
  double acc = 0.0;
  for (Index w = 0; w < n; ++w) {
    const double diff = p(i, w) - p(j, w);
    acc += diff * diff / p.pi()[w];
  }
  return acc;
}

Matrix squared_row_distances(const Matrix& coords) {
  const Index n = coords.rows();
  const Matrix ct = coords.transpose();
  Matrix out(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i) {
    out(i, i) = 0.0;
    for (Index j = 0; j < i; ++j) {
      const double v = (ct.col(i) - ct.col(j)).squaredNorm();
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix diffusion_distance_matrix(const Matrix& p, const Vector& pi) {
  const Matrix scaled = p * pi.cwiseSqrt().cwiseInverse().asDiagonal();
  return squared_row_distances(scaled);
}

Matrix diffusion_distance_matrix(const StochasticKernel& p) { return diffusion_distance_matrix(p.matrix(), p.pi()); }

Matrix diffusion_distance_truncated(const SpectralDecomposition& s, Index m) {
  if (m < 1 || m > s.size()) {
    throw InvalidInput("diffusion_distance_truncated: M must lie in [1, n], got " + std::to_string(m));
  }
  const Matrix coords = s.psi.leftCols(m) * s.eigenvalues.head(m).asDiagonal();
  return squared_row_distances(coords);
}

}  // namespace ortho
