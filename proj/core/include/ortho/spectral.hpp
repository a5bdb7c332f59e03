#pragma once

#include "ortho/kernel.hpp"
#include "ortho/types.hpp"

namespace ortho {

/// Bi-orthogonal eigensystem of a reversible Markov kernel p.
///
/// Column l of `psi` is the right eigenvector psi_l (p psi_l = lambda_l psi_l)
/// normalized so that ||sqrt(pi) psi_l||_2 = 1; column l of `phi` is the
/// left eigenvector phi_l = pi * psi_l, so that sum_x psi_j(x) phi_i(x) =
/// delta_ij and p(x,y) = sum_l lambda_l psi_l(x) phi_l(y).
///
/// Eigenvalues are ordered by descending |lambda|, exact ties broken by the
/// signed value (larger first). The Perron pair lambda_1 = 1, psi_1 = 1 is
/// always column 0, even when the unit eigenvalue is repeated.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix psi;
  Matrix phi;
  Vector pi;

  Index size() const noexcept { return eigenvalues.size(); }
};

/// Eigendecomposes the symmetric conjugate a = diag(sqrt(pi)) p
/// diag(1/sqrt(pi)). Throws NotConjugateSymmetric if a deviates from
/// symmetry by more than 1e-8.
SpectralDecomposition decompose(const StochasticKernel& p);

/// Rescales an eigenvector of p returned with unit L2 norm to the
/// psi-normalization: psi = v / ||sqrt(pi) v||_2.
Vector rescale_right_eigenvector(const Vector& v, const Vector& pi);

struct DiffusionCoordinates {
  Matrix values;           // n x (M or M-1)
  bool abs_power = false;  // a negative eigenvalue was raised to a non-integer t
};

/// Column l is lambda_l^t psi_l for the M leading eigenpairs. With
/// drop_trivial the constant first column is omitted. For negative lambda
/// and integer t the sign is kept; for non-integer t |lambda|^t is used and
/// `abs_power` is set.
DiffusionCoordinates diffusion_coordinates(const SpectralDecomposition& s, double t, Index m,
                                           bool drop_trivial = false);

/// L_p(i,j) = sum_w (p(i,w) - p(j,w))^2 / pi(w).
double diffusion_distance_direct(const StochasticKernel& p, Index i, Index j);

/// All pairs of diffusion_distance_direct; symmetric with zero diagonal.
Matrix diffusion_distance_matrix(const StochasticKernel& p);

/// Same distance for an arbitrary row-stochastic matrix and weight vector.
Matrix diffusion_distance_matrix(const Matrix& p, const Vector& pi);

/// L_{p,M}(i,j) = sum_{l<M} lambda_l^2 (psi_l(i) - psi_l(j))^2.
Matrix diffusion_distance_truncated(const SpectralDecomposition& s, Index m);

/// Squared Euclidean distances between rows of `coords`, symmetric with an
/// exact zero diagonal and clamped at zero.
Matrix squared_row_distances(const Matrix& coords);

}  // namespace ortho
