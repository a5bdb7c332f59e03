#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ortho/errors.hpp"
#include "ortho/spectral.hpp"

using namespace ortho;

namespace {

StochasticKernel kernel_of(const Matrix& k) { return row_normalize(SquareMatrix::affinity(k)); }

StochasticKernel two_state() { return kernel_of((Matrix(2, 2) << 0.9, 0.1, 0.1, 0.9).finished()); }

void expect_decomposition_invariants(const StochasticKernel& p, const SpectralDecomposition& s) {
  const Index n = p.size();
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-10);
  EXPECT_LE(s.eigenvalues.cwiseAbs().maxCoeff(), 1.0 + 1e-10);
  for (Index l = 1; l < n; ++l) EXPECT_GE(std::abs(s.eigenvalues[l - 1]), std::abs(s.eigenvalues[l]) - 1e-15);
  EXPECT_LT((s.psi.col(0).array() - 1.0).abs().maxCoeff(), 1e-8);
  const Matrix gram = s.psi.transpose() * s.phi;
  EXPECT_LT((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
  const Matrix rebuilt = s.psi * s.eigenvalues.asDiagonal() * s.phi.transpose();
  EXPECT_LT((rebuilt - p.matrix()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(s.eigenvalues.sum(), p.matrix().trace(), 1e-8);
}

}  // namespace

TEST(Decompose, UniformKernelIsRankOne) {
  const StochasticKernel p = kernel_of(Matrix::Ones(5, 5));
  const SpectralDecomposition s = decompose(p);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  for (Index l = 1; l < 5; ++l) EXPECT_NEAR(s.eigenvalues[l], 0.0, 1e-12);
  EXPECT_LT((s.psi.col(0).array() - 1.0).abs().maxCoeff(), 1e-12);
  expect_decomposition_invariants(p, s);
}

TEST(Decompose, TwoStateChain) {
  const SpectralDecomposition s = decompose(two_state());
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 0.8, 1e-12);
  EXPECT_NEAR(s.psi(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(s.psi(1, 1), -1.0, 1e-12);
  expect_decomposition_invariants(two_state(), s);
}

TEST(Decompose, BlockDiagonalHasOneUnitEigenvaluePerBlock) {
  for (int blocks : {1, 2, 3, 5}) {
    Matrix k = Matrix::Constant(4 * blocks, 4 * blocks, kPositivityFloor);
    for (int b = 0; b < blocks; ++b) k.block(4 * b, 4 * b, 4, 4).setOnes();
    const StochasticKernel p = kernel_of(k);
    const SpectralDecomposition s = decompose(p);
    const auto unit = (s.eigenvalues.array() - 1.0).abs() < 1e-10;
    EXPECT_EQ(unit.count(), blocks);
    EXPECT_LT((s.psi.col(0).array() - 1.0).abs().maxCoeff(), 1e-8);
    expect_decomposition_invariants(p, s);
  }
}

TEST(Decompose, RandomKernelsSatisfyInvariants) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 29);
    const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(n, seed));
    expect_decomposition_invariants(p, decompose(p));
  }
}

TEST(Decompose, MatchesRescaledEigenvectorsOfP) {
  // Oracle: eigenvectors of the non-symmetric p from a general solver,
  // rescaled to ||sqrt(pi) v|| = 1, agree with psi up to sign.
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const int n = 6;
    const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(n, seed));
    const SpectralDecomposition s = decompose(p);
    Eigen::EigenSolver<Matrix> general(p.matrix());
    const Vector values = general.eigenvalues().real();
    const Matrix vectors = general.eigenvectors().real();
    for (Index l = 0; l < n; ++l) {
      Index match = 0;
      for (Index c = 1; c < n; ++c) {
        if (std::abs(values[c] - s.eigenvalues[l]) < std::abs(values[match] - s.eigenvalues[l])) match = c;
      }
      ASSERT_NEAR(values[match], s.eigenvalues[l], 1e-10);
      Vector v = rescale_right_eigenvector(vectors.col(match), p.pi());
      if (v.dot(s.psi.col(l)) < 0) v = -v;
      EXPECT_LT((v - s.psi.col(l)).cwiseAbs().maxCoeff(), 1e-8) << "seed " << seed << " l " << l;
    }
  }
}

TEST(Decompose, RejectsNonReversibleChain) {
  // A cyclic drift has a non-symmetric conjugate.
  const Matrix p = (Matrix(3, 3) << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1).finished();
  EXPECT_THROW(decompose(StochasticKernel::from_row_stochastic(p)), NotConjugateSymmetric);
}

TEST(Decompose, OrderingBreaksModulusTiesBySignedValue) {
  // Symmetric doubly stochastic: eigenvalues 1, 0.25 and -0.25.
  const Matrix p = (Matrix(3, 3) << 0.5, 0.25, 0.25, 0.25, 0.25, 0.5, 0.25, 0.5, 0.25).finished();
  const SpectralDecomposition s = decompose(StochasticKernel::from_row_stochastic(p));
  ASSERT_EQ(s.size(), 3);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  EXPECT_GE(s.eigenvalues[1], s.eigenvalues[2]);
  EXPECT_NEAR(std::abs(s.eigenvalues[1]), std::abs(s.eigenvalues[2]), 1e-12);
}

TEST(DiffusionCoordinates, TimeZeroIsPsi) {
  const SpectralDecomposition s = decompose(kernel_of(oracle::random_symmetric_positive(6, 2)));
  const DiffusionCoordinates c = diffusion_coordinates(s, 0.0, 6);
  EXPECT_LT((c.values - s.psi).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(c.abs_power);
}

TEST(DiffusionCoordinates, TwoStateAtTimeOne) {
  const DiffusionCoordinates c = diffusion_coordinates(decompose(two_state()), 1.0, 2);
  EXPECT_NEAR(c.values(0, 1), 0.8, 1e-12);
  EXPECT_NEAR(c.values(1, 1), -0.8, 1e-12);
}

TEST(DiffusionCoordinates, LargeTimeDecays) {
  const SpectralDecomposition s = decompose(kernel_of(oracle::random_symmetric_positive(8, 5)));
  const DiffusionCoordinates c = diffusion_coordinates(s, 400.0, 8, true);
  EXPECT_LT(c.values.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DiffusionCoordinates, DropTrivialRemovesOnlyTheConstantColumn) {
  const SpectralDecomposition s = decompose(kernel_of(oracle::random_symmetric_positive(7, 9)));
  const Matrix full = diffusion_coordinates(s, 1.0, 5).values;
  const Matrix dropped = diffusion_coordinates(s, 1.0, 5, true).values;
  ASSERT_EQ(dropped.cols(), 4);
  EXPECT_TRUE(dropped == full.rightCols(4));
  EXPECT_LT((full.col(0).array() - 1.0).abs().maxCoeff(), 1e-8);
}

TEST(DiffusionCoordinates, NegativeEigenvalueWithFractionalTime) {
  const Matrix p = (Matrix(2, 2) << 0.1, 0.9, 0.9, 0.1).finished();
  const SpectralDecomposition s = decompose(StochasticKernel::from_row_stochastic(p));
  ASSERT_NEAR(s.eigenvalues[1], -0.8, 1e-12);
  const DiffusionCoordinates integer = diffusion_coordinates(s, 1.0, 2);
  EXPECT_FALSE(integer.abs_power);
  EXPECT_NEAR(integer.values(0, 1), -0.8 * s.psi(0, 1), 1e-12);
  const DiffusionCoordinates half = diffusion_coordinates(s, 0.5, 2);
  EXPECT_TRUE(half.abs_power);
  EXPECT_NEAR(half.values(0, 1), std::sqrt(0.8) * s.psi(0, 1), 1e-12);
}

TEST(DiffusionCoordinates, RejectsBadArguments) {
  const SpectralDecomposition s = decompose(two_state());
  EXPECT_THROW(diffusion_coordinates(s, 1.0, 0), InvalidInput);
  EXPECT_THROW(diffusion_coordinates(s, 1.0, 3), InvalidInput);
  EXPECT_THROW(diffusion_coordinates(s, -1.0, 2), InvalidInput);
}

TEST(DiffusionDistance, DirectExamples) {
  const StochasticKernel p = kernel_of((Matrix(2, 2) << 0.75, 0.25, 0.25, 0.75).finished());
  EXPECT_EQ(diffusion_distance_direct(p, 0, 0), 0.0);
  EXPECT_NEAR(diffusion_distance_direct(p, 0, 1), 1.0, 1e-14);
  EXPECT_NEAR(diffusion_distance_direct(p, 1, 0), 1.0, 1e-14);
  EXPECT_THROW(diffusion_distance_direct(p, 0, 2), InvalidInput);
}

TEST(DiffusionDistance, IdenticalRowsAreAtDistanceZero) {
  Matrix k = oracle::random_symmetric_positive(5, 8);
  k.row(3) = k.row(1);
  k.col(3) = k.col(1);
  k(3, 3) = k(1, 1);
  k(1, 3) = k(3, 1) = k(1, 1);
  const StochasticKernel p = kernel_of(k);
  EXPECT_NEAR(diffusion_distance_direct(p, 1, 3), 0.0, 1e-15);
}

TEST(DiffusionDistance, MatrixMatchesTermByTermOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(9, seed));
    const Matrix l = diffusion_distance_matrix(p);
    for (int i = 0; i < 9; ++i) {
      EXPECT_EQ(l(i, i), 0.0);
      for (int j = 0; j < 9; ++j) {
        EXPECT_NEAR(l(i, j), oracle::diffusion_distance(p.matrix(), p.pi(), i, j), 1e-12);
        EXPECT_EQ(l(i, j), l(j, i));
      }
    }
  }
}

TEST(DiffusionDistance, TruncatedExamples) {
  const SpectralDecomposition s = decompose(two_state());
  EXPECT_TRUE((diffusion_distance_truncated(s, 1).array().abs() < 1e-20).all());
  const Matrix full = diffusion_distance_truncated(s, 2);
  EXPECT_NEAR(full(0, 1), diffusion_distance_direct(two_state(), 0, 1), 1e-12);
  EXPECT_THROW(diffusion_distance_truncated(s, 3), InvalidInput);
}

TEST(DiffusionDistance, TruncatedIsMonotoneInM) {
  const SpectralDecomposition s = decompose(kernel_of(oracle::random_symmetric_positive(12, 4)));
  Matrix previous = diffusion_distance_truncated(s, 1);
  for (Index m = 2; m <= 12; ++m) {
    const Matrix next = diffusion_distance_truncated(s, m);
    EXPECT_TRUE(((next - previous).array() >= -1e-15).all()) << "M=" << m;
    previous = next;
  }
}

TEST(DiffusionDistance, TruncatedAtFullRankEqualsDirect) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const int n = 2 + static_cast<int>(seed % 29);
    const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(n, seed));
    const Matrix direct = diffusion_distance_matrix(p);
    const Matrix truncated = diffusion_distance_truncated(decompose(p), n);
    EXPECT_LT((direct - truncated).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SquaredRowDistances, ExactDiagonalAndSymmetry) {
  const Matrix c = oracle::random_positive(15, 3).leftCols(4);
  const Matrix d = squared_row_distances(c);
  for (int i = 0; i < 15; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (int j = 0; j < 15; ++j) {
      EXPECT_EQ(d(i, j), d(j, i));
      EXPECT_NEAR(d(i, j), (c.row(i) - c.row(j)).squaredNorm(), 1e-14);
    }
  }
}
