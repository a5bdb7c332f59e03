#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "ortho/errors.hpp"
#include "ortho/orthogonalize.hpp"
#include "ortho/sinkhorn.hpp"

using namespace ortho;

namespace {

StochasticKernel kernel_of(const Matrix& k) { return row_normalize(SquareMatrix::affinity(k)); }

OrthoConfig absolute(double c2) {
  OrthoConfig cfg;
  cfg.c2 = c2;
  cfg.c2_mode = C2Mode::absolute;
  return cfg;
}

// Symmetric doubly stochastic matrix: Sinkhorn scaling of a random kernel.
Matrix random_doubly_stochastic(int n, std::uint64_t seed) {
  return symmetric_sinkhorn(oracle::random_symmetric_positive(n, seed, 0.2, 1.0), 1e-14, 100000).scaled;
}

// Symmetric direction with zero row and column sums.
Matrix ds_direction(int n, std::uint64_t seed) {
  const Matrix s = oracle::random_symmetric_positive(n, seed, -1.0, 1.0);
  const Matrix center = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
  return center * s * center;
}

Matrix permute(const Matrix& m, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m(perm[i], perm[j]);
  }
  return out;
}

}  // namespace

TEST(MisalignmentCost, Examples) {
  const StochasticKernel p = kernel_of((Matrix(2, 2) << 0.75, 0.25, 0.25, 0.75).finished());
  const Matrix d = p.matrix() * p.pi().cwiseSqrt().cwiseInverse().asDiagonal();
  EXPECT_EQ(misalignment_cost(d, 1, 1), 0.0);
  EXPECT_NEAR(misalignment_cost(d, 0, 1), 4.0, 1e-13);
  const Matrix same = Matrix::Constant(3, 3, 0.4);
  EXPECT_EQ(misalignment_cost(same, 0, 2), 0.0);
  EXPECT_THROW(misalignment_cost(d, 0, 5), InvalidInput);
}

TEST(MisalignmentCost, EqualsFourTimesDiffusionDistance) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 29);
    const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(n, seed));
    const Matrix d = p.matrix() * p.pi().cwiseSqrt().cwiseInverse().asDiagonal();
    const Matrix g = misalignment_cost_matrix(d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(g(i, j), 4.0 * diffusion_distance_direct(p, i, j), 1e-8);
        EXPECT_NEAR(misalignment_cost(d, i, j), g(i, j), 1e-12);
      }
    }
  }
}

TEST(OrthoFunctional, Examples) {
  const StochasticKernel p = kernel_of((Matrix(2, 2) << 0.75, 0.25, 0.25, 0.75).finished());
  EXPECT_NEAR(ortho_functional(p, p), 0.5, 1e-14);
  const StochasticKernel flat = kernel_of(Matrix::Ones(2, 2));
  EXPECT_EQ(ortho_functional(p, flat), 0.0);
}

TEST(OrthoFunctional, LinearInP) {
  const StochasticKernel pt = kernel_of(oracle::random_symmetric_positive(6, 1));
  const Matrix l = diffusion_distance_matrix(pt);
  const Matrix a = oracle::random_positive(6, 2);
  const Matrix b = oracle::random_positive(6, 3);
  EXPECT_NEAR(ortho_functional(2.0 * a + 3.0 * b, l), 2.0 * ortho_functional(a, l) + 3.0 * ortho_functional(b, l),
              1e-12);
  EXPECT_GE(ortho_functional(pt, pt), 0.0);
}

TEST(DsFunctional, UniformTwoByTwo) {
  EXPECT_NEAR(ds_functional(Matrix::Constant(2, 2, 0.5)), -2.0 / 3.0, 1e-15);
}

TEST(DsFunctional, PermutationInvariant) {
  const Matrix p = random_doubly_stochastic(7, 4);
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(9);
  std::shuffle(perm.begin(), perm.end(), gen);
  EXPECT_NEAR(ds_functional(permute(p, perm)), ds_functional(p), 1e-12);
}

TEST(DsFunctional, GateauxDerivativeIsDiffusionDistance) {
  // With the degree of a doubly stochastic kernel equal to one, the
  // derivative in direction u is sum_ij L(i,j) u(i,j) with L weighted by 1.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const Matrix p = random_doubly_stochastic(n, seed);
    const Matrix u = ds_direction(n, seed + 1000);
    const double delta = 1e-6;
    const double fd = (ds_functional(p + delta * u) - ds_functional(p - delta * u)) / (2.0 * delta);
    const Matrix l = diffusion_distance_matrix(p, Vector::Ones(n));
    const double exact = l.cwiseProduct(u).sum();
    EXPECT_LT(std::abs(fd - exact), 1e-4 * std::max(std::abs(exact), 1e-12)) << "seed " << seed;
  }
}

TEST(EffectiveC2, RelativeUsesMedianOfPositiveEntries) {
  Matrix l = Matrix::Zero(3, 3);
  l(0, 1) = l(1, 0) = 1.0;
  l(0, 2) = l(2, 0) = 3.0;
  l(1, 2) = l(2, 1) = 8.0;
  OrthoConfig cfg;
  cfg.c2 = 2.0;
  EXPECT_DOUBLE_EQ(effective_c2(cfg, l), 2.0 / 3.0);
  l(1, 2) = l(2, 1) = 0.0;
  EXPECT_DOUBLE_EQ(effective_c2(cfg, l), 2.0 / 2.0);
  EXPECT_DOUBLE_EQ(effective_c2(cfg, Matrix::Zero(3, 3)), 2.0);
  EXPECT_DOUBLE_EQ(effective_c2(absolute(5.0), l), 5.0);
}

TEST(OrthoStep, ZeroWeightIgnoresP) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(5, 2));
  const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(5, 3));
  const StochasticKernel out = ortho_step(q, p, absolute(0.0), 0.0);
  EXPECT_LT((out.matrix() - q.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OrthoStep, TwoStateExample) {
  const StochasticKernel q = kernel_of(Matrix::Ones(2, 2));
  const StochasticKernel p = kernel_of((Matrix(2, 2) << 0.9, 0.1, 0.1, 0.9).finished());
  EXPECT_NEAR(diffusion_distance_direct(p, 0, 1), 2.56, 1e-12);
  const StochasticKernel out = ortho_step(q, p, absolute(1.0), 1.0);
  EXPECT_NEAR(out(0, 0), 0.9283, 1e-4);
  EXPECT_NEAR(out(0, 1), 0.0717, 1e-4);
  EXPECT_NEAR(out(0, 0), 1.0 / (1.0 + std::exp(-2.56)), 1e-14);
}

TEST(OrthoStep, SymmetricPriorGivesSymmetricNumerator) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(8, 5));
  const StochasticKernel p = kernel_of(oracle::random_symmetric_positive(8, 6));
  const StochasticKernel out = ortho_step(q, p, absolute(0.7), 0.7);
  ASSERT_TRUE(out.symmetric_numerator().has_value());
  EXPECT_TRUE(is_symmetric(*out.symmetric_numerator(), 0.0));
  EXPECT_LT((out.matrix().transpose() * out.pi() - out.pi()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OrthoStep, RowUnderflow) {
  const StochasticKernel q = kernel_of(Matrix::Ones(2, 2));
  const StochasticKernel p = kernel_of((Matrix(2, 2) << 0.9, 0.1, 0.1, 0.9).finished());
  try {
    ortho_step(q, p, absolute(1e6), 1e6);
    FAIL() << "expected RowUnderflow";
  } catch (const RowUnderflow& e) {
    EXPECT_EQ(e.row(), 0u);
  }
}

TEST(OrthoStep, ExponentFloorClampsLargeDistances) {
  // Two pairs of identical points: within-pair distances are zero, so the
  // rows keep a live entry while cross-pair entries hit the floor.
  const double e = 0.01;
  const Matrix k = (Matrix(4, 4) << 1, 1, e, e, 1, 1, e, e, e, e, 1, 1, e, e, 1, 1).finished();
  const StochasticKernel q = kernel_of(Matrix::Ones(4, 4));
  const StochasticKernel p = kernel_of(k);
  const StochasticKernel out = ortho_step(q, p, absolute(1e6), 1e6);
  EXPECT_GT(out(0, 2), 0.0);
  EXPECT_LE(out(0, 2), 1e-299);
  EXPECT_NEAR(out(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out(0, 1), 0.5, 1e-15);
}

TEST(Sinkhorn, TwoByTwoClosedForm) {
  const double a = 0.7, b = 0.2;
  const Matrix n = (Matrix(2, 2) << a, b, b, a).finished();
  const SinkhornResult r = symmetric_sinkhorn(n);
  EXPECT_NEAR(r.scaled(0, 0), a / (a + b), 1e-12);
  EXPECT_NEAR(r.scaled(0, 1), b / (a + b), 1e-12);
  EXPECT_NEAR(r.scaled(1, 0), b / (a + b), 1e-12);
}

TEST(Sinkhorn, RandomInputsBecomeSymmetricDoublyStochastic) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 19);
    const SinkhornResult r = symmetric_sinkhorn(oracle::random_symmetric_positive(n, seed, 0.01, 5.0));
    EXPECT_TRUE(is_symmetric(r.scaled, 0.0));
    EXPECT_LT((r.scaled.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_LT((r.scaled.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_LE(r.max_deviation, 1e-10);
  }
}

TEST(Sinkhorn, IterationBudget) {
  EXPECT_THROW(symmetric_sinkhorn(oracle::random_symmetric_positive(10, 3, 1e-6, 1.0), 1e-15, 1), ConvergenceFailure);
}

TEST(OrthoStepDs, ZeroWeightOnDoublyStochasticPriorIsIdentity) {
  const Matrix ds = random_doubly_stochastic(6, 12);
  const StochasticKernel q = row_normalize(SquareMatrix::affinity(ds));
  OrthoConfig cfg = absolute(0.0);
  cfg.variant = Variant::doubly_stochastic;
  const Matrix out = ortho_step_ds(q, ds, cfg, 0.0);
  EXPECT_LT((out - ds).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OrthoStepDs, OutputIsSymmetricDoublyStochastic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(n, seed));
    const Matrix p = random_doubly_stochastic(n, seed + 50);
    OrthoConfig cfg = absolute(0.5);
    cfg.variant = Variant::doubly_stochastic;
    const Matrix out = ortho_step_ds(q, p, cfg, 0.5);
    EXPECT_TRUE(is_symmetric(out, 0.0));
    EXPECT_LT((out.rowwise().sum().array() - 1.0).abs().maxCoeff(), cfg.sinkhorn_tol);
    EXPECT_LT((out.colwise().sum().array() - 1.0).abs().maxCoeff(), cfg.sinkhorn_tol);
  }
}

TEST(OrthoStepDs, TwoByTwoMatchesClosedForm) {
  const StochasticKernel q = kernel_of((Matrix(2, 2) << 3, 1, 1, 3).finished());
  const Matrix p = (Matrix(2, 2) << 0.6, 0.4, 0.4, 0.6).finished();
  OrthoConfig cfg = absolute(0.3);
  cfg.variant = Variant::doubly_stochastic;
  const Matrix out = ortho_step_ds(q, p, cfg, 0.3);
  const double l = diffusion_distance_matrix(p, Vector::Constant(2, 0.5))(0, 1);
  const double a = 3.0, b = std::exp(-0.3 * l);
  EXPECT_NEAR(out(0, 0), a / (a + b), 1e-12);
  EXPECT_NEAR(out(0, 1), b / (a + b), 1e-12);
}

TEST(OrthoStepDs, RequiresSymmetricPrior) {
  const StochasticKernel q = row_normalize(SquareMatrix::positive(oracle::random_positive(4, 1)));
  OrthoConfig cfg = absolute(0.1);
  cfg.variant = Variant::doubly_stochastic;
  EXPECT_THROW(ortho_step_ds(q, random_doubly_stochastic(4, 2), cfg, 0.1), InvalidInput);
}

TEST(OrthoFixpoint, ZeroWeightConvergesImmediately) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(10, 7));
  const OrthoResult r = ortho_fixpoint(q, absolute(0.0));
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.iterations, 1u);
  EXPECT_LT((r.p_star.matrix() - r.p0.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(fixpoint_residual(q, r.p0, absolute(0.0), 0.0), 1e-14);
}

TEST(OrthoFixpoint, TraceIsConsistentAndIteratesStayAdmissible) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(15, 8));
  OrthoConfig cfg;
  cfg.c2 = 0.5;
  std::size_t observed = 0;
  const OrthoResult r = ortho_fixpoint(q, cfg, std::nullopt, [&](std::size_t k, const StochasticKernel& p) {
    ++observed;
    EXPECT_EQ(k, observed);
    EXPECT_TRUE((p.matrix().array() > 0).all());
    EXPECT_LT((p.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
  });
  const OrthoTrace& t = r.trace;
  EXPECT_EQ(observed, t.iterations);
  EXPECT_EQ(t.residuals.size(), t.iterations);
  EXPECT_EQ(t.functional_values.size(), t.iterations);
  EXPECT_EQ(t.spectral_sums.size(), t.iterations);
  EXPECT_EQ(t.restarts.size(), t.iterations);
  EXPECT_EQ(t.c2_history.size(), t.iterations);
  for (double v : t.residuals) EXPECT_TRUE(std::isfinite(v));
  ASSERT_TRUE(t.converged);
  EXPECT_LT(t.residuals.back(), cfg.tol);
  EXPECT_LT(fixpoint_residual(q, r.p_star, cfg, t.effective_c2), cfg.tol);
  EXPECT_NEAR(t.spectral_sums.back(), r.p_star.matrix().trace(), 1e-12);
}

TEST(OrthoFixpoint, SmallWeightContractsGeometrically) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 10 + static_cast<int>(seed);
    const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(n, seed));
    OrthoConfig cfg;
    cfg.c2 = 0.2;
    const OrthoResult r = ortho_fixpoint(q, cfg);
    ASSERT_TRUE(r.trace.converged);
    const auto& res = r.trace.residuals;
    ASSERT_GE(res.size(), 3u);
    for (std::size_t k = res.size() >= 6 ? res.size() - 5 : 1; k < res.size(); ++k) {
      if (res[k - 1] > 1e-14) EXPECT_LT(res[k] / res[k - 1], 1.0) << "seed " << seed << " k " << k;
    }
  }
}

TEST(OrthoFixpoint, ResidualProbeNearFixedPoint) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(12, 21));
  OrthoConfig cfg;
  cfg.c2 = 0.2;
  cfg.tol = 1e-13;
  const OrthoResult r = ortho_fixpoint(q, cfg);
  ASSERT_TRUE(r.trace.converged);
  const double c2 = r.trace.effective_c2;
  // Perturb p* inside the admissible set and compare the step size to delta.
  const Matrix bump = oracle::random_symmetric_positive(12, 99, 0.0, 1.0);
  for (double delta : {1e-4, 1e-5}) {
    Matrix num = r.p_star.symmetric_numerator()->array() * (1.0 + delta * bump.array()).array();
    const StochasticKernel perturbed = row_normalize(SquareMatrix::affinity(num));
    const double moved = (perturbed.matrix() - r.p_star.matrix()).cwiseAbs().maxCoeff();
    const double residual = fixpoint_residual(q, perturbed, cfg, c2);
    EXPECT_LT(residual, 2.0 * moved);
  }
}

TEST(OrthoFixpoint, TruncationAtFullRankMatchesExactPath) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const int n = 8 + static_cast<int>(seed) * 3;
    const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(n, seed + 300));
    OrthoConfig cfg;
    cfg.c2 = 0.1;  // contractive regime; larger weights can cycle
    const OrthoResult exact = ortho_fixpoint(q, cfg);
    cfg.truncation = n;
    const OrthoResult truncated = ortho_fixpoint(q, cfg);
    ASSERT_TRUE(exact.trace.converged) << "seed " << seed << ", " << exact.trace.iterations << " iterations";
    ASSERT_TRUE(truncated.trace.converged) << "seed " << seed << ", " << truncated.trace.iterations << " iterations";
    EXPECT_LT((exact.p_star.matrix() - truncated.p_star.matrix()).cwiseAbs().maxCoeff(), 10 * cfg.tol);
  }
}

TEST(OrthoFixpoint, PermutationEquivariance) {
  const int n = 12;
  const Matrix k = oracle::random_symmetric_positive(n, 77);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 gen(5);
  std::shuffle(perm.begin(), perm.end(), gen);
  OrthoConfig cfg;
  cfg.c2 = 0.5;
  const OrthoResult a = ortho_fixpoint(kernel_of(k), cfg);
  const OrthoResult b = ortho_fixpoint(kernel_of(permute(k, perm)), cfg);
  EXPECT_LT((permute(a.p_star.matrix(), perm) - b.p_star.matrix()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OrthoFixpoint, DoublyStochasticIteratesStayDoublyStochastic) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(9, 31));
  OrthoConfig cfg;
  cfg.c2 = 0.3;
  cfg.variant = Variant::doubly_stochastic;
  const OrthoResult r = ortho_fixpoint(q, cfg, std::nullopt, [&](std::size_t, const StochasticKernel& p) {
    EXPECT_TRUE(is_symmetric(p.matrix(), 0.0));
    EXPECT_LT((p.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff(), cfg.sinkhorn_tol);
    EXPECT_LT((p.matrix().colwise().sum().array() - 1.0).abs().maxCoeff(), cfg.sinkhorn_tol);
  });
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LT(fixpoint_residual(q, r.p_star, cfg, r.trace.effective_c2), cfg.tol);
}

TEST(OrthoFixpoint, IterationCapLeavesConvergedFalse) {
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(10, 4));
  OrthoConfig cfg;
  cfg.c2 = 0.5;
  cfg.max_iter = 2;
  const OrthoResult r = ortho_fixpoint(q, cfg);
  EXPECT_FALSE(r.trace.converged);
  EXPECT_EQ(r.trace.iterations, 2u);
}

TEST(OrthoFixpoint, UnderflowHalvesWeightAndEventuallyFails) {
  const StochasticKernel q = kernel_of(Matrix::Ones(2, 2));
  const StochasticKernel p0 = kernel_of((Matrix(2, 2) << 0.9, 0.1, 0.1, 0.9).finished());
  OrthoConfig cfg = absolute(1e6);  // 1e6 * 2.56 stays beyond the floor after three halvings
  cfg.max_restarts = 3;
  try {
    ortho_fixpoint(q, cfg, p0);
    FAIL() << "expected ConvergenceFailure";
  } catch (const ConvergenceFailure& e) {
    ASSERT_NE(e.trace(), nullptr);
    EXPECT_EQ(e.trace()->restart_count, 3);
    EXPECT_DOUBLE_EQ(e.trace()->initial_c2, 1e6);
    EXPECT_DOUBLE_EQ(e.trace()->effective_c2, 1.25e5);
    EXPECT_FALSE(e.trace()->converged);
  }
}

TEST(OrthoFixpoint, UnderflowRestartRecovers) {
  const StochasticKernel q = kernel_of(Matrix::Ones(2, 2));
  const StochasticKernel p0 = kernel_of((Matrix(2, 2) << 0.9, 0.1, 0.1, 0.9).finished());
  // 400 * 2.56 underflows from p0. At 200 the first step succeeds but lands
  // near the identity, where L = 4 and 200 * 4 underflows again; 100 holds.
  const OrthoResult r = ortho_fixpoint(q, absolute(400.0), p0);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.restart_count, 2);
  EXPECT_DOUBLE_EQ(r.trace.effective_c2, 100.0);
  EXPECT_EQ(r.trace.restarts.back(), 2);
}

TEST(OrthoFixpoint, GrowingResidualTriggersRestart) {
  // A very large weight on noisy data makes the early residuals grow.
  const StochasticKernel q = kernel_of(oracle::random_symmetric_positive(30, 5, 0.5, 1.0));
  OrthoConfig cfg;
  cfg.c2 = 50.0;
  cfg.divergence_window = 1;
  cfg.max_restarts = 30;
  const OrthoResult r = ortho_fixpoint(q, cfg);
  EXPECT_GT(r.trace.restart_count, 0);
  EXPECT_LT(r.trace.effective_c2, r.trace.initial_c2);
  EXPECT_EQ(r.trace.restarts.back(), r.trace.restart_count);
  for (std::size_t k = 1; k < r.trace.restarts.size(); ++k) {
    EXPECT_GE(r.trace.restarts[k], r.trace.restarts[k - 1]);
  }
}

TEST(OrthoConfig, Validation) {
  OrthoConfig cfg;
  EXPECT_NO_THROW(cfg.validate(5));
  cfg.truncation = 6;
  EXPECT_THROW(cfg.validate(5), InvalidInput);
  cfg = OrthoConfig{};
  cfg.c2 = -1.0;
  EXPECT_THROW(cfg.validate(5), InvalidInput);
  cfg = OrthoConfig{};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(5), InvalidInput);
  cfg = OrthoConfig{};
  cfg.max_iter = 0;
  EXPECT_THROW(cfg.validate(5), InvalidInput);
}

TEST(OrthoFixpoint, AsymmetricPriorUsesPowerIterationPi) {
  const StochasticKernel q = row_normalize(SquareMatrix::positive(oracle::random_positive(8, 13)));
  OrthoConfig cfg;
  cfg.c2 = 0.2;
  const OrthoResult r = ortho_fixpoint(q, cfg);
  EXPECT_FALSE(r.p_star.symmetric_numerator().has_value());
  EXPECT_LT((r.p_star.matrix().transpose() * r.p_star.pi() - r.p_star.pi()).cwiseAbs().maxCoeff(), 1e-8);
  cfg.truncation = 4;
  EXPECT_THROW(ortho_fixpoint(q, cfg), NotConjugateSymmetric);
}
