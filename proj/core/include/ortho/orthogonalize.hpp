#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ortho/kernel.hpp"
#include "ortho/spectral.hpp"
#include "ortho/types.hpp"

namespace ortho {

enum class C2Mode { absolute, relative };
enum class Variant { row_stochastic, doubly_stochastic };

const char* to_string(C2Mode mode) noexcept;
const char* to_string(Variant variant) noexcept;

struct OrthoConfig {
  /// Orthogonalization weight. In relative mode the effective weight is
  /// c2 / median(positive entries of L_{p0}).
  double c2 = 1.0;
  C2Mode c2_mode = C2Mode::relative;
  Variant variant = Variant::row_stochastic;
  /// Number of leading eigenpairs used for L; nullopt means the exact
  /// (untruncated) distance.
  std::optional<Index> truncation;
  double tol = 1e-8;
  std::size_t max_iter = 200;
  double sinkhorn_tol = 1e-10;
  std::size_t sinkhorn_max_iter = 10000;
  double exponent_floor = -700.0;
  /// Halve-and-restart budget on row underflow or a growing residual.
  int max_restarts = 6;
  /// A restart is triggered once the residual has grown this many
  /// iterations in a row.
  int divergence_window = 5;

  /// Throws InvalidInput if a field is out of range (for kernels of size n).
  void validate(Index n) const;
};

struct OrthoTrace {
  std::vector<double> residuals;          // ||p_{k+1} - p_k||_inf
  std::vector<double> functional_values;  // O_{p_k}(p_{k+1})
  std::vector<double> spectral_sums;      // sum_l lambda_l(p_{k+1}) = trace
  std::vector<int> restarts;              // restarts performed before iteration k
  std::vector<double> c2_history;         // effective c2 used at iteration k
  bool converged = false;
  std::size_t iterations = 0;
  double initial_c2 = 0.0;    // effective c2 before any restart
  double effective_c2 = 0.0;  // effective c2 of the final attempt
  int restart_count = 0;
};

/// G(i,j) = 4 sum_w (d(i,w) - d(j,w))^2.
double misalignment_cost(const Matrix& d, Index i, Index j);
Matrix misalignment_cost_matrix(const Matrix& d);

/// O_{p~}(p) = sum_ij p(i,j) L_{p~}(i,j).
double ortho_functional(const StochasticKernel& p, const StochasticKernel& p_tilde);
double ortho_functional(const Matrix& p, const Matrix& l_tilde);

/// Triple-sum functional for symmetric doubly stochastic kernels,
/// evaluated term by term.
double ds_functional(const Matrix& p);

/// Diffusion distances of p used by the step: exact, or from the leading
/// `truncation` eigenpairs when set.
Matrix step_distances(const StochasticKernel& p, std::optional<Index> truncation);

/// Resolves the weight actually used in the exponent.
double effective_c2(const OrthoConfig& cfg, const Matrix& l0);

/// One row-stochastic update f(p) = row_normalize(q_num * exp(-c2 L_p)).
/// `c2` is the effective weight. Throws RowUnderflow.
StochasticKernel ortho_step(const StochasticKernel& q, const StochasticKernel& p, const OrthoConfig& cfg,
                            double c2);

/// Same, with the distance matrix L already computed.
StochasticKernel ortho_step_from_distances(const StochasticKernel& q, const Matrix& l, const OrthoConfig& cfg,
                                           double c2);

/// One doubly stochastic update: symmetric Sinkhorn scaling of
/// q_num * exp(-c2 L_p). `p` must be symmetric doubly stochastic.
Matrix ortho_step_ds(const StochasticKernel& q, const Matrix& p, const OrthoConfig& cfg, double c2);

struct OrthoResult {
  StochasticKernel p_star;
  StochasticKernel p0;
  OrthoTrace trace;
};

/// Called after every accepted iterate with the global iteration index
/// (1-based) and the new kernel.
using IterateObserver = std::function<void(std::size_t, const StochasticKernel&)>;

/// Fixed-point iteration p_{k+1} = f(p_k) from p0 (default: row-normalized
/// q_num, or its Sinkhorn scaling for the doubly stochastic variant). Stops
/// when the sup-norm step falls below cfg.tol or after cfg.max_iter
/// iterations (trace.converged = false). Throws ConvergenceFailure with the
/// trace attached once the restart budget is exhausted.
OrthoResult ortho_fixpoint(const StochasticKernel& q, const OrthoConfig& cfg,
                           const std::optional<StochasticKernel>& p0 = std::nullopt,
                           const IterateObserver& observer = {});

/// ||f(p) - p||_inf for the configured variant at effective weight c2.
double fixpoint_residual(const StochasticKernel& q, const StochasticKernel& p, const OrthoConfig& cfg,
                         double c2);

/// The symmetric weight matrix used inside f: the symmetric numerator of q
/// if present, otherwise q itself (row scaling cancels in f).
const Matrix& prior_weight(const StochasticKernel& q);

}  // namespace ortho
