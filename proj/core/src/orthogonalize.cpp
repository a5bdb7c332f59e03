#include "ortho/orthogonalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ortho/errors.hpp"
#include "ortho/sinkhorn.hpp"

namespace ortho {

const char* to_string(C2Mode mode) noexcept { return mode == C2Mode::absolute ? "absolute" : "relative"; }

const char* to_string(Variant variant) noexcept {
  return variant == Variant::row_stochastic ? "row_stochastic" : "doubly_stochastic";
}

void OrthoConfig::validate(Index n) const {
  if (!(c2 >= 0.0) || !std::isfinite(c2)) throw InvalidInput("ortho config: c2 must be finite and >= 0");
  if (truncation && (*truncation < 1 || *truncation > n)) {
    throw InvalidInput("ortho config: truncation M must lie in [1, n], got " + std::to_string(*truncation) +
                       " for n=" + std::to_string(n));
  }
  if (!(tol > 0.0) || !(sinkhorn_tol > 0.0)) throw InvalidInput("ortho config: tolerances must be > 0");
  if (max_iter == 0 || sinkhorn_max_iter == 0) throw InvalidInput("ortho config: iteration caps must be > 0");
  if (!(exponent_floor < 0.0)) throw InvalidInput("ortho config: exponent_floor must be < 0");
  if (max_restarts < 0 || divergence_window < 1) throw InvalidInput("ortho config: invalid restart settings");
}

double misalignment_cost(const Matrix& d, Index i, Index j) {
  if (i < 0 || j < 0 || i >= d.rows() || j >= d.rows()) throw InvalidInput("misalignment_cost: index out of range");
  if (i == j) return 0.0;
  return 4.0 * (d.row(i) - d.row(j)).squaredNorm();
}

Matrix misalignment_cost_matrix(const Matrix& d) { return 4.0 * squared_row_distances(d); }

double ortho_functional(const Matrix& p, const Matrix& l_tilde) { return p.cwiseProduct(l_tilde).sum(); }

double ortho_functional(const StochasticKernel& p, const StochasticKernel& p_tilde) {
  if (p.size() != p_tilde.size()) throw InvalidInput("ortho_functional: size mismatch");
  return ortho_functional(p.matrix(), diffusion_distance_matrix(p_tilde));
}

double ds_functional(const Matrix& p) {
  const Index n = p.rows();
  double total = 0.0;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      const double pxy = p(x, y);
      double inner = 0.0;
      for (Index w = 0; w < n; ++w) {
        const double diff = p(x, w) - p(y, w);
        inner += pxy * diff * diff - 2.0 * pxy * pxy * p(x, w) + (4.0 / 3.0) * p(x, w) * p(w, y) * pxy;
      }
      total += inner;
    }
  }
  return total;
}

Matrix step_distances(const StochasticKernel& p, std::optional<Index> truncation) {
  if (!truncation) return diffusion_distance_matrix(p);
  return diffusion_distance_truncated(decompose(p), *truncation);
}

double effective_c2(const OrthoConfig& cfg, const Matrix& l0) {
  if (cfg.c2_mode == C2Mode::absolute) return cfg.c2;
  std::vector<double> positive;
  const Index n = l0.rows();
  positive.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      if (l0(i, j) > 0.0) positive.push_back(l0(i, j));
    }
  }
  if (positive.empty()) return cfg.c2;
  const std::size_t mid = positive.size() / 2;
  std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(mid), positive.end());
  double median = positive[mid];
  if (positive.size() % 2 == 0) {
    const double lower = *std::max_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return cfg.c2 / median;
}

const Matrix& prior_weight(const StochasticKernel& q) {
  if (q.symmetric_numerator()) return *q.symmetric_numerator();
  return q.matrix();
}

namespace {

// q_num * exp(max(-c2 L, floor)), clamped at the positivity floor.
Matrix weighted_numerator(const Matrix& weight, const Matrix& l, const OrthoConfig& cfg, double c2) {
  const Index n = weight.rows();
  if (l.rows() != n || l.cols() != n) throw InvalidInput("ortho step: size mismatch between q and p");
  Matrix numerator(n, n);
  Index underflow_row = -1;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    // The diagonal distance is zero, so "underflow" means the point lost
    // every link to the rest of the data.
    bool all_floored = n > 1;
    for (Index j = 0; j < n; ++j) {
      double exponent = -c2 * l(i, j);
      if (exponent <= cfg.exponent_floor) {
        exponent = cfg.exponent_floor;
      } else if (j != i) {
        all_floored = false;
      }
      numerator(i, j) = std::max(weight(i, j) * std::exp(exponent), kPositivityFloor);
    }
    if (all_floored) {
#pragma omp critical
      if (underflow_row < 0 || i < underflow_row) underflow_row = i;
    }
  }
  if (underflow_row >= 0) {
    throw RowUnderflow("ortho step: every entry of row " + std::to_string(underflow_row) +
                           " hit the exponent floor off the diagonal; c2 is too large",
                       static_cast<std::size_t>(underflow_row));
  }
  if (!numerator.allFinite()) throw InvalidInput("ortho step: non-finite numerator");
  return numerator;
}

Matrix ds_step_from_distances(const StochasticKernel& q, const Matrix& l, const OrthoConfig& cfg, double c2) {
  if (!q.symmetric_numerator()) {
    throw InvalidInput("doubly stochastic step: the prior must have a symmetric numerator");
  }
  Matrix numerator = weighted_numerator(*q.symmetric_numerator(), l, cfg, c2);
  return symmetric_sinkhorn(numerator, cfg.sinkhorn_tol, cfg.sinkhorn_max_iter).scaled;
}

StochasticKernel apply_step(const StochasticKernel& q, const Matrix& l, const OrthoConfig& cfg, double c2) {
  if (cfg.variant == Variant::doubly_stochastic) {
    return as_doubly_stochastic_kernel(ds_step_from_distances(q, l, cfg, c2));
  }
  return ortho_step_from_distances(q, l, cfg, c2);
}

StochasticKernel initial_kernel(const StochasticKernel& q, const OrthoConfig& cfg) {
  if (cfg.variant == Variant::doubly_stochastic) {
    if (!q.symmetric_numerator()) {
      throw InvalidInput("doubly stochastic variant: the prior must have a symmetric numerator");
    }
    return as_doubly_stochastic_kernel(
        symmetric_sinkhorn(*q.symmetric_numerator(), cfg.sinkhorn_tol, cfg.sinkhorn_max_iter).scaled);
  }
  return row_normalize_unchecked(prior_weight(q), q.symmetric_numerator().has_value());
}

}  // namespace

StochasticKernel ortho_step_from_distances(const StochasticKernel& q, const Matrix& l, const OrthoConfig& cfg,
                                           double c2) {
  Matrix numerator = weighted_numerator(prior_weight(q), l, cfg, c2);
  return row_normalize_unchecked(std::move(numerator), q.symmetric_numerator().has_value());
}

StochasticKernel ortho_step(const StochasticKernel& q, const StochasticKernel& p, const OrthoConfig& cfg,
                            double c2) {
  if (q.size() != p.size()) throw InvalidInput("ortho_step: size mismatch");
  return ortho_step_from_distances(q, step_distances(p, cfg.truncation), cfg, c2);
}

Matrix ortho_step_ds(const StochasticKernel& q, const Matrix& p, const OrthoConfig& cfg, double c2) {
  if (q.size() != p.rows()) throw InvalidInput("ortho_step_ds: size mismatch");
  const StochasticKernel current = as_doubly_stochastic_kernel(p);
  return ds_step_from_distances(q, step_distances(current, cfg.truncation), cfg, c2);
}

double fixpoint_residual(const StochasticKernel& q, const StochasticKernel& p, const OrthoConfig& cfg, double c2) {
  if (q.size() != p.size()) throw InvalidInput("fixpoint_residual: size mismatch");
  const StochasticKernel next = apply_step(q, step_distances(p, cfg.truncation), cfg, c2);
  return (next.matrix() - p.matrix()).cwiseAbs().maxCoeff();
}

OrthoResult ortho_fixpoint(const StochasticKernel& q, const OrthoConfig& cfg,
                           const std::optional<StochasticKernel>& p0_in, const IterateObserver& observer) {
  cfg.validate(q.size());
  const StochasticKernel p0 = p0_in ? *p0_in : initial_kernel(q, cfg);
  if (p0.size() != q.size()) throw InvalidInput("ortho_fixpoint: p0 size mismatch");

  const Matrix l0 = step_distances(p0, cfg.truncation);
  double c2 = effective_c2(cfg, l0);

  OrthoTrace trace;
  trace.initial_c2 = c2;

  for (int restart = 0;; ++restart) {
    trace.restart_count = restart;
    trace.effective_c2 = c2;
    StochasticKernel current = p0;
    Matrix l = l0;
    double previous = std::numeric_limits<double>::infinity();
    int growth = 0;
    bool diverged = false;

    for (std::size_t k = 0; k < cfg.max_iter; ++k) {
      std::optional<StochasticKernel> next;
      try {
        next = apply_step(q, l, cfg, c2);
      } catch (const RowUnderflow&) {
        diverged = true;
        break;
      }
      const double residual = (next->matrix() - current.matrix()).cwiseAbs().maxCoeff();
      trace.residuals.push_back(residual);
      trace.functional_values.push_back(ortho_functional(next->matrix(), l));
      trace.spectral_sums.push_back(next->matrix().trace());
      trace.restarts.push_back(restart);
      trace.c2_history.push_back(c2);
      trace.iterations = trace.residuals.size();
      if (observer) observer(trace.iterations, *next);

      if (!std::isfinite(residual)) {
        diverged = true;
        break;
      }
      if (residual < cfg.tol) {
        trace.converged = true;
        return OrthoResult{std::move(*next), p0, std::move(trace)};
      }
      growth = residual > previous ? growth + 1 : 0;
      previous = residual;
      current = std::move(*next);
      if (growth >= cfg.divergence_window) {
        diverged = true;
        break;
      }
      l = step_distances(current, cfg.truncation);
    }

    if (!diverged) return OrthoResult{std::move(current), p0, std::move(trace)};
    if (restart >= cfg.max_restarts) {
      throw ConvergenceFailure("ortho_fixpoint: diverged after " + std::to_string(restart) + " restarts",
                               std::make_shared<const OrthoTrace>(std::move(trace)));
    }
    c2 *= 0.5;
  }
}

}  // namespace ortho
