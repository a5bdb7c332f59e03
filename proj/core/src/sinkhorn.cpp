#include "ortho/sinkhorn.hpp"

#include <string>

#include "ortho/errors.hpp"

namespace ortho {

namespace {

Matrix apply_scaling(const Matrix& k, const Vector& d) {
  Matrix out = d.asDiagonal() * k * d.asDiagonal();
  return 0.5 * (out + out.transpose());
}

double max_row_deviation(const Matrix& m) { return (m.rowwise().sum().array() - 1.0).abs().maxCoeff(); }

}  // namespace

SinkhornResult symmetric_sinkhorn(const Matrix& k, double tol, std::size_t max_iter) {
  if (k.rows() == 0 || k.rows() != k.cols() || !k.allFinite() || (k.array() <= 0.0).any()) {
    throw InvalidInput("symmetric_sinkhorn: expected a positive finite square matrix");
  }
  Vector d = k.rowwise().sum().cwiseSqrt().cwiseInverse();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const Vector kd = k * d;
    const double deviation = ((d.array() * kd.array()) - 1.0).abs().maxCoeff();
    if (deviation < tol) {
      SinkhornResult out;
      out.scaled = apply_scaling(k, d);
      out.max_deviation = max_row_deviation(out.scaled);
      if (out.max_deviation < tol) {
        out.scaling = std::move(d);
        out.iterations = it;
        return out;
      }
    }
    d = (d.array() / kd.array()).sqrt().matrix();
  }
  throw ConvergenceFailure("symmetric_sinkhorn: row sums not within " + std::to_string(tol) + " after " +
                           std::to_string(max_iter) + " iterations");
}

}  // namespace ortho
