#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace ortho {

struct OrthoTrace;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data; also raised for mismatched sizes.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A point whose whole neighbourhood sits at distance zero.
class DegenerateNeighborhood : public Error {
 public:
  using Error::Error;
};

/// The symmetric conjugate sqrt(pi) p / sqrt(pi) is not symmetric, i.e. the
/// chain is not reversible.
class NotConjugateSymmetric : public Error {
 public:
  using Error::Error;
};

/// Every off-diagonal entry of some row of exp(-c2 L) fell to the exponent
/// floor, cutting that point off from the rest of the data.
class RowUnderflow : public Error {
 public:
  RowUnderflow(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// An iterative procedure ran out of iterations (or restarts). When raised by
/// the orthogonalization driver the partial trace is attached.
class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& what,
                              std::shared_ptr<const OrthoTrace> trace = nullptr)
      : Error(what), trace_(std::move(trace)) {}

  const OrthoTrace* trace() const noexcept { return trace_.get(); }

 private:
  std::shared_ptr<const OrthoTrace> trace_;
};

}  // namespace ortho
