#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace glmdiag {

// Design matrix is numerically rank deficient.  `column` is the offending
// (dependent) column index, `partner` the column it is collinear with.
class SingularDesignError : public std::runtime_error {
 public:
  SingularDesignError(std::string msg, int column_, int partner_)
      : std::runtime_error(std::move(msg)), column(column_), partner(partner_) {}
  int column;
  int partner;
};

// IRLS exhausted its iteration budget; carries the last iterate.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string msg, std::vector<double> last_beta_, int iterations_)
      : std::runtime_error(std::move(msg)),
        last_beta(std::move(last_beta_)),
        iterations(iterations_) {}
  std::vector<double> last_beta;
  int iterations;
};

// Dispersion estimation failed (degenerate residuals, bracketing failure, ...).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulated envelope could not be built (too many replicate refits failed).
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glmdiag
