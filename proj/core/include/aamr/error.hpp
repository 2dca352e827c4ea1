#ifndef AAMR_ERROR_HPP_
#define AAMR_ERROR_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace aamr {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Process exit codes shared by the CLI and the command layer.
enum class ExitCode : int {
  kSuccess = 0,
  kNonConvergence = 1,
  kInvalidInput = 2,
  kPreconditionFailure = 3,
  kNumericalFailure = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ExitCode::kInvalidInput, what) {}
};

class DimensionMismatch : public InvalidInput {
 public:
  DimensionMismatch(std::string_view context, Index expected, Index actual);
};

// A mathematical precondition of an algorithm does not hold
// (empty intersection, point not interior, set not a cone, ...).
class PreconditionFailure : public Error {
 public:
  explicit PreconditionFailure(const std::string& what)
      : Error(ExitCode::kPreconditionFailure, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error(ExitCode::kNumericalFailure, what) {}
};

void require_dimension(std::string_view context, Index expected, Index actual);
void require_finite(std::string_view context, const Vector& x);

}  // namespace aamr

#endif  // AAMR_ERROR_HPP_
