#pragma once

#include <stdexcept>
#include <string>

namespace tmm {

// Bad input or unmet precondition. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative method missed its tolerance. The CLI maps these to exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : ValidationError { using ValidationError::ValidationError; };
struct GridTooNarrow : ValidationError { using ValidationError::ValidationError; };
struct InfeasibleConstraint : ValidationError { using ValidationError::ValidationError; };
struct InvalidEffectivePotential : ValidationError { using ValidationError::ValidationError; };
struct SizeTooLarge : ValidationError { using ValidationError::ValidationError; };
struct NonConfiningWeight : ValidationError { using ValidationError::ValidationError; };
struct NonNegativeSecondDerivative : ValidationError { using ValidationError::ValidationError; };
struct TooCloseToSupport : ValidationError { using ValidationError::ValidationError; };
struct SectorBoundaryTooClose : ValidationError { using ValidationError::ValidationError; };

struct NotConverged : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct SingularMinor : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct RadiusInsufficient : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct QuadratureNotConverged : ConvergenceError { using ConvergenceError::ConvergenceError; };

}  // namespace tmm
