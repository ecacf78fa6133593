#pragma once

#include <stdexcept>
#include <string>

namespace riccfam {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constructor contract violated (invalid coefficients, bad grid spec, ...).
struct ValidationError final : Error { using Error::Error; };

// -- curve evaluation --
struct PoleProximityError final : Error { using Error::Error; };
struct OutOfDomainError final : Error { using Error::Error; };
struct EmptyEffectiveGridError final : Error { using Error::Error; };

// -- factorization --
struct ComplexDiscriminantError final : Error { using Error::Error; };
struct ZeroCubicCoefficientError final : Error { using Error::Error; };
struct ZeroBranchError final : Error { using Error::Error; };
struct NoRealBranchError final : Error { using Error::Error; };
struct ZeroConstantCofactorError final : Error { using Error::Error; };
struct ZeroQuadraticCoefficientError final : Error { using Error::Error; };

// -- Riccati machinery --
struct PoleAtReferenceError final : Error { using Error::Error; };
struct QuadratureFailureError final : Error { using Error::Error; };

// -- preset families --
struct ComplexBranchError final : Error { using Error::Error; };
struct DegenerateExponentError final : Error { using Error::Error; };

// -- numerical verification --
/// Trajectory escaped past the blow-up guard (finite-time singularity).
class BlowUpError final : public Error {
public:
    BlowUpError(const std::string& msg, double tau) : Error(msg), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};
struct StepLimitExceededError final : Error { using Error::Error; };
struct PoleInLadderError final : Error { using Error::Error; };
struct UnmatchableAnchorError final : Error { using Error::Error; };

} // namespace riccfam
