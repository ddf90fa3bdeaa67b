#pragma once

#include <stdexcept>
#include <string>

namespace gridgram {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative kernel (eigenvalues, Schur form) failed to converge, or a
/// result overflowed.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A matrix required to be Hurwitz is not.
class StabilityViolation : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization failed; usually an uncontrollable pair or a
/// numerically singular Gramian.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Equilibrium or admittance data produced an invalid Laplacian.
class ModelInconsistency : public Error {
public:
    using Error::Error;
};

/// The admittance recovery denominator vanishes for the requested design
/// parameter.
class DegenerateEquilibrium : public Error {
public:
    using Error::Error;
};

/// Caller supplied an out-of-range argument (edge index, subset size, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Input data violates a model invariant. `field` names the offending entry.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Brute-force enumeration refused because the subset count exceeds the cap.
class CombinatorialRefusal : public Error {
public:
    CombinatorialRefusal(double combinations, double cap);

    double combinations() const noexcept { return combinations_; }

private:
    double combinations_;
};

}  // namespace gridgram
