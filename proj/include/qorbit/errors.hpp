#pragma once

#include <stdexcept>
#include <string>

namespace qorbit {

struct QOrbitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : QOrbitError {
  using QOrbitError::QOrbitError;
};

/// Evaluation point annihilates the (reduced) denominator, or the point is a
/// root-of-unity artifact (q = -1) where q-integer arithmetic degenerates.
struct DenominatorVanishes : QOrbitError {
  using QOrbitError::QOrbitError;
};

/// A scalar mentions a variable for which no binding was supplied.
struct MissingBinding : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct ParseError : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct ConfigError : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct IOError : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct ModuleMismatch : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct NotFiniteDim : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct NonDominant : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct WeightMismatch : QOrbitError {
  using QOrbitError::QOrbitError;
};

/// A computation needs more trusted columns than the truncation window holds.
struct TruncationOverflow : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct EmptyWeightSpace : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct NoSolution : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct NonUniqueSolution : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct RegimeViolation : QOrbitError {
  using QOrbitError::QOrbitError;
};

/// The hbar binding hits the pole of the z^2 fraction, or a weight fraction
/// degenerates ([mu] = 0).
struct DegenerateDenominator : QOrbitError {
  using QOrbitError::QOrbitError;
};

struct NotZSquareExpressible : QOrbitError {
  using QOrbitError::QOrbitError;
};

}  // namespace qorbit
