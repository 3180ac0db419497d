#pragma once

#include <stdexcept>
#include <string>

namespace decaykit {

// Base class for all numerical/domain failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectral density is not absolutely integrable (no Zeno time, no plain
// dispersion integral) for the requested family.
class NonIntegrable : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance within budget.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Complex energy within the guard band of the branch cut; use the boundary
// evaluator instead.
class OnCut : public Error {
 public:
  using Error::Error;
};

// No closed-form analytic continuation of the spectral density is available.
class ContinuationUnavailable : public Error {
 public:
  using Error::Error;
};

// Root polishing exhausted its iteration budget above tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Pole search converged to a non-decaying point (Im >= 0, or outside the
// continuum support). Signals a coupling too large or a bad seed.
class WrongSheet : public Error {
 public:
  using Error::Error;
};

// Decay channel is kinematically closed (zero spectral density on shell).
class ClosedChannel : public Error {
 public:
  using Error::Error;
};

// Denominator derivative vanishes at the root: not a simple pole.
class DegeneratePole : public Error {
 public:
  using Error::Error;
};

// Model family not usable with the requested operation.
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

// Time grid does not span the window required by a fit.
class InsufficientRange : public Error {
 public:
  using Error::Error;
};

// Evaluation point below the continuum threshold.
class BelowThreshold : public Error {
 public:
  using Error::Error;
};

// The energy window truncates spectral weight above the documented bound and
// cannot be enlarged further.
class AliasWarning : public Error {
 public:
  using Error::Error;
};

// Malformed or invalid run configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace decaykit
