#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data (parameters, ranges, boundary data).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to reach its target accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NonPositiveParameter : public DomainError {
 public:
  explicit NonPositiveParameter(std::string name)
      : DomainError("parameter '" + name + "' must be strictly positive"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ResonantBoundaryValue : public DomainError {
 public:
  using DomainError::DomainError;
};

class MismatchedTrajectories : public DomainError {
 public:
  using DomainError::DomainError;
};

class DivergentAtZero : public DomainError {
 public:
  DivergentAtZero() : DomainError("kernel is log-divergent at tau <= 0") {}
};

class InvalidRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonPositiveSeparation : public DomainError {
 public:
  NonPositiveSeparation() : DomainError("separation d must be strictly positive") {}
};

class PoleCollision : public DomainError {
 public:
  PoleCollision(int n, double relative_gap)
      : DomainError("cutoff collides with fermionic Matsubara frequency n=" + std::to_string(n) +
                    " (relative gap " + std::to_string(relative_gap) + ")"),
        n_(n) {}
  int index() const noexcept { return n_; }

 private:
  int n_;
};

class TruncationTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class QuadratureNoConvergence : public ConvergenceError {
 public:
  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
  }
  QuadratureNoConvergence(const std::string& what, double estimate, double error_estimate)
      : ConvergenceError(what + " (estimate " + fmt(estimate) + ", error " + fmt(error_estimate) + ")"),
        estimate_(estimate),
        error_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

class SeriesNoConvergence : public ConvergenceError {
 public:
  SeriesNoConvergence(const std::string& what, long terms)
      : ConvergenceError(what + " after " + std::to_string(terms) + " terms"), terms_(terms) {}
  long terms() const noexcept { return terms_; }

 private:
  long terms_;
};

}  // namespace qbm
