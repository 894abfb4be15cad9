#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualinspect {

enum class ErrorKind {
  Domain,                 // argument outside the documented domain
  SampleSize,             // fewer than two items
  InvalidInput,           // e.g. confidence intervals from a flagged estimate
  UndefinedEstimator,     // a mean count is zero
  CovarianceNonpositive,  // moment estimator with s12 <= 0
  NoInteriorMaximum,      // likelihood maximum on the boundary
  Truncation,             // Fisher grid did not capture enough mass
  Singular,               // information matrix not invertible
};

std::string_view to_string(ErrorKind kind);

/// True for failures that are a property of the data rather than of the
/// caller: the estimator is mathematically undefined for this sample.
bool is_estimation_pathology(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the likelihood solver when the scalar equation has no sign
/// change anywhere in the scanned bracket.
class NoInteriorMaximumError : public Error {
 public:
  NoInteriorMaximumError(double scanned_low, double scanned_high, const std::string& what)
      : Error(ErrorKind::NoInteriorMaximum, what), low_(scanned_low), high_(scanned_high) {}

  double scanned_low() const noexcept { return low_; }
  double scanned_high() const noexcept { return high_; }

 private:
  double low_;
  double high_;
};

}  // namespace dualinspect
