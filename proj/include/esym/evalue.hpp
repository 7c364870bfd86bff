#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace esym {

/// A nonnegative test outcome carried in log domain. +inf is a legal
/// log value (an infinite e-value); NaN is not.
class EValue {
 public:
  static EValue from_log(double log_value) {
    if (std::isnan(log_value)) {
      throw std::invalid_argument("EValue: log value must not be NaN");
    }
    return EValue(log_value);
  }

  static EValue from_value(double value) {
    if (std::isnan(value) || value < 0.0) {
      throw std::invalid_argument("EValue: value must be nonnegative");
    }
    return EValue(std::log(value));
  }

  static EValue one() { return EValue(0.0); }

  double log() const { return log_value_; }
  double value() const { return std::exp(log_value_); }
  bool is_infinite() const {
    return log_value_ == std::numeric_limits<double>::infinity();
  }

 private:
  explicit EValue(double log_value) : log_value_(log_value) {}
  double log_value_;
};

}  // namespace esym
