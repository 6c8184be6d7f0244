#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace fitevo {

/// A real number or one of +inf / -inf.
///
/// Only the operations the model needs are provided. Scaling and subtraction
/// with infinities are done by the callers that know which conventions apply
/// (see `drift` in increments.hpp), so no generic inf - inf arithmetic exists.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}

  static constexpr ExtendedReal finite(double v) { return ExtendedReal(v); }
  static constexpr ExtendedReal plus_infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal minus_infinity() {
    return ExtendedReal(-std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_plus_infinity() const { return std::isinf(value_) && value_ > 0; }
  bool is_minus_infinity() const { return std::isinf(value_) && value_ < 0; }

  /// Raw value; +-infinity for the infinite states.
  constexpr double value() const { return value_; }

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;
  friend auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
};

/// "+inf", "-inf" or the shortest round-trip decimal.
std::string to_string(const ExtendedReal& x);

/// Inverse of to_string; also accepts "inf"/"infinity". Throws InvalidInput.
ExtendedReal parse_extended_real(const std::string& text);

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

}  // namespace fitevo
