#pragma once

#include <cmath>
#include <compare>
#include <limits>

namespace gambles {

/// A real number extended by +inf, -inf and an explicit indeterminate state.
///
/// Divergences of the criteria are results, so they travel as values rather
/// than exceptions. `-inf + inf` yields `indeterminate`, which is unordered
/// with respect to everything (including itself).
class ExtendedReal {
 public:
  enum class Kind { finite, plus_infinity, minus_infinity, indeterminate };

  constexpr ExtendedReal() noexcept = default;

  /// NaN maps to indeterminate, IEEE infinities to the matching kind.
  constexpr ExtendedReal(double value) noexcept  // NOLINT(google-explicit-constructor)
      : kind_(classify(value)), value_(kind_ == Kind::finite ? value : 0.0) {}

  static constexpr ExtendedReal plus_infinity() noexcept { return ExtendedReal(Kind::plus_infinity); }
  static constexpr ExtendedReal minus_infinity() noexcept { return ExtendedReal(Kind::minus_infinity); }
  static constexpr ExtendedReal indeterminate() noexcept { return ExtendedReal(Kind::indeterminate); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_finite() const noexcept { return kind_ == Kind::finite; }
  constexpr bool is_indeterminate() const noexcept { return kind_ == Kind::indeterminate; }

  /// IEEE view: infinities map to +-inf, indeterminate to quiet NaN.
  constexpr double to_double() const noexcept {
    switch (kind_) {
      case Kind::finite:
        return value_;
      case Kind::plus_infinity:
        return std::numeric_limits<double>::infinity();
      case Kind::minus_infinity:
        return -std::numeric_limits<double>::infinity();
      case Kind::indeterminate:
        break;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.is_indeterminate() || b.is_indeterminate()) return indeterminate();
    const bool opposite =
        (a.kind_ == Kind::plus_infinity && b.kind_ == Kind::minus_infinity) ||
        (a.kind_ == Kind::minus_infinity && b.kind_ == Kind::plus_infinity);
    if (opposite) return indeterminate();
    return ExtendedReal(a.to_double() + b.to_double());
  }

  friend constexpr ExtendedReal operator*(double scale, ExtendedReal a) noexcept {
    if (a.is_indeterminate()) return a;
    if (!a.is_finite() && scale == 0.0) return indeterminate();
    return ExtendedReal(scale * a.to_double());
  }

  friend constexpr std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.is_indeterminate() || b.is_indeterminate()) return std::partial_ordering::unordered;
    return a.to_double() <=> b.to_double();
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.is_indeterminate() || b.is_indeterminate()) return false;
    return a.to_double() == b.to_double();
  }

 private:
  constexpr explicit ExtendedReal(Kind kind) noexcept : kind_(kind) {}

  static constexpr Kind classify(double value) noexcept {
    if (value != value) return Kind::indeterminate;
    if (value == std::numeric_limits<double>::infinity()) return Kind::plus_infinity;
    if (value == -std::numeric_limits<double>::infinity()) return Kind::minus_infinity;
    return Kind::finite;
  }

  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

}  // namespace gambles
