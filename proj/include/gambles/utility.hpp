#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "gambles/gamble.hpp"

namespace gambles {

/// Maps wealth to utility. Tabulated utilities interpolate linearly between
/// knots and are undefined outside [first knot, last knot].
class UtilityFunction {
 public:
  enum class Kind { linear, logarithmic, square_root, tabulated };

  static UtilityFunction linear() { return UtilityFunction(Kind::linear); }
  static UtilityFunction logarithmic() { return UtilityFunction(Kind::logarithmic); }
  static UtilityFunction square_root() { return UtilityFunction(Kind::square_root); }
  /// Knots are (wealth, utility) pairs; both coordinates must strictly increase.
  static UtilityFunction tabulated(std::vector<std::pair<double, double>> knots);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  explicit UtilityFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::pair<double, double>> knots_;
};

std::string_view to_string(UtilityFunction::Kind kind);

/// U(wealth). DomainError for log at wealth <= 0, sqrt at wealth < 0, and
/// tabulated outside its support.
double apply_utility(const UtilityFunction& u, double wealth);

/// U(W + dW) - U(W), evaluated without cancellation where a closed form
/// allows it. Returns -inf for the logarithm when W + dW == 0 or below.
double utility_change(const UtilityFunction& u, double wealth, const WealthChange& change);

}  // namespace gambles
