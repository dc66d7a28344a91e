#include "gambles/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gambles/errors.hpp"

namespace gambles {

UtilityFunction UtilityFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ValidationError("tabulated utility needs at least two knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first) || !(knots[i].second > knots[i - 1].second)) {
      throw ValidationError("tabulated utility must be strictly increasing");
    }
  }
  UtilityFunction u(Kind::tabulated);
  u.knots_ = std::move(knots);
  return u;
}

std::string_view to_string(UtilityFunction::Kind kind) {
  switch (kind) {
    case UtilityFunction::Kind::linear:
      return "linear";
    case UtilityFunction::Kind::logarithmic:
      return "log";
    case UtilityFunction::Kind::square_root:
      return "sqrt";
    case UtilityFunction::Kind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& knots, double wealth) {
  if (wealth < knots.front().first || wealth > knots.back().first || std::isnan(wealth)) {
    throw DomainError("wealth " + std::to_string(wealth) + " outside tabulated utility support");
  }
  auto hi = std::lower_bound(knots.begin(), knots.end(), wealth,
                             [](const auto& knot, double w) { return knot.first < w; });
  if (hi->first == wealth) return hi->second;
  auto lo = std::prev(hi);
  const double t = (wealth - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

}  // namespace

double apply_utility(const UtilityFunction& u, double wealth) {
  switch (u.kind()) {
    case UtilityFunction::Kind::linear:
      return wealth;
    case UtilityFunction::Kind::logarithmic:
      if (!(wealth > 0.0)) throw DomainError("logarithmic utility needs positive wealth");
      return std::log(wealth);
    case UtilityFunction::Kind::square_root:
      if (!(wealth >= 0.0)) throw DomainError("square-root utility needs non-negative wealth");
      return std::sqrt(wealth);
    case UtilityFunction::Kind::tabulated:
      return interpolate(u.knots(), wealth);
  }
  return wealth;
}

double utility_change(const UtilityFunction& u, double wealth, const WealthChange& change) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double dw = change.amount();
  switch (u.kind()) {
    case UtilityFunction::Kind::linear:
      return dw;
    case UtilityFunction::Kind::logarithmic:
      if (!(wealth > 0.0)) throw DomainError("logarithmic utility needs positive wealth");
      if (!change.log_scaled() && !(wealth + dw > 0.0)) return -inf;
      return log_growth_factor(change, wealth);
    case UtilityFunction::Kind::square_root: {
      if (!(wealth >= 0.0)) throw DomainError("square-root utility needs non-negative wealth");
      if (change.log_scaled()) return inf;
      const double after = wealth + dw;
      if (after < 0.0) throw DomainError("square-root utility needs non-negative wealth");
      // sqrt(a) - sqrt(b) = (a - b) / (sqrt(a) + sqrt(b))
      const double denom = std::sqrt(after) + std::sqrt(wealth);
      return denom == 0.0 ? 0.0 : dw / denom;
    }
    case UtilityFunction::Kind::tabulated:
      if (change.log_scaled()) throw DomainError("wealth outside tabulated utility support");
      return interpolate(u.knots(), wealth + dw) - interpolate(u.knots(), wealth);
  }
  return dw;
}

}  // namespace gambles
