#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace gambles {

/// Change in wealth over one round, in currency units.
///
/// Ordinary changes are plain doubles. Gains too large for a double (the
/// double-exponential payouts of Menger-type lotteries) are carried by their
/// natural log; `amount()` then reports +inf and anything that needs the
/// value must go through `log_magnitude()`.
class WealthChange {
 public:
  constexpr WealthChange() noexcept = default;
  constexpr WealthChange(double amount) noexcept  // NOLINT(google-explicit-constructor)
      : amount_(amount) {}

  /// e^log_magnitude. Stored as a plain double whenever that is finite.
  static WealthChange from_log_magnitude(double log_magnitude);

  constexpr double amount() const noexcept { return amount_; }
  constexpr bool log_scaled() const noexcept { return log_scaled_; }

  /// ln(amount); only meaningful for positive changes.
  double log_magnitude() const noexcept;

  friend std::partial_ordering operator<=>(const WealthChange& a, const WealthChange& b) noexcept;
  friend bool operator==(const WealthChange& a, const WealthChange& b) noexcept;

 private:
  double amount_ = 0.0;
  double log_magnitude_ = 0.0;
  bool log_scaled_ = false;
};

struct RawOutcome {
  double probability;
  WealthChange wealth_change;
};

struct Outcome {
  int index;  // 1-based, ascending in wealth_change
  double probability;
  WealthChange wealth_change;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// A validated gamble: outcomes strictly ordered by wealth change, probabilities
/// in (0, 1] summing to 1 within 1e-12, positive round duration. Immutable.
class Gamble {
 public:
  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
  const Outcome& outcome(int index) const { return outcomes_.at(static_cast<std::size_t>(index - 1)); }
  int n_max() const noexcept { return static_cast<int>(outcomes_.size()); }
  double round_duration() const noexcept { return round_duration_; }

  const WealthChange& smallest_change() const noexcept { return outcomes_.front().wealth_change; }

  friend bool operator==(const Gamble&, const Gamble&) = default;

 private:
  friend Gamble validate_gamble(std::span<const RawOutcome>, double);
  Gamble(std::vector<Outcome> outcomes, double round_duration)
      : outcomes_(std::move(outcomes)), round_duration_(round_duration) {}

  std::vector<Outcome> outcomes_;
  double round_duration_ = 1.0;
};

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Sorts outcomes by wealth change, reassigns indices 1..n_max and checks
/// every Gamble invariant. Equal wealth changes are rejected, not merged.
Gamble validate_gamble(std::span<const RawOutcome> raw, double round_duration = 1.0);
Gamble validate_gamble(std::initializer_list<RawOutcome> raw, double round_duration = 1.0);

/// r(n) = (W + dW(n)) / W for a fixed reference wealth W(t0).
struct GrowthFactorSet {
  double reference_wealth;
  std::vector<double> factors;
  std::vector<double> log_factors;  // ln r(n); -inf on the bankruptcy outcome
  std::optional<int> bankruptcy_outcome;
};

/// Throws NegativeFactorError if some dW(n) < -W, DomainError if W <= 0.
GrowthFactorSet growth_factors(const Gamble& gamble, double reference_wealth);

/// ln((W + dW) / W) for one outcome; -inf when W + dW == 0.
double log_growth_factor(const WealthChange& change, double reference_wealth);

struct BankruptcyCheck {
  bool possible = false;
  std::optional<int> outcome;  // n* with r(n*) == 0
};

/// Exact test dW(n) + W == 0; there is no epsilon band.
BankruptcyCheck is_bankruptcy_possible(const Gamble& gamble, double reference_wealth);

}  // namespace gambles

namespace gambles {

/// Fair coin on $1: tails (n = 1) loses $0.40, heads (n = 2) gains $0.50.
Gamble coin_toss_gamble();

}  // namespace gambles
