#pragma once

#include <string>
#include <vector>

#include "gambles/gamble.hpp"

namespace gambles {

/// A payout D(n) >= 0 carried by its natural log. `amount` is D(n) when it
/// fits in a double (exact for the dyadic St Petersburg payouts) and +inf
/// otherwise. D = 0 is log_magnitude = -inf.
struct Payout {
  double log_magnitude;
  double amount;

  static Payout from_amount(double amount);
  static Payout from_log_magnitude(double log_magnitude);

  friend bool operator==(const Payout&, const Payout&) = default;
};

/// A lottery ticket: outcome n = 1..n_max pays D(n) with probability p(n);
/// the remaining probability mass is the "declared invalid" outcome, which
/// leaves wealth unchanged (the ticket price is not charged).
struct LotterySpec {
  std::string family;  // "st_petersburg", "menger" or "custom"
  std::vector<double> probabilities;
  std::vector<Payout> payouts;
  double null_probability = 0.0;
  double ticket_price = 0.0;
  double round_duration = 1.0;

  int n_max() const noexcept { return static_cast<int>(payouts.size()); }
  const Payout& first_payout() const { return payouts.front(); }
  /// Sum of all probabilities including the null outcome, smallest first.
  double total_probability() const;
  /// False when n_max is past the range where 2^-n and the null remainder are exact.
  bool exact_probabilities() const noexcept;

  LotterySpec with_price(double price) const;
  LotterySpec with_duration(double duration) const;
};

inline constexpr int kExactDyadicNmax = 62;

/// Builds and validates a lottery from explicit payouts. Payouts must be
/// strictly increasing, probabilities positive, and their sum at most 1 (the
/// remainder becomes the null outcome).
LotterySpec make_lottery(std::string family, std::vector<Payout> payouts, std::vector<double> probabilities,
                         double ticket_price, double round_duration = 1.0);

/// The gamble faced by a ticket holder: dW(n) = D(n) - P for each payout plus
/// the null outcome dW = 0. When D(k) - P is exactly 0 it shares the null
/// outcome's wealth change and the two probabilities are merged into one
/// outcome. Payouts beyond double range become log-scaled gains; the price
/// offset is below the precision of their log.
Gamble to_gamble(const LotterySpec& lottery);

/// A ticket price either given directly or as a gap below the bankruptcy
/// bound W + D(1). The gap form keeps prices closer to the bound than one
/// ulp of the bound.
class PricePoint {
 public:
  static PricePoint at(double price) { return PricePoint(false, price); }
  static PricePoint gap_below_bound(double gap) { return PricePoint(true, gap); }

  bool is_gap() const noexcept { return gap_; }
  double raw() const noexcept { return value_; }
  /// Absolute price; rounds to the nearest double for the gap form.
  double price(double wealth, double first_payout) const noexcept {
    return gap_ ? (wealth + first_payout) - value_ : value_;
  }
  /// Distance below W + D(1).
  double gap(double wealth, double first_payout) const noexcept {
    return gap_ ? value_ : (wealth + first_payout) - value_;
  }

 private:
  PricePoint(bool gap, double value) : gap_(gap), value_(value) {}

  bool gap_;
  double value_;
};

}  // namespace gambles
