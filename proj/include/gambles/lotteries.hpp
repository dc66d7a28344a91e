#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gambles/criteria.hpp"
#include "gambles/extended_real.hpp"
#include "gambles/lottery_spec.hpp"

namespace gambles {

inline constexpr int kMaxNmax = 1000;

/// Coin tossed until the first head at toss n: p(n) = 2^-n, D(n) = 2^(n-1).
/// Tosses beyond n_max void the ticket (probability 2^-n_max, wealth unchanged).
LotterySpec st_petersburg(int n_max, double price);

/// Double-exponential payouts D(n) = outer^(inner^n), e^(e^n) by default, with
/// St Petersburg probabilities. Payouts are carried as ln D(n) = ln(outer) inner^n.
LotterySpec menger_lottery(int n_max, double price, double inner_base = std::numbers::e,
                           double outer_base = std::numbers::e);

/// A parametric lottery family, for sweeps over n_max.
struct LotteryFamily {
  enum class Kind { st_petersburg, menger };

  Kind kind = Kind::st_petersburg;
  double menger_inner_base = std::numbers::e;
  double menger_outer_base = std::numbers::e;

  LotterySpec build(int n_max, double price) const;
  std::string name() const;
};

/// Parses "st_petersburg" or "menger".
LotteryFamily::Kind parse_family(std::string_view name);

struct SweepPoint {
  double axis = 0.0;          // price or n_max
  double price = 0.0;
  double gap_to_bound = 0.0;  // W + D(1) - P
  int n_max = 0;
  ExtendedReal laplace_change;  // expected change of ln W per play
  ExtendedReal bernoulli_value;
  ExtendedReal huygens_rate;
};

struct SweepResult {
  enum class Axis { price, n_max };

  Axis axis = Axis::price;
  double wealth = 0.0;
  std::vector<SweepPoint> points;
};

/// Expected log-utility change against ticket price for a fixed lottery.
/// Prices at or beyond W + D(1) report -inf.
SweepResult price_sweep(const LotterySpec& lottery, double wealth, std::span<const PricePoint> prices,
                        unsigned threads = 0);

/// Expected log-utility change against truncation n_max at a fixed price.
SweepResult nmax_sweep(const LotteryFamily& family, double wealth, double price, std::span<const int> n_max_values,
                       unsigned threads = 0);

/// Limit of the expected log change as n_max -> infinity. For St Petersburg
/// the series converges below the bound; for Menger it diverges to +inf. At
/// P = W + D(1) the Menger limit is the indeterminate "-inf + inf"; beyond
/// the bound both families give -inf.
ExtendedReal untruncated_log_change(const LotteryFamily& family, double wealth, const PricePoint& price);

struct PriceSolution {
  enum class Status { solved, no_positive_price_acceptable };

  Status status = Status::solved;
  double price = 0.0;  // largest price found with a positive expected log change
  double bound = 0.0;  // W + D(1)
  int iterations = 0;
};

inline constexpr int kMaxBisectionIterations = 200;

/// Bisection for the root of the (strictly decreasing) expected log change
/// on [0, W + D(1)). The returned price keeps a positive value, so it is
/// always strictly below the bound. Default tolerance is 1e-9 W.
PriceSolution max_acceptable_price(const LotterySpec& lottery, double wealth, double tolerance = -1.0);

}  // namespace gambles
