#include "gambles/lotteries.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gambles/errors.hpp"
#include "parallel.hpp"

namespace gambles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nmax(int n_max) {
  if (n_max < 1 || n_max > kMaxNmax) {
    throw ValidationError("n_max must lie in 1.." + std::to_string(kMaxNmax) + ", got " + std::to_string(n_max));
  }
}

void require_price(double price) {
  if (!(price >= 0.0) || !std::isfinite(price)) throw ValidationError("ticket price must be finite and >= 0");
}

// 2^-n for n = 1..n_max plus the 2^-n_max remainder; all exact in binary.
void fill_dyadic_probabilities(LotterySpec& spec, int n_max) {
  spec.probabilities.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) spec.probabilities.push_back(std::ldexp(1.0, -n));
  spec.null_probability = std::ldexp(1.0, -n_max);
}

Payout st_petersburg_payout(int n) {
  return {static_cast<double>(n - 1) * std::numbers::ln2, std::ldexp(1.0, n - 1)};
}

Payout menger_payout(int n, double inner_base, double outer_base) {
  const double log_d = std::log(outer_base) * std::pow(inner_base, n);
  if (!std::isfinite(log_d)) {
    throw OverflowToFinite("Menger payout log-magnitude overflows at n = " + std::to_string(n));
  }
  return Payout::from_log_magnitude(log_d);
}

}  // namespace

LotterySpec st_petersburg(int n_max, double price) {
  require_nmax(n_max);
  require_price(price);
  LotterySpec spec;
  spec.family = "st_petersburg";
  fill_dyadic_probabilities(spec, n_max);
  for (int n = 1; n <= n_max; ++n) spec.payouts.push_back(st_petersburg_payout(n));
  spec.ticket_price = price;
  return spec;
}

LotterySpec menger_lottery(int n_max, double price, double inner_base, double outer_base) {
  require_nmax(n_max);
  require_price(price);
  if (!(inner_base > 1.0) || !(outer_base > 1.0)) throw ValidationError("Menger bases must exceed 1");
  LotterySpec spec;
  spec.family = "menger";
  fill_dyadic_probabilities(spec, n_max);
  for (int n = 1; n <= n_max; ++n) spec.payouts.push_back(menger_payout(n, inner_base, outer_base));
  spec.ticket_price = price;
  return spec;
}

LotterySpec LotteryFamily::build(int n_max, double price) const {
  return kind == Kind::st_petersburg ? st_petersburg(n_max, price)
                                     : menger_lottery(n_max, price, menger_inner_base, menger_outer_base);
}

std::string LotteryFamily::name() const { return kind == Kind::st_petersburg ? "st_petersburg" : "menger"; }

LotteryFamily::Kind parse_family(std::string_view name) {
  if (name == "st_petersburg") return LotteryFamily::Kind::st_petersburg;
  if (name == "menger") return LotteryFamily::Kind::menger;
  throw ValidationError("unknown lottery family '" + std::string(name) + "'");
}

namespace {

ExtendedReal bernoulli_at(const LotterySpec& lottery, double wealth, double price) {
  return bernoulli_value(lottery.with_price(std::max(0.0, price)), wealth).value;
}

}  // namespace

SweepResult price_sweep(const LotterySpec& lottery, double wealth, std::span<const PricePoint> prices,
                        unsigned threads) {
  SweepResult result;
  result.axis = SweepResult::Axis::price;
  result.wealth = wealth;
  result.points.resize(prices.size());
  const double first = lottery.first_payout().amount;
  detail::parallel_for(prices.size(), threads, [&](std::size_t i) {
    const PricePoint& pp = prices[i];
    SweepPoint& point = result.points[i];
    point.price = pp.price(wealth, first);
    point.axis = point.price;
    point.gap_to_bound = pp.gap(wealth, first);
    point.n_max = lottery.n_max();
    point.laplace_change = lottery_log_change(lottery, wealth, pp);
    point.bernoulli_value = bernoulli_at(lottery, wealth, point.price);
    point.huygens_rate = lottery_huygens_rate(lottery.with_price(std::max(0.0, point.price)));
  });
  return result;
}

SweepResult nmax_sweep(const LotteryFamily& family, double wealth, double price, std::span<const int> n_max_values,
                       unsigned threads) {
  require_price(price);
  SweepResult result;
  result.axis = SweepResult::Axis::n_max;
  result.wealth = wealth;
  result.points.resize(n_max_values.size());
  detail::parallel_for(n_max_values.size(), threads, [&](std::size_t i) {
    const LotterySpec lottery = family.build(n_max_values[i], price);
    SweepPoint& point = result.points[i];
    point.axis = n_max_values[i];
    point.n_max = n_max_values[i];
    point.price = price;
    point.gap_to_bound = wealth + lottery.first_payout().amount - price;
    point.laplace_change = lottery_log_change(lottery, wealth);
    point.bernoulli_value = bernoulli_value(lottery, wealth).value;
    point.huygens_rate = lottery_huygens_rate(lottery);
  });
  return result;
}

ExtendedReal untruncated_log_change(const LotteryFamily& family, double wealth, const PricePoint& price) {
  if (!(wealth > 0.0) || !std::isfinite(wealth)) throw DomainError("wealth must be positive and finite");
  const bool menger = family.kind == LotteryFamily::Kind::menger;
  const auto payout = [&](int n) {
    return menger ? menger_payout(n, family.menger_inner_base, family.menger_outer_base) : st_petersburg_payout(n);
  };
  const Payout first = payout(1);
  const double gap = price.gap(wealth, first.amount);
  const bool divergent_tail = menger && family.menger_inner_base >= 2.0;
  if (gap < 0.0) return ExtendedReal::minus_infinity();
  if (gap == 0.0) return divergent_tail ? ExtendedReal::indeterminate() : ExtendedReal::minus_infinity();
  if (divergent_tail) return ExtendedReal::plus_infinity();

  // Convergent series: sum until 2^-n underflows.
  constexpr int kLastDyadic = 1074;
  double sum = 0.0;
  for (int n = 1; n <= kLastDyadic; ++n) {
    const double log_d = menger ? std::log(family.menger_outer_base) * std::pow(family.menger_inner_base, n)
                                : static_cast<double>(n - 1) * std::numbers::ln2;
    if (!std::isfinite(log_d)) break;
    const Payout d = n == 1 ? first : Payout{log_d, std::exp(log_d)};
    sum += std::ldexp(1.0, -n) * log_wealth_ratio(d, first, wealth, price);
  }
  return sum;
}

PriceSolution max_acceptable_price(const LotterySpec& lottery, double wealth, double tolerance) {
  if (!(wealth > 0.0) || !std::isfinite(wealth)) throw DomainError("wealth must be positive and finite");
  if (tolerance <= 0.0) tolerance = 1e-9 * wealth;
  const auto value = [&](double price) { return lottery_log_change(lottery, wealth, PricePoint::at(price)); };

  PriceSolution solution;
  solution.bound = wealth + lottery.first_payout().amount;
  if (!(value(0.0) > ExtendedReal(0.0))) {
    solution.status = PriceSolution::Status::no_positive_price_acceptable;
    return solution;
  }
  double lo = 0.0;
  double hi = solution.bound;
  while (hi - lo > tolerance && solution.iterations < kMaxBisectionIterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    ++solution.iterations;
    if (value(mid) > ExtendedReal(0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  solution.price = lo;
  return solution;
}

}  // namespace gambles
