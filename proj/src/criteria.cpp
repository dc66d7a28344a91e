#include "gambles/criteria.hpp"

#include <cmath>
#include <limits>

#include "gambles/errors.hpp"

namespace gambles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_wealth(double wealth) {
  if (!(wealth > 0.0) || !std::isfinite(wealth)) throw DomainError("wealth must be positive and finite");
}

}  // namespace

double huygens_rate(const Gamble& gamble) {
  double sum = 0.0;
  for (const auto& o : gamble.outcomes()) sum += o.probability * o.wealth_change.amount();
  return sum / gamble.round_duration();
}

double laplace_rate(const Gamble& gamble, double wealth) {
  require_positive_wealth(wealth);
  double sum = 0.0;
  for (const auto& o : gamble.outcomes()) {
    const auto& change = o.wealth_change;
    if (!change.log_scaled() && !(wealth + change.amount() > 0.0)) return -kInf;
    sum += o.probability * log_growth_factor(change, wealth);
  }
  return sum / gamble.round_duration();
}

double expected_utility_rate(const Gamble& gamble, const UtilityFunction& u, double wealth) {
  double sum = 0.0;
  for (const auto& o : gamble.outcomes()) {
    const double du = utility_change(u, wealth, o.wealth_change);
    if (du == -kInf) return -kInf;
    sum += o.probability * du;
  }
  return sum / gamble.round_duration();
}

double log_wealth_ratio(const Payout& payout, const Payout& first_payout, double wealth, const PricePoint& price,
                        EvaluationPath path) {
  require_positive_wealth(wealth);
  const double log_w = std::log(wealth);
  const double log_d = payout.log_magnitude;
  const bool use_direct =
      path == EvaluationPath::direct || (path == EvaluationPath::hybrid && log_d <= kLogSpaceThreshold);
  if (use_direct && std::isinf(payout.amount)) {
    throw OverflowToFinite("payout exp(" + std::to_string(log_d) + ") exceeds double range");
  }

  if (price.is_gap()) {
    // W + D - P = (D - D(1)) + gap
    const double gap = price.raw();
    if (payout == first_payout) return gap > 0.0 ? std::log(gap) - log_w : -kInf;
    if (use_direct) {
      const double a = (payout.amount - first_payout.amount) + gap;
      return a > 0.0 ? std::log(a) - log_w : -kInf;
    }
    if (std::isinf(first_payout.amount)) throw OverflowToFinite("smallest payout exceeds double range");
    const double x = (gap - first_payout.amount) * std::exp(-log_d);
    return x > -1.0 ? log_d + std::log1p(x) - log_w : -kInf;
  }

  const double p = price.raw();
  if (log_d == -kInf) return wealth - p > 0.0 ? std::log1p(-p / wealth) : -kInf;
  if (use_direct) {
    const double x = (payout.amount - p) / wealth;
    return x > -1.0 ? std::log1p(x) : -kInf;
  }
  const double x = (wealth - p) * std::exp(-log_d);
  return x > -1.0 ? log_d + std::log1p(x) - log_w : -kInf;
}

namespace {

MengerDecomposition decompose(const LotterySpec& lottery, double wealth, const PricePoint& price,
                              EvaluationPath path) {
  require_positive_wealth(wealth);
  const Payout& first = lottery.first_payout();
  const double first_term =
      lottery.probabilities.front() * log_wealth_ratio(first, first, wealth, price, path);
  double tail = 0.0;
  for (std::size_t i = 1; i < lottery.payouts.size(); ++i) {
    tail += lottery.probabilities[i] * log_wealth_ratio(lottery.payouts[i], first, wealth, price, path);
  }
  return {first_term, tail};
}

}  // namespace

MengerDecomposition menger_decomposition(const LotterySpec& lottery, double wealth, const PricePoint& price) {
  return decompose(lottery, wealth, price, EvaluationPath::hybrid);
}

MengerDecomposition menger_decomposition(const LotterySpec& lottery, double wealth) {
  return menger_decomposition(lottery, wealth, PricePoint::at(lottery.ticket_price));
}

ExtendedReal lottery_log_change(const LotterySpec& lottery, double wealth, const PricePoint& price,
                                EvaluationPath path) {
  return decompose(lottery, wealth, price, path).total();
}

ExtendedReal lottery_log_change(const LotterySpec& lottery, double wealth) {
  return lottery_log_change(lottery, wealth, PricePoint::at(lottery.ticket_price));
}

ExtendedReal lottery_huygens_rate(const LotterySpec& lottery) {
  double expected_payout = 0.0;
  for (std::size_t i = 0; i < lottery.payouts.size(); ++i) {
    expected_payout += lottery.probabilities[i] * lottery.payouts[i].amount;
  }
  if (!std::isfinite(expected_payout)) return ExtendedReal::plus_infinity();
  // sum p D - P (1 - p_null), written as (sum p D - P) + P p_null with the
  // rounding error of the difference carried, so that exactly representable
  // parts (the dyadic St Petersburg case) give the correctly rounded result.
  const double price = lottery.ticket_price;
  const double hi = expected_payout - price;
  const double back = hi - expected_payout;
  const double err = (expected_payout - (hi - back)) + (-price - back);
  return (hi + (err + price * lottery.null_probability)) / lottery.round_duration;
}

BernoulliResult bernoulli_value(const LotterySpec& lottery, double wealth) {
  require_positive_wealth(wealth);
  const PricePoint free = PricePoint::at(0.0);
  const Payout& first = lottery.first_payout();
  double gain = 0.0;
  for (std::size_t i = 0; i < lottery.payouts.size(); ++i) {
    gain += lottery.probabilities[i] * log_wealth_ratio(lottery.payouts[i], first, wealth, free);
  }
  const double price = lottery.ticket_price;
  BernoulliResult result{};
  result.decomposition.expected_gain = gain;
  if (price >= wealth) {
    result.decomposition.purchase_loss = kInf;
    result.value = -kInf;
    result.price_exceeds_wealth = true;
    return result;
  }
  result.decomposition.purchase_loss = -std::log1p(-price / wealth);
  result.value = gain - result.decomposition.purchase_loss;
  return result;
}

CriterionReport evaluate_criteria(const Gamble& gamble, double wealth, const std::optional<UtilityFunction>& utility) {
  require_positive_wealth(wealth);
  CriterionReport report;
  report.evaluation_wealth = wealth;
  report.huygens_rate = huygens_rate(gamble);
  report.laplace_rate = laplace_rate(gamble, wealth);
  const auto& smallest = gamble.smallest_change();
  report.bankruptcy_possible = !smallest.log_scaled() && wealth + smallest.amount() == 0.0;
  if (utility) {
    report.utility_kind = utility->kind();
    report.expected_utility_rate = expected_utility_rate(gamble, *utility, wealth);
  }
  return report;
}

CriterionReport evaluate_criteria(const LotterySpec& lottery, double wealth,
                                  const std::optional<UtilityFunction>& utility) {
  require_positive_wealth(wealth);
  CriterionReport report;
  report.evaluation_wealth = wealth;
  report.huygens_rate = lottery_huygens_rate(lottery);
  report.laplace_rate = (1.0 / lottery.round_duration) * lottery_log_change(lottery, wealth);
  report.bernoulli = bernoulli_value(lottery, wealth);
  const Payout& first = lottery.first_payout();
  report.bankruptcy_possible = std::isfinite(first.amount) && wealth + first.amount - lottery.ticket_price == 0.0;
  if (utility) {
    report.utility_kind = utility->kind();
    report.expected_utility_rate = expected_utility_rate(to_gamble(lottery), *utility, wealth);
  }
  return report;
}

std::vector<std::size_t> rank_by_criterion(std::span<const double> values, double tie_tolerance) {
  std::vector<std::size_t> order;
  order.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Insert after everything better than or tied with values[i].
    auto it = order.begin();
    while (it != order.end() && !(values[*it] < values[i] - tie_tolerance)) ++it;
    order.insert(it, i);
  }
  return order;
}

}  // namespace gambles
