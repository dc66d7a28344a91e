#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gambles/extended_real.hpp"
#include "gambles/gamble.hpp"
#include "gambles/lottery_spec.hpp"
#include "gambles/utility.hpp"

namespace gambles {

/// Rate of change of expected wealth, <dW>/dt. +inf only for log-scaled gains.
double huygens_rate(const Gamble& gamble);

/// Expected rate of change of ln W: (1/dt) sum p(n) ln((W + dW(n)) / W).
/// Returns -inf if any outcome takes wealth to zero or below.
double laplace_rate(const Gamble& gamble, double wealth);

/// (1/dt) sum p(n) [U(W + dW(n)) - U(W)]. Linear and logarithmic utilities
/// reproduce huygens_rate and laplace_rate exactly.
double expected_utility_rate(const Gamble& gamble, const UtilityFunction& u, double wealth);

struct BernoulliDecomposition {
  double expected_gain;  // sum p(n) ln((W + D(n)) / W), price ignored
  double purchase_loss;  // ln(W / (W - P)); +inf when P >= W
};

struct BernoulliResult {
  double value;  // expected_gain - purchase_loss; -inf when the price is not affordable
  BernoulliDecomposition decomposition;
  bool price_exceeds_wealth = false;
};

/// The historical criterion that charges the ticket price in utility before
/// the payout instead of netting it against each payout.
BernoulliResult bernoulli_value(const LotterySpec& lottery, double wealth);

/// How ln(W + D(n) - P) is evaluated for lottery payouts.
enum class EvaluationPath {
  hybrid,     // direct for ln D(n) <= kLogSpaceThreshold, log-space above
  log_space,  // always ln D + log1p((W - P) / D)
  direct,     // always from the materialised D(n); throws OverflowToFinite past double range
};

inline constexpr double kLogSpaceThreshold = 36.0;

/// ln((W + D - P) / W) for a single payout; -inf when W + D - P <= 0.
double log_wealth_ratio(const Payout& payout, const Payout& first_payout, double wealth, const PricePoint& price,
                        EvaluationPath path = EvaluationPath::hybrid);

/// Expected change of ln W for one play of the lottery at the given price.
/// The null outcome contributes nothing.
ExtendedReal lottery_log_change(const LotterySpec& lottery, double wealth, const PricePoint& price,
                                EvaluationPath path = EvaluationPath::hybrid);
ExtendedReal lottery_log_change(const LotterySpec& lottery, double wealth);

/// Expected payout minus price per unit time; +inf when a payout overflows.
ExtendedReal lottery_huygens_rate(const LotterySpec& lottery);

/// The expected log change split into the smallest-payout term and the rest.
struct MengerDecomposition {
  ExtendedReal first_term;
  ExtendedReal tail_sum;

  ExtendedReal total() const { return first_term + tail_sum; }
};

MengerDecomposition menger_decomposition(const LotterySpec& lottery, double wealth);
MengerDecomposition menger_decomposition(const LotterySpec& lottery, double wealth, const PricePoint& price);

struct CriterionReport {
  double evaluation_wealth = 0.0;
  ExtendedReal huygens_rate;
  ExtendedReal laplace_rate;
  std::optional<BernoulliResult> bernoulli;  // lotteries only
  std::optional<UtilityFunction::Kind> utility_kind;
  std::optional<ExtendedReal> expected_utility_rate;
  bool bankruptcy_possible = false;
};

CriterionReport evaluate_criteria(const Gamble& gamble, double wealth,
                                  const std::optional<UtilityFunction>& utility = std::nullopt);
CriterionReport evaluate_criteria(const LotterySpec& lottery, double wealth,
                                  const std::optional<UtilityFunction>& utility = std::nullopt);

/// Indices of `values` from best to worst. -inf ranks last; values within
/// `tie_tolerance` of each other keep their input order.
std::vector<std::size_t> rank_by_criterion(std::span<const double> values, double tie_tolerance = 1e-12);

}  // namespace gambles
