#include "gambles/lottery_spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gambles/errors.hpp"

namespace gambles {

Payout Payout::from_amount(double amount) {
  if (!(amount >= 0.0) || std::isinf(amount)) throw ValidationError("payout must be finite and non-negative");
  return {amount == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(amount), amount};
}

Payout Payout::from_log_magnitude(double log_magnitude) {
  if (std::isnan(log_magnitude) || log_magnitude == std::numeric_limits<double>::infinity()) {
    throw OverflowToFinite("payout log-magnitude must be finite");
  }
  return {log_magnitude, std::exp(log_magnitude)};
}

double LotterySpec::total_probability() const {
  // Dyadic probabilities sum exactly when added smallest first.
  std::vector<double> all(probabilities);
  all.push_back(null_probability);
  std::sort(all.begin(), all.end());
  double total = 0.0;
  for (double p : all) total += p;
  return total;
}

bool LotterySpec::exact_probabilities() const noexcept {
  return family == "custom" || n_max() <= kExactDyadicNmax;
}

LotterySpec LotterySpec::with_price(double price) const {
  if (!(price >= 0.0) || !std::isfinite(price)) throw ValidationError("ticket price must be finite and >= 0");
  LotterySpec copy(*this);
  copy.ticket_price = price;
  return copy;
}

LotterySpec LotterySpec::with_duration(double duration) const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw NonPositiveDuration("round duration must be positive");
  LotterySpec copy(*this);
  copy.round_duration = duration;
  return copy;
}

LotterySpec make_lottery(std::string family, std::vector<Payout> payouts, std::vector<double> probabilities,
                         double ticket_price, double round_duration) {
  if (payouts.empty()) throw ValidationError("lottery needs at least one payout");
  if (payouts.size() != probabilities.size()) throw ValidationError("payouts and probabilities differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < payouts.size(); ++i) {
    if (!(probabilities[i] > 0.0) || probabilities[i] > 1.0) {
      throw NonPositiveProbability("lottery probabilities must lie in (0, 1]");
    }
    if (std::isnan(payouts[i].log_magnitude)) throw ValidationError("payout log-magnitude is NaN");
    if (i > 0 && !(payouts[i].log_magnitude > payouts[i - 1].log_magnitude)) {
      throw ValidationError("lottery payouts must be strictly increasing");
    }
    total += probabilities[i];
  }
  if (total > 1.0 + 1e-12) throw ProbabilitySumError("lottery probabilities exceed 1");
  LotterySpec spec;
  spec.family = std::move(family);
  spec.payouts = std::move(payouts);
  spec.probabilities = std::move(probabilities);
  spec.null_probability = std::max(0.0, 1.0 - total);
  spec = spec.with_price(ticket_price).with_duration(round_duration);
  return spec;
}

}  // namespace gambles

namespace gambles {

Gamble to_gamble(const LotterySpec& lottery) {
  std::vector<RawOutcome> raw;
  raw.reserve(lottery.payouts.size() + 1);
  const double price = lottery.ticket_price;
  double null_mass = lottery.null_probability;
  for (std::size_t i = 0; i < lottery.payouts.size(); ++i) {
    const Payout& d = lottery.payouts[i];
    const double p = lottery.probabilities[i];
    if (std::isinf(d.amount)) {
      // D - P = D exp(log1p(-P/D)); at D > DBL_MAX the correction is far below one ulp of ln D.
      raw.push_back({p, WealthChange::from_log_magnitude(d.log_magnitude)});
      continue;
    }
    const double change = d.amount - price;
    if (change == 0.0) {
      null_mass += p;
      continue;
    }
    raw.push_back({p, WealthChange(change)});
  }
  if (null_mass > 0.0) raw.push_back({null_mass, WealthChange(0.0)});
  return validate_gamble(raw, lottery.round_duration);
}

}  // namespace gambles
