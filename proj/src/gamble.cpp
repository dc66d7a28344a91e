#include "gambles/gamble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "gambles/errors.hpp"

namespace gambles {

WealthChange WealthChange::from_log_magnitude(double log_magnitude) {
  if (std::isnan(log_magnitude) || log_magnitude == std::numeric_limits<double>::infinity()) {
    throw OverflowToFinite("wealth change log-magnitude must be finite or -inf");
  }
  const double amount = std::exp(log_magnitude);
  WealthChange change;
  if (std::isfinite(amount)) {
    change.amount_ = amount;
    return change;
  }
  change.amount_ = std::numeric_limits<double>::infinity();
  change.log_magnitude_ = log_magnitude;
  change.log_scaled_ = true;
  return change;
}

double WealthChange::log_magnitude() const noexcept {
  return log_scaled_ ? log_magnitude_ : std::log(amount_);
}

std::partial_ordering operator<=>(const WealthChange& a, const WealthChange& b) noexcept {
  if (a.log_scaled_ && b.log_scaled_) return a.log_magnitude_ <=> b.log_magnitude_;
  if (a.log_scaled_) return std::partial_ordering::greater;
  if (b.log_scaled_) return std::partial_ordering::less;
  return a.amount_ <=> b.amount_;
}

bool operator==(const WealthChange& a, const WealthChange& b) noexcept {
  return (a <=> b) == std::partial_ordering::equivalent;
}

namespace {

std::string describe(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

}  // namespace

Gamble validate_gamble(std::span<const RawOutcome> raw, double round_duration) {
  if (raw.empty()) throw ValidationError("gamble needs at least one outcome");
  if (!(round_duration > 0.0) || !std::isfinite(round_duration)) {
    throw NonPositiveDuration("round duration must be positive and finite, got " + describe(round_duration));
  }

  std::vector<Outcome> outcomes;
  outcomes.reserve(raw.size());
  double total = 0.0;
  for (const auto& r : raw) {
    if (!(r.probability > 0.0) || r.probability > 1.0) {
      throw NonPositiveProbability("outcome probability must lie in (0, 1], got " + describe(r.probability));
    }
    const double amount = r.wealth_change.amount();
    if (std::isnan(amount) || (std::isinf(amount) && !r.wealth_change.log_scaled())) {
      throw ValidationError("wealth change must be finite");
    }
    total += r.probability;
    outcomes.push_back({0, r.probability, r.wealth_change});
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw ProbabilitySumError("probabilities sum to " + describe(total) + ", expected 1");
  }

  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const Outcome& a, const Outcome& b) { return a.wealth_change < b.wealth_change; });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    outcomes[i].index = static_cast<int>(i + 1);
    if (i > 0 && outcomes[i].wealth_change == outcomes[i - 1].wealth_change) {
      throw DuplicateWealthChange("two outcomes share wealth change " +
                                  describe(outcomes[i].wealth_change.amount()));
    }
  }
  return Gamble(std::move(outcomes), round_duration);
}

Gamble validate_gamble(std::initializer_list<RawOutcome> raw, double round_duration) {
  return validate_gamble(std::span<const RawOutcome>(raw.begin(), raw.size()), round_duration);
}

double log_growth_factor(const WealthChange& change, double reference_wealth) {
  if (change.log_scaled()) {
    // ln(W + D) - ln W with D = e^L far beyond W.
    const double log_d = change.log_magnitude();
    return log_d + std::log1p(reference_wealth * std::exp(-log_d)) - std::log(reference_wealth);
  }
  const double dw = change.amount();
  if (reference_wealth + dw == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log1p(dw / reference_wealth);
}

namespace {

void require_multiplicative_domain(const Gamble& gamble, double reference_wealth) {
  if (!(reference_wealth > 0.0) || !std::isfinite(reference_wealth)) {
    throw DomainError("reference wealth must be positive and finite, got " + describe(reference_wealth));
  }
  const double smallest = gamble.smallest_change().amount();
  if (smallest < -reference_wealth) {
    throw NegativeFactorError("wealth change " + describe(smallest) + " exceeds reference wealth " +
                              describe(reference_wealth) + "; growth factor would be negative");
  }
}

}  // namespace

GrowthFactorSet growth_factors(const Gamble& gamble, double reference_wealth) {
  require_multiplicative_domain(gamble, reference_wealth);
  GrowthFactorSet set{reference_wealth, {}, {}, std::nullopt};
  set.factors.reserve(gamble.outcomes().size());
  set.log_factors.reserve(gamble.outcomes().size());
  for (const auto& o : gamble.outcomes()) {
    const double dw = o.wealth_change.amount();
    const bool bankrupt = !o.wealth_change.log_scaled() && reference_wealth + dw == 0.0;
    set.factors.push_back(bankrupt ? 0.0 : (reference_wealth + dw) / reference_wealth);
    set.log_factors.push_back(log_growth_factor(o.wealth_change, reference_wealth));
    if (bankrupt) set.bankruptcy_outcome = o.index;
  }
  return set;
}

BankruptcyCheck is_bankruptcy_possible(const Gamble& gamble, double reference_wealth) {
  const auto set = growth_factors(gamble, reference_wealth);
  return {set.bankruptcy_outcome.has_value(), set.bankruptcy_outcome};
}

}  // namespace gambles

namespace gambles {

Gamble coin_toss_gamble() { return validate_gamble({{0.5, -0.4}, {0.5, 0.5}}); }

}  // namespace gambles
