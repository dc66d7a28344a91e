#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gambles/gamble.hpp"
#include "gambles/rng.hpp"

namespace gambles {

enum class DynamicKind { additive, multiplicative };

std::string_view to_string(DynamicKind kind);
/// Accepts "additive" and "multiplicative"; throws ValidationError otherwise.
DynamicKind parse_dynamic(std::string_view name);

/// Inverse-CDF sampling over the ordered outcomes, one uniform per round.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(const Gamble& gamble);

  /// 1-based outcome index.
  int draw(Xoshiro256StarStar& rng) const noexcept;

 private:
  std::vector<double> upper_bounds_;  // cumulative probabilities, last one dropped
};

/// Wealth of a single realization, advanced one round at a time.
///
/// Multiplicative wealth is accumulated as ln W + sum ln r(n) with r fixed
/// against the initial wealth; W = 0 is absorbing.
class WealthProcess {
 public:
  WealthProcess(const Gamble& gamble, DynamicKind dynamic, double initial_wealth);

  void reset() noexcept;
  void step(int outcome) noexcept {
    const auto k = static_cast<std::size_t>(outcome - 1);
    if (dynamic_ == DynamicKind::additive) {
      wealth_ += increments_[k];
    } else {
      log_wealth_ += increments_[k];
      wealth_ = std::exp(log_wealth_);
    }
  }

  DynamicKind dynamic() const noexcept { return dynamic_; }
  double wealth() const noexcept { return wealth_; }
  /// ln W; -inf once bankrupt. For additive dynamics NaN if W < 0.
  double log_wealth() const noexcept;
  bool bankrupt() const noexcept { return wealth_ == 0.0 && dynamic_ == DynamicKind::multiplicative; }

 private:
  DynamicKind dynamic_;
  double initial_wealth_;
  std::vector<double> increments_;  // dW(n) or ln r(n)
  double wealth_ = 0.0;
  double log_wealth_ = 0.0;
};

struct Trajectory {
  double initial_wealth = 0.0;
  DynamicKind dynamic = DynamicKind::additive;
  double round_duration = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> wealth_path;      // T + 1 values
  std::vector<double> log_wealth_path;  // multiplicative only, T + 1 values
  std::vector<int> outcome_path;        // T values

  std::size_t rounds() const noexcept { return outcome_path.size(); }
};

/// T i.i.d. outcome indices drawn from the generator seeded with `seed`.
std::vector<int> draw_outcomes(const Gamble& gamble, std::size_t rounds, std::uint64_t seed);

/// Trajectory for a given outcome sequence. The same sequence can be replayed
/// under both dynamics.
Trajectory replay_trajectory(const Gamble& gamble, DynamicKind dynamic, double initial_wealth,
                             std::span<const int> outcome_path);

/// draw_outcomes followed by replay_trajectory; bit-identical for equal inputs.
Trajectory simulate_trajectory(const Gamble& gamble, DynamicKind dynamic, double initial_wealth,
                               std::size_t rounds, std::uint64_t seed);

/// (W(T) - W(0)) / (T dt) for additive, ln(W(T) / W(0)) / (T dt) for
/// multiplicative; -inf for a multiplicative path ending at 0.
double time_average_rate(const Trajectory& trajectory);
double time_average_rate(DynamicKind dynamic, std::span<const double> wealth_path, double round_duration = 1.0);

/// (1/T) sum_{tau=1..T} W(tau).
double finite_time_average_wealth(const Trajectory& trajectory);

/// 0, 1, 2, 4, ... up to `rounds`, with `rounds` itself appended if it is not a power of two.
std::vector<std::size_t> geometric_sample_times(std::size_t rounds);

struct EnsembleOptions {
  std::vector<std::size_t> sample_times;  // empty selects geometric_sample_times(rounds)
  unsigned threads = 0;                   // 0 = hardware concurrency
  bool keep_time_averages = false;        // fill EnsembleSummary::finite_time_average_wealth
};

struct EnsembleSummary {
  std::size_t realization_count = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::size_t> times;
  std::vector<double> ensemble_mean_wealth;
  std::vector<double> standard_error;                // sample sd / sqrt(N); 0 when N == 1
  std::vector<double> finite_time_average_wealth;    // per realization, on request
};

/// N realizations; member nu uses derive_seed(master_seed, nu) and equals
/// simulate_trajectory with that seed. Results do not depend on `threads`.
EnsembleSummary simulate_ensemble(const Gamble& gamble, DynamicKind dynamic, double initial_wealth,
                                  std::size_t rounds, std::size_t realizations, std::uint64_t master_seed,
                                  const EnsembleOptions& options = {});

}  // namespace gambles
