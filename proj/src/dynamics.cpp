#include "gambles/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gambles/errors.hpp"
#include "gambles/stats.hpp"
#include "parallel.hpp"

namespace gambles {

std::string_view to_string(DynamicKind kind) {
  return kind == DynamicKind::additive ? "additive" : "multiplicative";
}

DynamicKind parse_dynamic(std::string_view name) {
  if (name == "additive") return DynamicKind::additive;
  if (name == "multiplicative") return DynamicKind::multiplicative;
  throw ValidationError("unknown dynamic '" + std::string(name) + "'");
}

OutcomeSampler::OutcomeSampler(const Gamble& gamble) {
  double cumulative = 0.0;
  const auto& outcomes = gamble.outcomes();
  for (std::size_t i = 0; i + 1 < outcomes.size(); ++i) {
    cumulative += outcomes[i].probability;
    upper_bounds_.push_back(cumulative);
  }
}

int OutcomeSampler::draw(Xoshiro256StarStar& rng) const noexcept {
  const double u = rng.uniform();
  if (upper_bounds_.size() <= 4) {
    int n = 1;
    for (double bound : upper_bounds_) {
      if (u < bound) return n;
      ++n;
    }
    return n;
  }
  const auto it = std::upper_bound(upper_bounds_.begin(), upper_bounds_.end(), u);
  return static_cast<int>(it - upper_bounds_.begin()) + 1;
}

WealthProcess::WealthProcess(const Gamble& gamble, DynamicKind dynamic, double initial_wealth)
    : dynamic_(dynamic), initial_wealth_(initial_wealth) {
  if (!std::isfinite(initial_wealth)) throw DomainError("initial wealth must be finite");
  if (dynamic == DynamicKind::multiplicative) {
    increments_ = growth_factors(gamble, initial_wealth).log_factors;
  } else {
    for (const auto& o : gamble.outcomes()) increments_.push_back(o.wealth_change.amount());
  }
  reset();
}

void WealthProcess::reset() noexcept {
  wealth_ = initial_wealth_;
  log_wealth_ = dynamic_ == DynamicKind::multiplicative ? std::log(initial_wealth_) : 0.0;
}

double WealthProcess::log_wealth() const noexcept {
  if (dynamic_ == DynamicKind::multiplicative) return log_wealth_;
  if (wealth_ < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(wealth_);
}

std::vector<int> draw_outcomes(const Gamble& gamble, std::size_t rounds, std::uint64_t seed) {
  const OutcomeSampler sampler(gamble);
  Xoshiro256StarStar rng(seed);
  std::vector<int> outcomes(rounds);
  for (auto& n : outcomes) n = sampler.draw(rng);
  return outcomes;
}

Trajectory replay_trajectory(const Gamble& gamble, DynamicKind dynamic, double initial_wealth,
                             std::span<const int> outcome_path) {
  WealthProcess process(gamble, dynamic, initial_wealth);
  Trajectory t;
  t.initial_wealth = initial_wealth;
  t.dynamic = dynamic;
  t.round_duration = gamble.round_duration();
  t.outcome_path.assign(outcome_path.begin(), outcome_path.end());
  const bool logs = dynamic == DynamicKind::multiplicative;
  t.wealth_path.reserve(outcome_path.size() + 1);
  t.wealth_path.push_back(process.wealth());
  if (logs) {
    t.log_wealth_path.reserve(outcome_path.size() + 1);
    t.log_wealth_path.push_back(process.log_wealth());
  }
  for (int n : outcome_path) {
    if (n < 1 || n > gamble.n_max()) throw ValidationError("outcome index out of range");
    process.step(n);
    t.wealth_path.push_back(process.wealth());
    if (logs) t.log_wealth_path.push_back(process.log_wealth());
  }
  return t;
}

Trajectory simulate_trajectory(const Gamble& gamble, DynamicKind dynamic, double initial_wealth, std::size_t rounds,
                               std::uint64_t seed) {
  // Validate the dynamic before drawing anything.
  WealthProcess check(gamble, dynamic, initial_wealth);
  const auto outcomes = draw_outcomes(gamble, rounds, seed);
  Trajectory t = replay_trajectory(gamble, dynamic, initial_wealth, outcomes);
  t.seed = seed;
  return t;
}

double time_average_rate(const Trajectory& trajectory) {
  const std::size_t rounds = trajectory.rounds();
  if (rounds == 0) throw DomainError("time average needs at least one round");
  const double elapsed = static_cast<double>(rounds) * trajectory.round_duration;
  if (trajectory.dynamic == DynamicKind::additive) {
    return (trajectory.wealth_path.back() - trajectory.wealth_path.front()) / elapsed;
  }
  return (trajectory.log_wealth_path.back() - trajectory.log_wealth_path.front()) / elapsed;
}

double time_average_rate(DynamicKind dynamic, std::span<const double> wealth_path, double round_duration) {
  if (wealth_path.size() < 2) throw DomainError("time average needs at least one round");
  const double elapsed = static_cast<double>(wealth_path.size() - 1) * round_duration;
  if (dynamic == DynamicKind::additive) return (wealth_path.back() - wealth_path.front()) / elapsed;
  if (!(wealth_path.front() > 0.0)) throw DomainError("multiplicative path must start at positive wealth");
  if (wealth_path.back() == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(wealth_path.back() / wealth_path.front()) / elapsed;
}

double finite_time_average_wealth(const Trajectory& trajectory) {
  if (trajectory.rounds() == 0) throw DomainError("time average needs at least one round");
  double sum = 0.0;
  for (std::size_t i = 1; i < trajectory.wealth_path.size(); ++i) sum += trajectory.wealth_path[i];
  return sum / static_cast<double>(trajectory.rounds());
}

std::vector<std::size_t> geometric_sample_times(std::size_t rounds) {
  std::vector<std::size_t> times{0};
  for (std::size_t t = 1; t <= rounds; t *= 2) times.push_back(t);
  if (times.back() != rounds) times.push_back(rounds);
  return times;
}

namespace {

constexpr std::size_t kEnsembleBlock = 256;

struct BlockResult {
  std::vector<RunningStats> stats;
};

}  // namespace

EnsembleSummary simulate_ensemble(const Gamble& gamble, DynamicKind dynamic, double initial_wealth,
                                  std::size_t rounds, std::size_t realizations, std::uint64_t master_seed,
                                  const EnsembleOptions& options) {
  if (realizations == 0) throw ValidationError("ensemble needs at least one realization");
  std::vector<std::size_t> times = options.sample_times.empty() ? geometric_sample_times(rounds) : options.sample_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.back() > rounds) throw ValidationError("sample time beyond the simulated horizon");

  const WealthProcess prototype(gamble, dynamic, initial_wealth);
  const OutcomeSampler sampler(gamble);

  const std::size_t blocks = (realizations + kEnsembleBlock - 1) / kEnsembleBlock;
  std::vector<BlockResult> partial(blocks);
  EnsembleSummary summary;
  if (options.keep_time_averages) summary.finite_time_average_wealth.resize(realizations);

  detail::parallel_for(blocks, options.threads, [&](std::size_t b) {
    BlockResult& out = partial[b];
    out.stats.resize(times.size());
    WealthProcess process = prototype;
    const std::size_t first = b * kEnsembleBlock;
    const std::size_t last = std::min(realizations, first + kEnsembleBlock);
    for (std::size_t nu = first; nu < last; ++nu) {
      Xoshiro256StarStar rng(derive_seed(master_seed, nu));
      process.reset();
      std::size_t next = 0;
      double wealth_sum = 0.0;
      for (std::size_t tau = 0;; ++tau) {
        while (next < times.size() && times[next] == tau) out.stats[next++].add(process.wealth());
        if (tau == rounds) break;
        process.step(sampler.draw(rng));
        wealth_sum += process.wealth();
      }
      if (options.keep_time_averages && rounds > 0) {
        summary.finite_time_average_wealth[nu] = wealth_sum / static_cast<double>(rounds);
      }
    }
  });

  std::vector<RunningStats> total(times.size());
  for (const auto& block : partial) {
    for (std::size_t k = 0; k < times.size(); ++k) total[k].merge(block.stats[k]);
  }
  summary.realization_count = realizations;
  summary.master_seed = master_seed;
  summary.times = times;
  for (const auto& s : total) {
    summary.ensemble_mean_wealth.push_back(s.mean);
    summary.standard_error.push_back(s.standard_error());
  }
  return summary;
}

}  // namespace gambles
