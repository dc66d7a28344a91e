#include "gambles/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gambles/criteria.hpp"
#include "gambles/errors.hpp"
#include "gambles/stats.hpp"
#include "parallel.hpp"

namespace gambles {

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::wealth:
      return "wealth";
    case ObservableKind::delta_wealth:
      return "delta-w";
    case ObservableKind::delta_log_wealth:
      return "delta-log-w";
  }
  return "unknown";
}

ObservableKind parse_observable(std::string_view name) {
  if (name == "wealth") return ObservableKind::wealth;
  if (name == "delta-w") return ObservableKind::delta_wealth;
  if (name == "delta-log-w") return ObservableKind::delta_log_wealth;
  throw ValidationError("unknown observable '" + std::string(name) + "'");
}

std::string_view to_string(ErgodicityVerdict::Verdict verdict) {
  switch (verdict) {
    case ErgodicityVerdict::Verdict::ergodic:
      return "ergodic";
    case ErgodicityVerdict::Verdict::non_ergodic:
      return "non_ergodic";
    case ErgodicityVerdict::Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kBlock = 256;
constexpr std::size_t kTimeBatches = 1000;

/// Observable value after a step, given wealth and log-wealth before and after.
struct ObservableTracker {
  ObservableKind kind;
  double previous_wealth = 0.0;
  double previous_log = 0.0;

  void start(const WealthProcess& p) {
    previous_wealth = p.wealth();
    previous_log = p.log_wealth();
  }

  double after_step(const WealthProcess& p) {
    double value = 0.0;
    switch (kind) {
      case ObservableKind::wealth:
        value = p.wealth();
        break;
      case ObservableKind::delta_wealth:
        value = p.wealth() - previous_wealth;
        break;
      case ObservableKind::delta_log_wealth:
        value = p.log_wealth() - previous_log;
        break;
    }
    previous_wealth = p.wealth();
    previous_log = p.log_wealth();
    return value;
  }
};

struct WindowBlock {
  std::vector<RunningStats> observable;
  std::vector<RunningStats> wealth;
  bool undefined = false;
};

// z = diff / se with 0/0 read as 0 (the degenerate case) and x/0 as +inf.
double z_score(double diff, double se) {
  if (diff == 0.0) return 0.0;
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(diff) / se;
}

}  // namespace

ErgodicityVerdict diagnose(const Gamble& gamble, DynamicKind dynamic, ObservableKind observable, double wealth,
                           const DiagnoseConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
  const double decisive = config.decisive_threshold.value_or(config.threshold * config.threshold);
  if (!(decisive > 0.0 && decisive <= config.threshold)) {
    throw ValidationError("decisive threshold must lie in (0, threshold]");
  }
  if (config.windows == 0 || config.windows > 30) throw ValidationError("window count must lie in 1..30");
  if (config.realizations < 2) throw ValidationError("diagnosis needs at least two realizations");
  if (config.rounds < 2) throw ValidationError("diagnosis needs at least two rounds");

  ErgodicityVerdict v;
  v.dynamic = dynamic;
  v.observable = observable;
  v.rounds = config.rounds;
  v.realizations = config.realizations;
  v.seed = config.seed;
  v.threshold = config.threshold;

  const std::size_t windows = config.windows;
  for (std::size_t k = 0; k < windows; ++k) v.window_times.push_back(std::size_t{1} << k);
  const std::size_t horizon = v.window_times.back();

  const WealthProcess prototype(gamble, dynamic, wealth);
  const OutcomeSampler sampler(gamble);

  // (a) ensemble snapshots of the observable at the window times
  const std::size_t blocks = (config.realizations + kBlock - 1) / kBlock;
  std::vector<WindowBlock> partial(blocks);
  detail::parallel_for(blocks, config.threads, [&](std::size_t b) {
    WindowBlock& out = partial[b];
    out.observable.resize(windows);
    out.wealth.resize(windows);
    WealthProcess process = prototype;
    ObservableTracker tracker{observable};
    const std::size_t last = std::min(config.realizations, (b + 1) * kBlock);
    for (std::size_t nu = b * kBlock; nu < last; ++nu) {
      Xoshiro256StarStar rng(derive_seed(config.seed, nu));
      process.reset();
      tracker.start(process);
      std::size_t next = 0;
      for (std::size_t t = 1; t <= horizon; ++t) {
        process.step(sampler.draw(rng));
        const double value = tracker.after_step(process);
        if (t == v.window_times[next]) {
          if (!std::isfinite(value)) out.undefined = true;
          out.observable[next].add(value);
          out.wealth[next].add(process.wealth());
          ++next;
        }
      }
    }
  });

  std::vector<RunningStats> obs(windows);
  std::vector<RunningStats> wealth_stats(windows);
  bool undefined = false;
  for (const auto& block : partial) {
    undefined = undefined || block.undefined;
    for (std::size_t k = 0; k < windows; ++k) {
      obs[k].merge(block.observable[k]);
      wealth_stats[k].merge(block.wealth[k]);
    }
  }

  // (b) one long trajectory, its own derived seed. The standard error of its
  // average comes from batch means, which stays honest when the observable
  // is not identically distributed along the path.
  RunningStats along;
  RunningStats batch_means;
  {
    WealthProcess process = prototype;
    ObservableTracker tracker{observable};
    tracker.start(process);
    Xoshiro256StarStar rng(derive_seed(config.seed, config.realizations));
    const std::size_t batch_count = std::min<std::size_t>(kTimeBatches, config.rounds / 2);
    const std::size_t batch_length = config.rounds / batch_count;
    double batch_sum = 0.0;
    for (std::size_t t = 1; t <= config.rounds; ++t) {
      process.step(sampler.draw(rng));
      const double value = tracker.after_step(process);
      if (!std::isfinite(value)) {
        undefined = true;
        break;
      }
      along.add(value);
      batch_sum += value;
      if (t % batch_length == 0 && t / batch_length <= batch_count) {
        batch_means.add(batch_sum / static_cast<double>(batch_length));
        batch_sum = 0.0;
      }
    }
  }

  // Closed-form cross-check of the simulator on <W(t)>. Under multiplicative
  // dynamics the sample mean stops tracking <W(t)> beyond t ~ ln N / var(ln r),
  // so later windows are skipped.
  const double mean_change = huygens_rate(gamble) * gamble.round_duration();
  double mean_factor = 0.0;
  double resolvable = std::numeric_limits<double>::infinity();
  if (dynamic == DynamicKind::multiplicative) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (const auto& o : gamble.outcomes()) {
      const double r = (wealth + o.wealth_change.amount()) / wealth;
      mean_factor += o.probability * r;
      const double lr = r > 0.0 ? std::log(r) : 0.0;
      m1 += o.probability * lr;
      m2 += o.probability * lr * lr;
    }
    const double log_var = m2 - m1 * m1;
    if (log_var > 0.0) resolvable = std::log(static_cast<double>(config.realizations)) / log_var;
  }
  for (std::size_t k = 0; k < windows; ++k) {
    const double t = static_cast<double>(v.window_times[k]);
    if (t > resolvable) break;
    const double expected =
        dynamic == DynamicKind::additive ? wealth + t * mean_change : wealth * std::pow(mean_factor, t);
    v.closed_form_max_z =
        std::max(v.closed_form_max_z, z_score(wealth_stats[k].mean - expected, wealth_stats[k].standard_error()));
  }

  // Inverse-variance weighted estimate across windows; windows with zero
  // spread are exact and take over when present.
  double weight_sum = 0.0;
  double weighted = 0.0;
  double exact_sum = 0.0;
  std::size_t exact_count = 0;
  for (const auto& s : obs) {
    v.window_means.push_back(s.mean);
    v.window_standard_errors.push_back(s.standard_error());
    const double se = s.standard_error();
    if (se == 0.0) {
      exact_sum += s.mean;
      ++exact_count;
    } else {
      weight_sum += 1.0 / (se * se);
      weighted += s.mean / (se * se);
    }
  }
  if (exact_count > 0) {
    v.ensemble_expectation = exact_sum / static_cast<double>(exact_count);
    v.ensemble_standard_error = 0.0;
  } else {
    v.ensemble_expectation = weighted / weight_sum;
    v.ensemble_standard_error = std::sqrt(1.0 / weight_sum);
  }
  const auto stat_count = static_cast<double>(windows);
  v.time_average = along.mean;
  v.time_average_standard_error = batch_means.standard_error();

  if (undefined) {
    v.bankruptcy = true;
    v.verdict = ErgodicityVerdict::Verdict::inconclusive;
    v.note = "observable not finite along some realization (bankruptcy or non-positive wealth)";
    v.stationarity_statistic = std::numeric_limits<double>::quiet_NaN();
    v.convergence_statistic = std::numeric_limits<double>::quiet_NaN();
    return v;
  }

  // Stationarity: each window against the weighted estimate, whose own
  // variance is removed from the window's since the two are correlated.
  for (std::size_t k = 0; k < windows && windows > 1; ++k) {
    const double se_k = v.window_standard_errors[k];
    const double var = std::max(0.0, se_k * se_k - v.ensemble_standard_error * v.ensemble_standard_error);
    v.stationarity_statistic =
        std::max(v.stationarity_statistic, z_score(v.window_means[k] - v.ensemble_expectation, std::sqrt(var)));
  }
  const double per_test = 0.5;  // half of the significance budget for each test
  v.stationarity_critical = normal_quantile(1.0 - per_test * config.threshold / (2.0 * stat_count));
  const double stationarity_decisive = normal_quantile(1.0 - per_test * decisive / (2.0 * stat_count));

  v.convergence_statistic =
      z_score(v.time_average - v.ensemble_expectation,
              std::hypot(v.time_average_standard_error, v.ensemble_standard_error));
  v.convergence_critical = normal_quantile(1.0 - per_test * config.threshold / 2.0);
  const double convergence_decisive = normal_quantile(1.0 - per_test * decisive / 2.0);

  v.expectation_stationary = v.stationarity_statistic <= v.stationarity_critical;
  v.time_average_converges = v.convergence_statistic <= v.convergence_critical;
  if (v.expectation_stationary && v.time_average_converges) {
    v.verdict = ErgodicityVerdict::Verdict::ergodic;
  } else if (v.stationarity_statistic > stationarity_decisive || v.convergence_statistic > convergence_decisive) {
    v.verdict = ErgodicityVerdict::Verdict::non_ergodic;
  } else {
    v.verdict = ErgodicityVerdict::Verdict::inconclusive;
  }
  return v;
}

}  // namespace gambles
