#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gambles/dynamics.hpp"
#include "gambles/gamble.hpp"

namespace gambles {

enum class ObservableKind {
  wealth,            // W(t)
  delta_wealth,      // W(t) - W(t - dt)
  delta_log_wealth,  // ln W(t) - ln W(t - dt)
};

std::string_view to_string(ObservableKind kind);
/// Accepts "wealth", "delta-w" and "delta-log-w".
ObservableKind parse_observable(std::string_view name);

struct DiagnoseConfig {
  std::size_t rounds = 100'000;       // length T of the long trajectory
  std::size_t realizations = 10'000;  // ensemble size N
  std::uint64_t seed = 0;
  double threshold = 0.01;  // family-wise significance of the verdict
  /// Significance below which a failed test counts as decisive; defaults to threshold^2.
  std::optional<double> decisive_threshold;
  std::size_t windows = 8;  // ensemble snapshots at t = 1, 2, 4, ..., 2^(windows-1)
  unsigned threads = 0;
};

/// Outcome of the two-part empirical check "expectation constant in time"
/// and "finite-time average converges to it".
///
/// Stationarity: the window means m_k are compared to their
/// inverse-variance weighted average with a Bonferroni-corrected z test at
/// threshold/2. Convergence: the average of the observable along one
/// trajectory of length T is compared to that weighted estimate with a z
/// test at threshold/2. Verdict is ergodic when
/// both pass, non_ergodic when either fails at the decisive level,
/// inconclusive otherwise (including bankrupt or undefined observables).
struct ErgodicityVerdict {
  enum class Verdict { ergodic, non_ergodic, inconclusive };

  bool expectation_stationary = false;
  double stationarity_statistic = 0.0;  // max_k |z_k|
  double stationarity_critical = 0.0;
  bool time_average_converges = false;
  double convergence_statistic = 0.0;  // |time average - ensemble estimate| / se
  double convergence_critical = 0.0;
  Verdict verdict = Verdict::inconclusive;

  DynamicKind dynamic = DynamicKind::additive;
  ObservableKind observable = ObservableKind::wealth;
  std::size_t rounds = 0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;

  std::vector<std::size_t> window_times;
  std::vector<double> window_means;
  std::vector<double> window_standard_errors;
  double ensemble_expectation = 0.0;
  double ensemble_standard_error = 0.0;
  double time_average = 0.0;
  double time_average_standard_error = 0.0;  // from up to 1000 batch means
  /// Largest |z| of the ensemble mean wealth against the closed form
  /// W + t<dW> (additive) or W <r>^t (multiplicative), over the windows with
  /// t <= ln N / var(ln r) where a sample of N can resolve <W(t)>.
  double closed_form_max_z = 0.0;

  bool bankruptcy = false;
  std::string note;
};

std::string_view to_string(ErgodicityVerdict::Verdict verdict);

ErgodicityVerdict diagnose(const Gamble& gamble, DynamicKind dynamic, ObservableKind observable, double wealth,
                           const DiagnoseConfig& config = {});

}  // namespace gambles
