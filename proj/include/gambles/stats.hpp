#pragma once

#include <cmath>
#include <cstddef>

namespace gambles {

/// Welford accumulator. Merging follows Chan et al.; merge order is part of
/// the result, so callers merge in a fixed order.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) noexcept {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    mean += delta * n_b / n;
    m2 += other.m2 + delta * delta * n_a * n_b / n;
    count += other.count;
  }

  double variance() const noexcept { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double standard_deviation() const noexcept { return std::sqrt(variance()); }
  double standard_error() const noexcept {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

}  // namespace gambles

namespace gambles {

/// Standard normal quantile, by bisection on erfc. p must lie in (0, 1).
inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gambles
