#ifndef SYMTEST_SAMPLE_HPP
#define SYMTEST_SAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "symtest/errors.hpp"

namespace symtest {

/// An owned, ascending-sorted set of finite observations.
///
/// Construction sorts, so order statistics X_{i:N} are positional reads via
/// order_stat(i) with 1-based i. The original order is not kept.
class Sample {
public:
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw argument_error("sample must contain at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw data_error("non-finite value at position " + std::to_string(i + 1));
      }
    }
    std::sort(values_.begin(), values_.end());
  }

  Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }

  /// X_{i:N}, 1 <= i <= N.
  double order_stat(std::size_t i) const {
    if (i < 1 || i > values_.size()) {
      throw argument_error("order statistic index " + std::to_string(i) + " outside 1.." +
                           std::to_string(values_.size()));
    }
    return values_[i - 1];
  }

  std::span<const double> values() const noexcept { return values_; }

  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  /// a*X + b for a > 0, re-validated and re-sorted.
  Sample affine(double a, double b) const {
    std::vector<double> out(values_);
    for (double& x : out) x = a * x + b;
    return Sample(std::move(out));
  }

  /// -X, the reflection used by the mirror identities.
  Sample reflected() const { return affine(-1.0, 0.0); }

  friend bool operator==(const Sample&, const Sample&) = default;

private:
  std::vector<double> values_;
};

/// Selects the n-th upper/lower k-record value family.
struct RecordSpec {
  int n = 2;
  int k = 2;

  RecordSpec() = default;
  RecordSpec(int n_, int k_) : n(n_), k(k_) {
    if (n < 1 || k < 1) {
      throw argument_error("record spec requires n >= 1 and k >= 1, got n=" + std::to_string(n) +
                           " k=" + std::to_string(k));
    }
  }

  friend bool operator==(const RecordSpec&, const RecordSpec&) = default;
};

/// Half-width m of the order-statistic spacing X_{i+m:N} - X_{i-m:N}.
struct WindowSpec {
  int m = 1;

  WindowSpec() = default;
  explicit WindowSpec(int m_) : m(m_) {
    if (m < 1) throw argument_error("window size must be >= 1, got " + std::to_string(m));
  }

  bool valid_for(std::size_t n_obs) const noexcept {
    return 2 * static_cast<std::size_t>(m) < n_obs;
  }

  void require_valid_for(std::size_t n_obs) const {
    if (!valid_for(n_obs)) {
      throw config_error("window size m=" + std::to_string(m) + " requires 2m < N, but N=" +
                         std::to_string(n_obs));
    }
  }

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct StatisticValue {
  double value = 0.0;
  double abs_value = 0.0;

  static StatisticValue of(double v) noexcept { return {v, std::fabs(v)}; }
};

}  // namespace symtest

#endif  // SYMTEST_SAMPLE_HPP
