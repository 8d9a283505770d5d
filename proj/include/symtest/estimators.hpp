#ifndef SYMTEST_ESTIMATORS_HPP
#define SYMTEST_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "symtest/errors.hpp"
#include "symtest/sample.hpp"

namespace symtest {

namespace detail {

// sum_{j=0}^{n-1} t^j / j!
inline double truncated_exp_series(double t, int n) noexcept {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < n; ++j) {
    term *= t / j;
    sum += term;
  }
  return sum;
}

// p^{2k} * (sum_{j<n} (-k log p)^j / j!)^2 given p and log(p) separately so the
// caller can supply log1p for p = 1 - u.
inline double record_cdf_squared(double p, double log_p, const RecordSpec& r) noexcept {
  const double series = truncated_exp_series(-r.k * log_p, r.n);
  return std::pow(p, 2 * r.k) * series * series;
}

inline void require_open_unit(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    throw argument_error(std::string(what) + ": u must lie in (0,1), got " + std::to_string(u));
  }
}

inline void require_window(const Sample& s, const WindowSpec& w) { w.require_valid_for(s.size()); }

// -(1/2N) * sum_i weight(i) * spacing_i / (2m/N), i = 1..N, u_i = i/(N+1).
template <class Weight>
double window_weighted_sum(const Sample& s, const WindowSpec& w, Weight&& weight) {
  const std::size_t n_obs = s.size();
  const auto x = s.values();
  const std::size_t m = static_cast<std::size_t>(w.m);
  const double nd = static_cast<double>(n_obs);
  double acc = 0.0;
  for (std::size_t i = 1; i <= n_obs; ++i) {
    const std::size_t hi = std::min(i + m, n_obs);
    const std::size_t lo = i > m ? i - m : 1;
    const double u = static_cast<double>(i) / (nd + 1.0);
    acc += weight(u) * (x[hi - 1] - x[lo - 1]);
  }
  return -1.0 / (2.0 * nd) * acc / (2.0 * w.m / nd);
}

}  // namespace detail

/// X_{min(i+m,N):N} - X_{max(i-m,1):N}, 1 <= i <= N.
inline double clamped_spacing(const Sample& s, std::size_t i, const WindowSpec& w) {
  const std::size_t n_obs = s.size();
  if (i < 1 || i > n_obs) {
    throw argument_error("spacing index " + std::to_string(i) + " outside 1.." +
                         std::to_string(n_obs));
  }
  const std::size_t m = static_cast<std::size_t>(w.m);
  const std::size_t hi = std::min(i + m, n_obs);
  const std::size_t lo = i > m ? i - m : 1;
  return s.order_stat(hi) - s.order_stat(lo);
}

/// Squared CDF of the n-th lower k-record value at the u-quantile:
/// u^{2k} (sum_{j<n} (-k ln u)^j / j!)^2.
inline double weight_lower(double u, const RecordSpec& r) {
  detail::require_open_unit(u, "weight_lower");
  return detail::record_cdf_squared(u, std::log(u), r);
}

/// Squared survival function of the n-th upper k-record value at the
/// u-quantile; equals weight_lower(1 - u, r).
inline double weight_upper(double u, const RecordSpec& r) {
  detail::require_open_unit(u, "weight_upper");
  return detail::record_cdf_squared(1.0 - u, std::log1p(-u), r);
}

/// Window-spacing estimator of the cumulative past extropy of L_{n,k}. Never
/// positive.
inline StatisticValue cpe_lower_estimate(const Sample& s, const RecordSpec& r, const WindowSpec& w) {
  detail::require_window(s, w);
  return StatisticValue::of(
      detail::window_weighted_sum(s, w, [&](double u) { return weight_lower(u, r); }));
}

/// Window-spacing estimator of the cumulative residual extropy of U_{n,k}.
inline StatisticValue cre_upper_estimate(const Sample& s, const RecordSpec& r, const WindowSpec& w) {
  detail::require_window(s, w);
  return StatisticValue::of(
      detail::window_weighted_sum(s, w, [&](double u) { return weight_upper(u, r); }));
}

/// The symmetry statistic: cre_upper_estimate - cpe_lower_estimate, evaluated
/// as one fused sum over the weight difference.
inline StatisticValue delta_nk(const Sample& s, const RecordSpec& r, const WindowSpec& w) {
  detail::require_window(s, w);
  return StatisticValue::of(detail::window_weighted_sum(
      s, w, [&](double u) { return weight_upper(u, r) - weight_lower(u, r); }));
}

/// delta_nk at n = k = 2 with the expanded weights
/// (1-u)^4 (1 - 2 ln(1-u))^2 - u^4 (1 - 2 ln u)^2.
inline StatisticValue delta_22(const Sample& s, const WindowSpec& w) {
  detail::require_window(s, w);
  return StatisticValue::of(detail::window_weighted_sum(s, w, [](double u) {
    const double v = 1.0 - u;
    const double a = 1.0 - 2.0 * std::log1p(-u);
    const double b = 1.0 - 2.0 * std::log(u);
    return v * v * v * v * a * a - u * u * u * u * b * b;
  }));
}

/// Record-free statistic with weight 1 - 2u; the n = k = 1 member of the
/// delta_nk family.
inline StatisticValue delta_plain(const Sample& s, const WindowSpec& w) {
  detail::require_window(s, w);
  return StatisticValue::of(
      detail::window_weighted_sum(s, w, [](double u) { return 1.0 - 2.0 * u; }));
}

/// delta_nk with the weight differences precomputed for a fixed N, for
/// evaluating many samples of the same size. Bitwise equal to delta_nk.
class DeltaKernel {
public:
  DeltaKernel(std::size_t n_obs, const RecordSpec& r, const WindowSpec& w) : window_(w) {
    w.require_valid_for(n_obs);
    weights_.reserve(n_obs);
    const double nd = static_cast<double>(n_obs);
    for (std::size_t i = 1; i <= n_obs; ++i) {
      const double u = static_cast<double>(i) / (nd + 1.0);
      weights_.push_back(weight_upper(u, r) - weight_lower(u, r));
    }
  }

  std::size_t size() const noexcept { return weights_.size(); }

  double operator()(const Sample& s) const {
    if (s.size() != weights_.size()) {
      throw argument_error("kernel built for N=" + std::to_string(weights_.size()) + " applied to N=" +
                           std::to_string(s.size()));
    }
    std::size_t i = 0;
    return detail::window_weighted_sum(s, window_, [&](double) { return weights_[i++]; });
  }

private:
  WindowSpec window_;
  std::vector<double> weights_;
};

}  // namespace symtest

#endif  // SYMTEST_ESTIMATORS_HPP
