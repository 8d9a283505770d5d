#ifndef SYMTEST_MONTECARLO_HPP
#define SYMTEST_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symtest/distributions.hpp"
#include "symtest/errors.hpp"
#include "symtest/estimators.hpp"
#include "symtest/parallel.hpp"
#include "symtest/rng.hpp"
#include "symtest/sample.hpp"

namespace symtest {

inline constexpr std::uint64_t kDefaultSeed = 20230611;
inline constexpr std::size_t kDefaultReps = 10000;

/// Key path components for RngStream::derive. Null and alternative draws for
/// the same (N, replication) come from different streams.
enum class StreamPurpose : std::uint64_t { null_draws = 1, alternative_draws = 2, observed_draws = 3 };

inline RngStream replication_stream(std::uint64_t master_seed, StreamPurpose purpose, std::size_t n_obs,
                                    std::size_t rep) noexcept {
  return RngStream::derive(master_seed, {static_cast<std::uint64_t>(purpose), n_obs, rep});
}

struct McConfig {
  std::size_t reps = kDefaultReps;
  std::uint64_t master_seed = kDefaultSeed;
  DistributionSpec null_dist = DistributionSpec::std_normal();
  std::size_t n_obs = 20;
  WindowSpec window{2};
  RecordSpec record{2, 2};
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (reps < 100) throw config_error("reps must be >= 100, got " + std::to_string(reps));
    window.require_valid_for(n_obs);
  }
};

namespace detail {

inline std::vector<double> simulate_statistics(const McConfig& cfg, const DistributionSpec& dist,
                                               StreamPurpose purpose) {
  cfg.validate();
  const DeltaKernel kernel(cfg.n_obs, cfg.record, cfg.window);
  std::vector<double> out(cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
    RngStream rng = replication_stream(cfg.master_seed, purpose, cfg.n_obs, rep);
    out[rep] = kernel(sample(dist, cfg.n_obs, rng));
  });
  return out;
}

}  // namespace detail

/// Signed statistics of cfg.reps independent null samples, indexed by
/// replication.
inline std::vector<double> null_statistics(const McConfig& cfg) {
  return detail::simulate_statistics(cfg, cfg.null_dist, StreamPurpose::null_draws);
}

/// Signed statistics of cfg.reps samples from `alternative`, on streams
/// disjoint from the null draws.
inline std::vector<double> alternative_statistics(const McConfig& cfg, const DistributionSpec& alternative) {
  return detail::simulate_statistics(cfg, alternative, StreamPurpose::alternative_draws);
}

/// Empirical p-quantile by linear interpolation between closest ranks
/// (h = (M-1)p + 1 on 1-based ranks).
inline double interpolated_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw argument_error("quantile of an empty vector");
  if (!(p >= 0.0 && p <= 1.0)) throw argument_error("quantile level must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

/// Rejection threshold for |statistic|: the (1 - alpha/2) quantile of |stats|.
inline double critical_value(std::span<const double> stats, double alpha) {
  if (stats.empty()) throw argument_error("critical value needs at least one null statistic");
  if (!(alpha > 0.0 && alpha < 1.0)) throw argument_error("alpha must lie in (0,1)");
  std::vector<double> abs_stats(stats.size());
  std::transform(stats.begin(), stats.end(), abs_stats.begin(), [](double x) { return std::fabs(x); });
  return interpolated_quantile(std::move(abs_stats), 1.0 - alpha / 2.0);
}

/// Fraction of `stats` with |stat| > threshold.
inline double rejection_rate(std::span<const double> stats, double threshold) {
  if (stats.empty()) throw argument_error("rejection rate of an empty vector");
  const auto hits = std::count_if(stats.begin(), stats.end(),
                                  [&](double x) { return std::fabs(x) > threshold; });
  return static_cast<double>(hits) / static_cast<double>(stats.size());
}

/// Power against `alternative`: the share of cfg.reps alternative samples
/// whose |statistic| exceeds `threshold`.
inline double power(const McConfig& cfg, const DistributionSpec& alternative, double threshold) {
  if (!(threshold > 0.0)) throw argument_error("threshold must be > 0");
  return rejection_rate(alternative_statistics(cfg, alternative), threshold);
}

enum class PValueMode { signed_one_sided, two_sided_abs };

inline std::string to_string(PValueMode mode) {
  return mode == PValueMode::signed_one_sided ? "signed" : "two-sided";
}

/// signed_one_sided: share of null stats strictly above `observed`.
/// two_sided_abs: share of |null stats| strictly above |observed|.
inline double p_value(double observed, std::span<const double> null_stats,
                      PValueMode mode = PValueMode::signed_one_sided) {
  if (null_stats.empty()) throw argument_error("p-value needs at least one null statistic");
  std::size_t hits = 0;
  if (mode == PValueMode::signed_one_sided) {
    for (double x : null_stats) hits += x > observed ? 1 : 0;
  } else {
    const double a = std::fabs(observed);
    for (double x : null_stats) hits += std::fabs(x) > a ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(null_stats.size());
}

inline constexpr double kReportAlphas[] = {0.10, 0.05, 0.01};

struct Decision {
  double alpha = 0.0;
  double threshold = 0.0;
  bool reject = false;
};

struct TestReport {
  double statistic = 0.0;
  double abs_statistic = 0.0;
  double p_value_signed = 0.0;
  double p_value_two_sided = 0.0;
  std::vector<Decision> decisions;
  McConfig config;

  const Decision& decision_at(double alpha) const {
    for (const auto& d : decisions) {
      if (std::fabs(d.alpha - alpha) < 1e-12) return d;
    }
    throw argument_error("no decision recorded at alpha=" + std::to_string(alpha));
  }
};

/// Full test of `data` against the Monte Carlo null of cfg (cfg.n_obs is
/// taken from the data).
inline TestReport run_test(const Sample& data, McConfig cfg, std::span<const double> alphas = kReportAlphas) {
  cfg.n_obs = data.size();
  cfg.validate();
  TestReport report;
  const StatisticValue stat = delta_nk(data, cfg.record, cfg.window);
  report.statistic = stat.value;
  report.abs_statistic = stat.abs_value;
  const std::vector<double> null = null_statistics(cfg);
  report.p_value_signed = p_value(stat.value, null, PValueMode::signed_one_sided);
  report.p_value_two_sided = p_value(stat.value, null, PValueMode::two_sided_abs);
  for (double alpha : alphas) {
    const double threshold = critical_value(null, alpha);
    report.decisions.push_back({alpha, threshold, stat.abs_value > threshold});
  }
  report.config = cfg;
  return report;
}

// ---------------------------------------------------------------------------
// Density export

struct Bandwidth {
  enum class Kind { silverman, fixed } kind = Kind::silverman;
  double value = 0.0;

  static Bandwidth silverman() { return {}; }
  static Bandwidth fixed(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw argument_error("fixed bandwidth must be finite and > 0");
    return {Kind::fixed, h};
  }
};

struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;

  /// Trapezoid rule over the grid.
  double integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
    return acc;
  }
};

/// Silverman's rule of thumb, 0.9 * min(sd, IQR/1.34) * n^(-1/5).
inline double silverman_bandwidth(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const std::vector<double> copy(values.begin(), values.end());
  const double iqr = interpolated_quantile(copy, 0.75) - interpolated_quantile(copy, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

inline constexpr std::size_t kDensityGridPoints = 512;

/// Gaussian kernel density of `stats` on an equally spaced grid spanning
/// [min - 3h, max + 3h].
inline DensityCurve density_export(std::span<const double> stats, std::size_t grid_points = kDensityGridPoints,
                                   Bandwidth bandwidth = Bandwidth::silverman()) {
  if (stats.size() < 2) throw argument_error("density needs at least two statistics");
  if (grid_points < 2) throw argument_error("density grid needs at least two points");
  const auto [lo_it, hi_it] = std::minmax_element(stats.begin(), stats.end());
  if (!(*hi_it > *lo_it)) throw numeric_error("density of zero-variance statistics is undefined");
  const double h = bandwidth.kind == Bandwidth::Kind::fixed ? bandwidth.value : silverman_bandwidth(stats);
  if (!(h > 0.0) || !std::isfinite(h)) throw numeric_error("degenerate kernel bandwidth");

  DensityCurve curve;
  curve.bandwidth = h;
  curve.x.resize(grid_points);
  curve.density.resize(grid_points);
  const double a = *lo_it - 3.0 * h;
  const double b = *hi_it + 3.0 * h;
  const double step = (b - a) / static_cast<double>(grid_points - 1);
  const double norm = 1.0 / (static_cast<double>(stats.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double x = a + step * static_cast<double>(g);
    double acc = 0.0;
    for (double s : stats) {
      const double z = (x - s) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve.x[g] = x;
    curve.density[g] = acc * norm;
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Table grids

/// Row-major (m, N) grid; cells where 2m >= N stay empty.
struct TableGrid {
  std::vector<int> m_values;
  std::vector<std::size_t> n_values;
  std::vector<std::optional<double>> cells;

  TableGrid() = default;
  TableGrid(std::vector<int> ms, std::vector<std::size_t> ns)
      : m_values(std::move(ms)), n_values(std::move(ns)), cells(m_values.size() * n_values.size()) {}

  std::optional<double>& cell(std::size_t row, std::size_t col) { return cells[row * n_values.size() + col]; }
  const std::optional<double>& cell(std::size_t row, std::size_t col) const {
    return cells[row * n_values.size() + col];
  }

  std::optional<double> at(int m, std::size_t n_obs) const {
    const auto r = std::find(m_values.begin(), m_values.end(), m);
    const auto c = std::find(n_values.begin(), n_values.end(), n_obs);
    if (r == m_values.end() || c == n_values.end()) return std::nullopt;
    return cell(static_cast<std::size_t>(r - m_values.begin()), static_cast<std::size_t>(c - n_values.begin()));
  }

  friend bool operator==(const TableGrid&, const TableGrid&) = default;
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

struct TableAxes {
  std::vector<std::size_t> n_values;
  std::vector<int> m_values;
  std::vector<double> alphas;

  void validate() const {
    if (n_values.empty() || m_values.empty() || alphas.empty()) {
      throw argument_error("table axes must each contain at least one value");
    }
    for (double a : alphas) {
      if (!(a > 0.0 && a < 1.0)) throw argument_error("alpha must lie in (0,1)");
    }
    for (int m : m_values) {
      if (m < 1) throw argument_error("window sizes must be >= 1");
    }
  }
};

/// One grid per alpha, plus provenance. Holds critical values or powers.
struct GridTables {
  std::string quantity;
  std::vector<double> alphas;
  std::vector<TableGrid> grids;
  Provenance provenance;
  std::vector<std::string> warnings;

  const TableGrid& for_alpha(double alpha) const {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (std::fabs(alphas[i] - alpha) < 1e-12) return grids[i];
    }
    throw argument_error("no table for alpha=" + std::to_string(alpha));
  }
};

using CriticalValueTable = GridTables;
using PowerTable = GridTables;

inline std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", alpha);
  return buf;
}

namespace detail {

inline Provenance table_provenance(const McConfig& tmpl) {
  return {{"seed", std::to_string(tmpl.master_seed)},
          {"reps", std::to_string(tmpl.reps)},
          {"null", tmpl.null_dist.name()},
          {"n", std::to_string(tmpl.record.n)},
          {"k", std::to_string(tmpl.record.k)},
          {"quantile", "linear interpolation between closest ranks, level 1-alpha/2 of |statistic|"}};
}

// Evaluates cell_fn(cfg) -> per-alpha values for every valid (m, N).
template <class CellFn>
GridTables fill_grid(const TableAxes& axes, const McConfig& tmpl, std::string quantity, CellFn&& cell_fn) {
  axes.validate();
  GridTables out;
  out.quantity = std::move(quantity);
  out.alphas = axes.alphas;
  out.grids.assign(axes.alphas.size(), TableGrid(axes.m_values, axes.n_values));
  out.provenance = table_provenance(tmpl);
  for (std::size_t r = 0; r < axes.m_values.size(); ++r) {
    for (std::size_t c = 0; c < axes.n_values.size(); ++c) {
      McConfig cfg = tmpl;
      cfg.n_obs = axes.n_values[c];
      cfg.window = WindowSpec(axes.m_values[r]);
      if (!cfg.window.valid_for(cfg.n_obs)) {
        out.warnings.push_back("skipping N=" + std::to_string(cfg.n_obs) + " m=" + std::to_string(cfg.window.m) +
                               ": requires 2m < N");
        continue;
      }
      const std::vector<double> values = cell_fn(cfg);
      for (std::size_t a = 0; a < axes.alphas.size(); ++a) out.grids[a].cell(r, c) = values[a];
    }
  }
  return out;
}

}  // namespace detail

/// Critical values over an (alpha, N, m) grid. All alphas of a cell share one
/// null run, so thresholds are ordered in alpha exactly.
inline CriticalValueTable run_critical_value_table(const TableAxes& axes, const McConfig& tmpl) {
  return detail::fill_grid(axes, tmpl, "critical value", [&](const McConfig& cfg) {
    const std::vector<double> null = null_statistics(cfg);
    std::vector<double> out;
    for (double a : axes.alphas) out.push_back(critical_value(null, a));
    return out;
  });
}

/// Powers against `alternative` over an (alpha, N, m) grid, with thresholds
/// from the null run of the same cell.
inline PowerTable run_power_table(const TableAxes& axes, const McConfig& tmpl, const DistributionSpec& alternative) {
  PowerTable table = detail::fill_grid(axes, tmpl, "power", [&](const McConfig& cfg) {
    const std::vector<double> null = null_statistics(cfg);
    const std::vector<double> alt = alternative_statistics(cfg, alternative);
    std::vector<double> out;
    for (double a : axes.alphas) out.push_back(rejection_rate(alt, critical_value(null, a)));
    return out;
  });
  table.provenance.emplace_back("alternative", alternative.name());
  return table;
}

}  // namespace symtest

#endif  // SYMTEST_MONTECARLO_HPP
