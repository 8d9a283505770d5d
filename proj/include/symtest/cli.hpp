#ifndef SYMTEST_CLI_HPP
#define SYMTEST_CLI_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symtest/data_io.hpp"
#include "symtest/distributions.hpp"
#include "symtest/errors.hpp"
#include "symtest/estimators.hpp"
#include "symtest/montecarlo.hpp"
#include "symtest/published.hpp"

namespace symtest::cli {

inline constexpr const char* kSeedEnv = "SYMTEST_SEED";

inline std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Seed precedence: --seed, then $SYMTEST_SEED, then kDefaultSeed.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    std::uint64_t v = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw config_error(std::string(kSeedEnv) + " is not an unsigned integer: " + env);
    }
    return v;
  }
  return kDefaultSeed;
}

struct CommonOptions {
  std::size_t reps = kDefaultReps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  int n = 2;
  int k = 2;

  McConfig config() const {
    McConfig cfg;
    cfg.reps = reps;
    cfg.master_seed = resolve_seed(seed);
    cfg.threads = threads;
    cfg.record = RecordSpec(n, k);
    return cfg;
  }
};

inline Provenance config_provenance(const McConfig& cfg) {
  return {{"seed", std::to_string(cfg.master_seed)}, {"reps", std::to_string(cfg.reps)},
          {"N", std::to_string(cfg.n_obs)},          {"m", std::to_string(cfg.window.m)},
          {"n", std::to_string(cfg.record.n)},       {"k", std::to_string(cfg.record.k)},
          {"null", cfg.null_dist.name()}};
}

inline void print_provenance(std::ostream& out, const Provenance& p) {
  for (const auto& [key, value] : p) out << "# " << key << ": " << value << '\n';
}

// ---------------------------------------------------------------------------
// test / pvalue

struct DataOptions {
  std::string dataset;
  std::string data_path;
  std::optional<int> m;
};

struct ResolvedData {
  NamedDataset data;
  WindowSpec window;
};

inline ResolvedData resolve_data(const DataOptions& opts) {
  if (opts.dataset.empty() == opts.data_path.empty()) {
    throw config_error("exactly one of --dataset or --data is required");
  }
  NamedDataset data = [&] {
    if (!opts.dataset.empty()) {
      const auto id = parse_dataset_id(opts.dataset);
      if (!id) throw config_error("unknown dataset '" + opts.dataset + "' (expected ds1..ds6)");
      return load_embedded(*id);
    }
    return load_file(opts.data_path);
  }();
  if (!opts.m && data.default_m == 0) throw config_error("--m is required with --data");
  const WindowSpec window(opts.m.value_or(data.default_m));
  window.require_valid_for(data.values.size());
  return {std::move(data), window};
}

struct TestOptions {
  DataOptions data;
  CommonOptions common;
  double alpha = 0.05;
  PValueMode mode = PValueMode::signed_one_sided;
  bool key_value = false;
};

inline TestReport cmd_test(const TestOptions& opts, std::ostream& out) {
  const ResolvedData rd = resolve_data(opts.data);
  McConfig cfg = opts.common.config();
  cfg.window = rd.window;
  std::vector<double> alphas(std::begin(kReportAlphas), std::end(kReportAlphas));
  if (std::none_of(alphas.begin(), alphas.end(), [&](double a) { return std::fabs(a - opts.alpha) < 1e-12; })) {
    alphas.push_back(opts.alpha);
  }
  const TestReport report = run_test(rd.data.values, cfg, alphas);
  const Decision& headline = report.decision_at(opts.alpha);
  const double headline_p =
      opts.mode == PValueMode::signed_one_sided ? report.p_value_signed : report.p_value_two_sided;

  print_provenance(out, config_provenance(report.config));
  out << "# data: " << rd.data.id << '\n';
  if (opts.key_value) {
    out << "statistic=" << format_number(report.statistic) << '\n'
        << "abs_statistic=" << format_number(report.abs_statistic) << '\n'
        << "p_value_signed=" << format_number(report.p_value_signed) << '\n'
        << "p_value_two_sided=" << format_number(report.p_value_two_sided) << '\n';
    for (const auto& d : report.decisions) {
      out << "threshold_" << format_alpha(d.alpha) << '=' << format_number(d.threshold) << '\n'
          << "decision_" << format_alpha(d.alpha) << '=' << (d.reject ? "reject" : "fail_to_reject") << '\n';
    }
    return report;
  }
  out << "data:                " << rd.data.id << " (N=" << report.config.n_obs << ")\n"
      << "window m:            " << report.config.window.m << '\n'
      << "record (n,k):        (" << report.config.record.n << ',' << report.config.record.k << ")\n"
      << "statistic:           " << fixed(report.statistic) << '\n'
      << "|statistic|:         " << fixed(report.abs_statistic) << '\n'
      << "p-value (signed):    " << fixed(report.p_value_signed) << "   share of null statistics > observed\n"
      << "p-value (two-sided): " << fixed(report.p_value_two_sided)
      << "   share of |null statistics| > |observed|\n";
  for (const auto& d : report.decisions) {
    out << "alpha=" << format_alpha(d.alpha) << "  critical value " << fixed(d.threshold) << "  -> "
        << (d.reject ? "reject symmetry" : "fail to reject symmetry") << '\n';
  }
  out << "decision at alpha=" << format_alpha(opts.alpha) << ": "
      << (headline.reject ? "reject" : "fail to reject") << " (" << to_string(opts.mode)
      << " p-value " << fixed(headline_p) << ")\n";
  return report;
}

struct PValueOptions {
  DataOptions data;
  CommonOptions common;
  std::optional<double> observed;
  std::optional<std::size_t> n_obs;
  PValueMode mode = PValueMode::signed_one_sided;
};

inline double cmd_pvalue(const PValueOptions& opts, std::ostream& out) {
  McConfig cfg = opts.common.config();
  double observed = 0.0;
  std::string source;
  if (opts.observed) {
    if (!opts.n_obs || !opts.data.m) throw config_error("--observed requires --N and --m");
    if (!opts.data.dataset.empty() || !opts.data.data_path.empty()) {
      throw config_error("--observed cannot be combined with --dataset/--data");
    }
    cfg.n_obs = *opts.n_obs;
    cfg.window = WindowSpec(*opts.data.m);
    observed = *opts.observed;
    source = "observed value";
  } else {
    const ResolvedData rd = resolve_data(opts.data);
    cfg.n_obs = rd.data.values.size();
    cfg.window = rd.window;
    observed = delta_nk(rd.data.values, cfg.record, cfg.window).value;
    source = rd.data.id;
  }
  const std::vector<double> null = null_statistics(cfg);
  const double p_signed = p_value(observed, null, PValueMode::signed_one_sided);
  const double p_two = p_value(observed, null, PValueMode::two_sided_abs);
  print_provenance(out, config_provenance(cfg));
  out << "# source: " << source << '\n'
      << "statistic=" << format_number(observed) << '\n'
      << "p_value_signed=" << format_number(p_signed) << '\n'
      << "p_value_two_sided=" << format_number(p_two) << '\n'
      << "p_value=" << format_number(opts.mode == PValueMode::signed_one_sided ? p_signed : p_two) << '\n'
      << "mode=" << to_string(opts.mode) << '\n';
  return opts.mode == PValueMode::signed_one_sided ? p_signed : p_two;
}

// ---------------------------------------------------------------------------
// critical-values / power

inline const std::vector<std::size_t> kTableSizes(published::kSizes.begin(), published::kSizes.end());
inline const std::vector<int> kTableWindows(published::kWindows.begin(), published::kWindows.end());

struct CriticalValuesOptions {
  CommonOptions common;
  std::vector<std::size_t> sizes = kTableSizes;
  std::vector<int> windows = kTableWindows;
  std::vector<double> alphas = {0.10, 0.05, 0.01};
  std::string null = "normal";
  std::string out_dir;
};

inline std::string critical_values_filename(double alpha) {
  return "critical_values_alpha" + format_alpha(alpha) + ".csv";
}

inline void emit_grid(const GridTables& table, std::size_t idx, const std::string& path, std::ostream& out) {
  Provenance p = table.provenance;
  p.emplace_back("alpha", format_alpha(table.alphas[idx]));
  p.emplace_back("quantity", table.quantity);
  if (path.empty()) {
    write_table_stream(out, table.grids[idx], p);
  } else {
    write_table(table.grids[idx], p, path);
    out << "wrote " << path << '\n';
  }
}

inline CriticalValueTable cmd_critical_values(const CriticalValuesOptions& opts, std::ostream& out,
                                              std::ostream& err) {
  McConfig tmpl = opts.common.config();
  tmpl.null_dist = DistributionSpec::parse(opts.null);
  const CriticalValueTable table = run_critical_value_table({opts.sizes, opts.windows, opts.alphas}, tmpl);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  for (std::size_t a = 0; a < table.alphas.size(); ++a) {
    const std::string path =
        opts.out_dir.empty() ? "" : (std::filesystem::path(opts.out_dir) / critical_values_filename(table.alphas[a])).string();
    emit_grid(table, a, path, out);
  }
  return table;
}

struct PowerOptions {
  CommonOptions common;
  std::string alternative = "chisq:1";
  std::vector<std::size_t> sizes = kTableSizes;
  std::vector<int> windows = kTableWindows;
  double alpha = 0.05;
  std::string null = "normal";
  std::string out;
};

inline PowerTable cmd_power(const PowerOptions& opts, std::ostream& out, std::ostream& err) {
  McConfig tmpl = opts.common.config();
  tmpl.null_dist = DistributionSpec::parse(opts.null);
  const DistributionSpec alt = DistributionSpec::parse(opts.alternative);
  const PowerTable table = run_power_table({opts.sizes, opts.windows, {opts.alpha}}, tmpl, alt);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  emit_grid(table, 0, opts.out, out);
  return table;
}

// ---------------------------------------------------------------------------
// density

struct DensityOptions {
  CommonOptions common;
  std::size_t n_obs = 100;
  int m = 40;
  std::size_t grid = kDensityGridPoints;
  std::string bandwidth = "silverman";
  std::string out;
};

inline Bandwidth parse_bandwidth(const std::string& text) {
  if (text == "silverman") return Bandwidth::silverman();
  const auto v = symtest::detail::parse_double(text);
  if (!v) throw config_error("bandwidth must be 'silverman' or a positive number, got '" + text + "'");
  return Bandwidth::fixed(*v);
}

struct DensitySummary {
  double mean = 0, sd = 0, min = 0, max = 0, mode = 0, integral = 0, bandwidth = 0;
};

inline DensitySummary summarize(std::span<const double> stats, const DensityCurve& curve) {
  DensitySummary s;
  const auto n = static_cast<double>(stats.size());
  for (double v : stats) s.mean += v;
  s.mean /= n;
  for (double v : stats) s.sd += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(s.sd / (n - 1.0));
  const auto [lo, hi] = std::minmax_element(stats.begin(), stats.end());
  s.min = *lo;
  s.max = *hi;
  const auto peak = std::max_element(curve.density.begin(), curve.density.end()) - curve.density.begin();
  s.mode = curve.x[static_cast<std::size_t>(peak)];
  s.integral = curve.integral();
  s.bandwidth = curve.bandwidth;
  return s;
}

inline void write_summary(std::ostream& out, const DensitySummary& s) {
  out << "mean=" << format_number(s.mean) << '\n'
      << "sd=" << format_number(s.sd) << '\n'
      << "min=" << format_number(s.min) << '\n'
      << "max=" << format_number(s.max) << '\n'
      << "mode=" << format_number(s.mode) << '\n'
      << "bandwidth=" << format_number(s.bandwidth) << '\n'
      << "integral=" << format_number(s.integral) << '\n';
}

inline DensityCurve cmd_density(const DensityOptions& opts, std::ostream& out) {
  McConfig cfg = opts.common.config();
  cfg.n_obs = opts.n_obs;
  cfg.window = WindowSpec(opts.m);
  const std::vector<double> stats = null_statistics(cfg);
  const DensityCurve curve = density_export(stats, opts.grid, parse_bandwidth(opts.bandwidth));
  Provenance p = config_provenance(cfg);
  p.emplace_back("kernel", "gaussian, bandwidth " + opts.bandwidth);
  if (opts.out.empty()) {
    print_provenance(out, p);
    out << "x,density\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      out << format_number(curve.x[i]) << ',' << format_number(curve.density[i]) << '\n';
    }
  } else {
    write_density(curve, p, opts.out);
    out << "wrote " << opts.out << '\n';
    write_summary(out, summarize(stats, curve));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceOptions {
  CommonOptions common;
  std::string table;
  std::string out_dir = "reproduced";
};

struct ReproduceResult {
  std::vector<std::string> files;
  double max_abs_deviation = 0.0;
  std::size_t compared = 0;
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name,
                                 ReproduceResult& result) {
  const auto path = dir / name;
  auto out = symtest::detail::open_for_write(path);
  result.files.push_back(path.string());
  return out;
}

inline ReproduceResult reproduce_grid(const published::GridTable& ref, const McConfig& tmpl,
                                      const std::filesystem::path& dir, std::ostream& log) {
  ReproduceResult result;
  const TableAxes axes{kTableSizes, kTableWindows, {ref.alpha}};
  const GridTables table = ref.is_power
                               ? run_power_table(axes, tmpl, DistributionSpec::chi_square(1))
                               : run_critical_value_table(axes, tmpl);
  const std::string stem = "table" + std::to_string(ref.number);
  Provenance p = table.provenance;
  p.emplace_back("alpha", format_alpha(ref.alpha));
  p.emplace_back("quantity", table.quantity);
  {
    auto out = open_output(dir, stem + "_reproduced.csv", result);
    write_table_stream(out, table.grids[0], p);
    symtest::detail::finish_write(out, dir / (stem + "_reproduced.csv"));
  }
  auto out = open_output(dir, stem + "_comparison.csv", result);
  print_provenance(out, p);
  out << "m,N,published,reproduced,abs_deviation\n";
  for (std::size_t r = 0; r < kTableWindows.size(); ++r) {
    for (std::size_t c = 0; c < kTableSizes.size(); ++c) {
      const auto pub = ref.at(r, c);
      const auto rep = table.grids[0].cell(r, c);
      if (pub.has_value() != rep.has_value()) {
        throw numeric_error("blank-cell layout mismatch at m=" + std::to_string(kTableWindows[r]) +
                            " N=" + std::to_string(kTableSizes[c]));
      }
      if (!pub) continue;
      const double dev = std::fabs(*rep - *pub);
      result.max_abs_deviation = std::max(result.max_abs_deviation, dev);
      ++result.compared;
      out << kTableWindows[r] << ',' << kTableSizes[c] << ',' << fixed(*pub) << ',' << fixed(*rep) << ','
          << fixed(dev) << '\n';
    }
  }
  symtest::detail::finish_write(out, dir / (stem + "_comparison.csv"));
  log << "table " << ref.number << ": " << result.compared << " cells, max |deviation| "
      << fixed(result.max_abs_deviation) << '\n';
  return result;
}

inline ReproduceResult reproduce_alternatives(const McConfig& tmpl, const std::filesystem::path& dir,
                                              std::ostream& log) {
  ReproduceResult result;
  auto out = open_output(dir, "table7_comparison.csv", result);
  Provenance p = symtest::detail::table_provenance(tmpl);
  p.emplace_back("alpha", "0.05");
  p.emplace_back("quantity", "power");
  print_provenance(out, p);
  out << "N,m,alternative,published,reproduced,abs_deviation\n";
  const DistributionSpec alts[] = {DistributionSpec::chi_square(1), DistributionSpec::chi_square(2),
                                   DistributionSpec::chi_square(3), DistributionSpec::std_normal()};
  for (const auto& row : published::kAlternativePowers) {
    McConfig cfg = tmpl;
    cfg.n_obs = row.n_obs;
    cfg.window = WindowSpec(row.m);
    const double threshold = critical_value(null_statistics(cfg), 0.05);
    const double pub[] = {row.chisq1, row.chisq2, row.chisq3, row.normal};
    for (std::size_t a = 0; a < 4; ++a) {
      const double rep = rejection_rate(alternative_statistics(cfg, alts[a]), threshold);
      const double dev = std::fabs(rep - pub[a]);
      result.max_abs_deviation = std::max(result.max_abs_deviation, dev);
      ++result.compared;
      out << row.n_obs << ',' << row.m << ',' << alts[a].name() << ',' << fixed(pub[a]) << ',' << fixed(rep)
          << ',' << fixed(dev) << '\n';
    }
  }
  symtest::detail::finish_write(out, dir / "table7_comparison.csv");
  log << "table 7: " << result.compared << " cells, max |deviation| " << fixed(result.max_abs_deviation) << '\n';
  return result;
}

inline ReproduceResult reproduce_datasets(const McConfig& tmpl, const std::filesystem::path& dir, std::ostream& log) {
  ReproduceResult result;
  auto out = open_output(dir, "table9_comparison.csv", result);
  Provenance p = symtest::detail::table_provenance(tmpl);
  p.emplace_back("p_value", "signed: share of null statistics > observed");
  print_provenance(out, p);
  out << "dataset,N,m,published_statistic,statistic,statistic_abs_deviation,published_p_value,p_value,"
         "p_value_abs_deviation,p_value_two_sided\n";
  double max_stat_dev = 0.0;
  for (const auto& row : published::kDatasets) {
    const NamedDataset ds = load_embedded(*parse_dataset_id(row.id));
    McConfig cfg = tmpl;
    cfg.n_obs = ds.values.size();
    cfg.window = WindowSpec(ds.default_m);
    const double stat = delta_22(ds.values, cfg.window).value;
    const std::vector<double> null = null_statistics(cfg);
    const double p_signed = p_value(stat, null, PValueMode::signed_one_sided);
    const double p_two = p_value(stat, null, PValueMode::two_sided_abs);
    const double stat_dev = std::fabs(stat - row.statistic);
    max_stat_dev = std::max(max_stat_dev, stat_dev);
    result.max_abs_deviation = std::max(result.max_abs_deviation, stat_dev);
    ++result.compared;
    out << row.id << ',' << cfg.n_obs << ',' << cfg.window.m << ',' << fixed(row.statistic) << ','
        << fixed(stat, 6) << ',' << fixed(stat_dev, 6) << ',' << fixed(row.p_value) << ',' << fixed(p_signed)
        << ',' << fixed(std::fabs(p_signed - row.p_value)) << ',' << fixed(p_two) << '\n';
  }
  symtest::detail::finish_write(out, dir / "table9_comparison.csv");
  log << "table 9: 6 datasets, max |statistic deviation| " << fixed(max_stat_dev, 6) << '\n';
  return result;
}

inline ReproduceResult reproduce_figure(const McConfig& tmpl, const std::filesystem::path& dir, std::ostream& log) {
  ReproduceResult result;
  McConfig cfg = tmpl;
  cfg.n_obs = 100;
  cfg.window = WindowSpec(40);
  const std::vector<double> stats = null_statistics(cfg);
  const DensityCurve curve = density_export(stats);
  Provenance p = config_provenance(cfg);
  p.emplace_back("kernel", "gaussian, bandwidth silverman");
  write_density(curve, p, dir / "figure1_density.csv");
  result.files.push_back((dir / "figure1_density.csv").string());
  const DensitySummary s = summarize(stats, curve);
  auto out = open_output(dir, "figure1_summary.txt", result);
  print_provenance(out, p);
  write_summary(out, s);
  symtest::detail::finish_write(out, dir / "figure1_summary.txt");
  log << "figure 1: N=100 m=40, mean " << fixed(s.mean) << ", sd " << fixed(s.sd) << ", mode " << fixed(s.mode)
      << '\n';
  return result;
}

}  // namespace detail

inline const std::vector<std::string> kReproducible = {"1", "2", "3", "4", "5", "6", "7", "9", "fig1"};

inline ReproduceResult cmd_reproduce(const ReproduceOptions& opts, std::ostream& out) {
  const McConfig tmpl = opts.common.config();
  const std::filesystem::path dir(opts.out_dir);
  ReproduceResult result;
  if (opts.table == "7") {
    result = detail::reproduce_alternatives(tmpl, dir, out);
  } else if (opts.table == "9") {
    result = detail::reproduce_datasets(tmpl, dir, out);
  } else if (opts.table == "fig1") {
    result = detail::reproduce_figure(tmpl, dir, out);
  } else {
    const auto it = std::find_if(published::kGridTables.begin(), published::kGridTables.end(),
                                 [&](const auto& t) { return std::to_string(t.number) == opts.table; });
    if (it == published::kGridTables.end()) {
      throw config_error("unknown table '" + opts.table + "' (expected 1-7, 9 or fig1)");
    }
    result = detail::reproduce_grid(*it, tmpl, dir, out);
  }
  for (const auto& f : result.files) out << "wrote " << f << '\n';
  return result;
}

// ---------------------------------------------------------------------------
// Entry point

namespace detail {

inline void add_common(CLI::App* cmd, CommonOptions& c, bool record = true) {
  cmd->add_option("--reps", c.reps, "Monte Carlo replications")->default_val(kDefaultReps)->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
  cmd->add_option("--seed", c.seed,
                  "Master seed (overrides $" + std::string(kSeedEnv) + "; default " + std::to_string(kDefaultSeed) + ")");
  cmd->add_option("--threads", c.threads, "Worker threads, 0 = all cores; output does not depend on it")
      ->default_val(0);
  if (record) {
    cmd->add_option("--n", c.n, "Record index n")->default_val(2)->check(CLI::PositiveNumber);
    cmd->add_option("--k", c.k, "Record level k")->default_val(2)->check(CLI::PositiveNumber);
  }
}

inline void add_data(CLI::App* cmd, DataOptions& d) {
  auto* ds = cmd->add_option("--dataset", d.dataset, "Embedded dataset ds1..ds6 (default m from its published row)");
  auto* df = cmd->add_option("--data", d.data_path,
                             "File of reals: whitespace/newline separated, or single-column .csv");
  ds->excludes(df);
  cmd->add_option("--m", d.m, "Window size, 2m < N")->check(CLI::PositiveNumber);
}

inline void add_mode(CLI::App* cmd, PValueMode& mode) {
  cmd->add_option("--pvalue-mode", mode,
                  "signed: share of null statistics > observed (default, matches the published p-values); "
                  "two-sided: share of |null statistics| > |observed|")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, PValueMode>{{"signed", PValueMode::signed_one_sided},
                                            {"two-sided", PValueMode::two_sided_abs}},
          CLI::ignore_case))
      ->default_str("signed");
}

}  // namespace detail

/// Runs the CLI. Exit codes: 0 success, 1 data or numeric error, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"symtest: test of symmetry from cumulative past/residual extropy of k-record values"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  TestOptions test_opts;
  auto* test = app.add_subcommand("test", "Test a dataset for symmetry and print the statistic, p-values and decisions");
  detail::add_data(test, test_opts.data);
  detail::add_common(test, test_opts.common);
  test->add_option("--alpha", test_opts.alpha, "Headline significance level (0.10, 0.05, 0.01 are always reported)")
      ->default_val(0.05)
      ->check(CLI::Range(0.0, 1.0));
  detail::add_mode(test, test_opts.mode);
  test->add_flag("--kv", test_opts.key_value, "Print key=value lines instead of a report");

  PValueOptions pv_opts;
  auto* pv = app.add_subcommand("pvalue", "Monte Carlo p-value of a dataset or of a given statistic value");
  detail::add_data(pv, pv_opts.data);
  detail::add_common(pv, pv_opts.common);
  pv->add_option("--observed", pv_opts.observed, "Statistic value to evaluate instead of data (needs --N, --m)");
  pv->add_option("--N", pv_opts.n_obs, "Sample size for --observed")->check(CLI::PositiveNumber);
  detail::add_mode(pv, pv_opts.mode);

  CriticalValuesOptions cv_opts;
  auto* cv = app.add_subcommand("critical-values", "Critical values of |statistic| over an (alpha, N, m) grid");
  detail::add_common(cv, cv_opts.common);
  cv->add_option("--N", cv_opts.sizes, "Sample sizes")->delimiter(',')->default_str("5,10,20,30,40,50,100");
  cv->add_option("--m", cv_opts.windows, "Window sizes; cells with 2m >= N are left blank")
      ->delimiter(',')
      ->default_str("2..30,40");
  cv->add_option("--alpha", cv_opts.alphas, "Significance levels, one file each")
      ->delimiter(',')
      ->default_str("0.10,0.05,0.01");
  cv->add_option("--null", cv_opts.null, "Null distribution")->default_val("normal");
  cv->add_option("--out-dir", cv_opts.out_dir, "Directory for critical_values_alpha<A>.csv (default: stdout)");

  PowerOptions pw_opts;
  auto* pw = app.add_subcommand("power", "Power against an alternative over an (N, m) grid");
  detail::add_common(pw, pw_opts.common);
  pw->add_option("--alternative", pw_opts.alternative,
                 "normal | uniform | chisq:DF | exp:RATE | pareto:THETA | power:THETA")
      ->default_val("chisq:1");
  pw->add_option("--N", pw_opts.sizes, "Sample sizes")->delimiter(',')->default_str("5,10,20,30,40,50,100");
  pw->add_option("--m", pw_opts.windows, "Window sizes")->delimiter(',')->default_str("2..30,40");
  pw->add_option("--alpha", pw_opts.alpha, "Significance level")->default_val(0.05)->check(CLI::Range(0.0, 1.0));
  pw->add_option("--null", pw_opts.null, "Null distribution for the thresholds")->default_val("normal");
  pw->add_option("--out", pw_opts.out, "Output CSV (default: stdout)");

  DensityOptions dn_opts;
  auto* dn = app.add_subcommand("density", "Kernel density of the null statistic");
  detail::add_common(dn, dn_opts.common);
  dn->add_option("--N", dn_opts.n_obs, "Sample size")->default_val(100)->check(CLI::PositiveNumber);
  dn->add_option("--m", dn_opts.m, "Window size")->default_val(40)->check(CLI::PositiveNumber);
  dn->add_option("--grid", dn_opts.grid, "Grid points")->default_val(kDensityGridPoints)->check(CLI::Range(2, 1000000));
  dn->add_option("--bandwidth", dn_opts.bandwidth, "silverman or a fixed positive bandwidth")
      ->default_val("silverman");
  dn->add_option("--out", dn_opts.out, "Output CSV (default: stdout)");

  ReproduceOptions rp_opts;
  auto* rp = app.add_subcommand("reproduce", "Reproduce a published table next to its published values");
  rp->add_option("table", rp_opts.table, "1-7, 9 or fig1")->required()->check(CLI::IsMember(kReproducible));
  detail::add_common(rp, rp_opts.common, false);
  rp->add_option("--out-dir", rp_opts.out_dir, "Output directory")->default_val("reproduced");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test) cmd_test(test_opts, out);
    else if (*pv) cmd_pvalue(pv_opts, out);
    else if (*cv) cmd_critical_values(cv_opts, out, err);
    else if (*pw) cmd_power(pw_opts, out, err);
    else if (*dn) cmd_density(dn_opts, out);
    else if (*rp) cmd_reproduce(rp_opts, out);
  } catch (const config_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const argument_error& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace symtest::cli

#endif  // SYMTEST_CLI_HPP
