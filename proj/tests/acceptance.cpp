// Acceptance checks for the symmetry test library. Prints one PASS/FAIL line
// per criterion and exits non-zero if any criterion fails.
//
//   acceptance [--ci] [--threads T] [--only N]
//
// --ci runs criterion 2 at 1,000 replications with the wider tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "symtest/cli.hpp"
#include "symtest/published.hpp"
#include "symtest/symtest.hpp"

namespace {

using namespace symtest;
namespace fs = std::filesystem;

struct Options {
  bool ci = false;
  unsigned threads = 0;
  int only = 0;
};

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void check(bool ok, const std::string& line) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "  ok   " : "  MISS ") + line);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

McConfig base_config(const Options& opt, std::size_t reps = kDefaultReps) {
  McConfig cfg;
  cfg.reps = reps;
  cfg.threads = opt.threads;
  return cfg;
}

const published::GridTable& grid_table(int number) {
  for (const auto& t : published::kGridTables) {
    if (t.number == number) return t;
  }
  throw std::logic_error("no grid table " + std::to_string(number));
}

std::optional<double> published_cell(const published::GridTable& t, std::size_t n_obs, int m) {
  std::size_t r = 0, c = 0;
  while (published::kWindows[r] != m) ++r;
  while (published::kSizes[c] != n_obs) ++c;
  return t.at(r, c);
}

Outcome statistics_reproduction(const Options&) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& row : published::kDatasets) {
    const NamedDataset ds = load_embedded(*parse_dataset_id(row.id));
    const double stat = delta_22(ds.values, WindowSpec(row.m)).value;
    const double dev = std::fabs(stat - row.statistic);
    worst = std::max(worst, dev);
    o.check(ds.values.size() == row.n_obs && dev <= 5e-4,
            fmt("%s N=%zu m=%d statistic %.6f published %.4f", row.id, ds.values.size(), row.m, stat, row.statistic));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 1.0, fmt("runtime %.3f s", secs));
  o.summary = fmt("6 dataset statistics, max |dev| %.2e (tol 5e-4), %.3f s", worst, secs);
  return o;
}

Outcome critical_values(const Options& opt) {
  Outcome o;
  const std::size_t reps = opt.ci ? 1000 : kDefaultReps;
  const double tol = opt.ci ? 0.08 : 0.03;
  struct Cell {
    int table;
    std::size_t n_obs;
    int m;
  };
  const Cell cells[] = {{1, 10, 2},  {1, 30, 5},  {1, 50, 10}, {1, 100, 40}, {2, 20, 2},  {2, 30, 10},
                        {2, 50, 5},  {2, 100, 20}, {3, 10, 4},  {3, 20, 5},   {3, 50, 20}, {3, 100, 5}};
  double worst = 0.0;
  for (const auto& cell : cells) {
    const auto& t = grid_table(cell.table);
    McConfig cfg = base_config(opt, reps);
    cfg.n_obs = cell.n_obs;
    cfg.window = WindowSpec(cell.m);
    const double value = critical_value(null_statistics(cfg), t.alpha);
    const double pub = published_cell(t, cell.n_obs, cell.m).value();
    const double dev = std::fabs(value - pub);
    worst = std::max(worst, dev);
    o.check(dev <= tol, fmt("alpha=%.2f N=%zu m=%d critical value %.4f published %.4f", t.alpha, cell.n_obs, cell.m,
                            value, pub));
  }
  o.summary = fmt("%zu cells over three alphas at %zu reps, max |dev| %.4f (tol %.2f)", std::size(cells), reps,
                  worst, tol);
  return o;
}

Outcome power_reproduction(const Options& opt) {
  Outcome o;
  std::size_t compared = 0;
  double worst_chisq = 0.0, worst_normal = 0.0;
  auto check_power = [&](double value, double pub, double tol, const std::string& label) {
    ++compared;
    const double dev = std::fabs(value - pub);
    const bool ok = pub >= 1.0 ? value >= 0.999 : dev <= tol;
    o.check(ok, fmt("%s power %.4f published %.4f", label.c_str(), value, pub));
    return dev;
  };

  struct Cell {
    int table;
    std::size_t n_obs;
    int m;
  };
  const Cell cells[] = {{4, 20, 2}, {4, 30, 3},  {4, 50, 5},  {5, 20, 2},  {5, 40, 4},
                        {5, 50, 10}, {6, 100, 2}, {6, 100, 10}, {6, 100, 20}, {6, 100, 40}};
  for (const auto& cell : cells) {
    const auto& t = grid_table(cell.table);
    McConfig cfg = base_config(opt);
    cfg.n_obs = cell.n_obs;
    cfg.window = WindowSpec(cell.m);
    const double threshold = critical_value(null_statistics(cfg), t.alpha);
    const double value = power(cfg, DistributionSpec::chi_square(1), threshold);
    const double pub = published_cell(t, cell.n_obs, cell.m).value();
    worst_chisq = std::max(worst_chisq, check_power(value, pub, 0.02,
                                                    fmt("alpha=%.2f N=%zu m=%d chisq:1", t.alpha, cell.n_obs, cell.m)));
  }

  const DistributionSpec alts[] = {DistributionSpec::chi_square(1), DistributionSpec::chi_square(2),
                                   DistributionSpec::chi_square(3), DistributionSpec::std_normal()};
  for (const auto& row : published::kAlternativePowers) {
    McConfig cfg = base_config(opt);
    cfg.n_obs = row.n_obs;
    cfg.window = WindowSpec(row.m);
    const double threshold = critical_value(null_statistics(cfg), 0.05);
    const double pub[] = {row.chisq1, row.chisq2, row.chisq3, row.normal};
    for (std::size_t a = 0; a < 4; ++a) {
      const double value = power(cfg, alts[a], threshold);
      const bool normal = a == 3;
      const double dev = check_power(value, pub[a], normal ? 0.01 : 0.02,
                                     fmt("alpha=0.05 N=%zu m=%d %s", row.n_obs, row.m, alts[a].name().c_str()));
      (normal ? worst_normal : worst_chisq) = std::max(normal ? worst_normal : worst_chisq, dev);
    }
  }
  o.summary = fmt("%zu power cells, chi-square max |dev| %.4f (tol 0.02), N(0,1) max |dev| %.4f (tol 0.01)", compared,
                  worst_chisq, worst_normal);
  return o;
}

Outcome p_values(const Options& opt) {
  Outcome o;
  double worst = 0.0;
  for (const auto& row : published::kDatasets) {
    const NamedDataset ds = load_embedded(*parse_dataset_id(row.id));
    McConfig cfg = base_config(opt);
    cfg.n_obs = ds.values.size();
    cfg.window = WindowSpec(row.m);
    const double stat = delta_22(ds.values, cfg.window).value;
    const double p = p_value(stat, null_statistics(cfg), PValueMode::signed_one_sided);
    const double dev = std::fabs(p - row.p_value);
    worst = std::max(worst, dev);
    o.check(dev <= 0.02, fmt("%s signed p-value %.4f published %.4f", row.id, p, row.p_value));
  }
  o.summary = fmt("6 signed p-values at %zu reps, max |dev| %.4f (tol 0.02)", kDefaultReps, worst);
  return o;
}

Outcome algebraic_properties(const Options&) {
  Outcome o;
  RngStream rng(20240101);
  double worst_scale = 0.0, worst_reduction = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n_obs = 5 + rng() % 200;
    const auto dist = rep % 2 ? DistributionSpec::std_normal() : DistributionSpec::exponential(1.0);
    const Sample s = sample(dist, n_obs, rng);
    const WindowSpec w(1 + static_cast<int>(rng() % ((n_obs - 1) / 2)));
    const double a = std::exp(6.0 * rng.uniform01() - 3.0);
    const double b = 20.0 * rng.uniform01() - 10.0;
    const double base = delta_22(s, w).value;
    const double moved = delta_22(s.affine(a, b), w).value;
    const double scale = a * std::max(std::fabs(base), s.max() - s.min());
    worst_scale = std::max(worst_scale, std::fabs(moved - a * base) / scale);
    worst_reduction = std::max(worst_reduction, std::fabs(delta_plain(s, w).value - delta_nk(s, {1, 1}, w).value));
  }
  double worst_mirror = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (int i = 1; i <= 99; ++i) {
        const double u = i / 100.0;
        worst_mirror = std::max(worst_mirror, std::fabs(weight_upper(u, {n, k}) - weight_lower(1.0 - u, {n, k})));
      }
    }
  }
  o.check(worst_scale <= 1e-12, fmt("scale/shift equivariance, 1000 samples, max rel dev %.2e", worst_scale));
  o.check(worst_reduction <= 1e-12, fmt("plain vs (1,1) weights, max |dev| %.2e", worst_reduction));
  o.check(worst_mirror <= 1e-14, fmt("weight mirror symmetry on u grid, max |dev| %.2e", worst_mirror));
  o.summary = fmt("affine %.1e, reduction %.1e, mirror %.1e", worst_scale, worst_reduction, worst_mirror);
  return o;
}

Outcome characterization(const Options&) {
  Outcome o;
  const RecordSpec r(2, 2);
  for (const auto& d : {DistributionSpec::std_normal(), DistributionSpec::uniform01(),
                        DistributionSpec::power_function(1.0)}) {
    const double v = population_delta(d, r);
    o.check(std::fabs(v) <= 1e-7, fmt("population value %s = %.3e", d.name().c_str(), v));
  }
  const double pareto = population_delta(DistributionSpec::pareto(2.0), r);
  o.check(std::fabs(pareto) >= 1e-3, fmt("population value pareto:2 = %.6g (eps-truncated)", pareto));

  const auto expo = DistributionSpec::exponential(1.0);
  const double target = population_delta(expo, r);
  int decreasing = 0;
  const int seeds = 50;
  double mean_err[3] = {0, 0, 0};
  const std::size_t sizes[] = {200, 2000, 20000};
  for (int seed = 0; seed < seeds; ++seed) {
    double prev = INFINITY;
    bool ok = true;
    for (std::size_t j = 0; j < 3; ++j) {
      auto rng = RngStream::derive(kDefaultSeed, {6, sizes[j], static_cast<std::uint64_t>(seed)});
      const WindowSpec w(static_cast<int>(std::floor(std::sqrt(static_cast<double>(sizes[j])))));
      const double err = std::fabs(delta_22(sample(expo, sizes[j], rng), w).value - target);
      mean_err[j] += err / seeds;
      ok = ok && err < prev;
      prev = err;
    }
    decreasing += ok ? 1 : 0;
  }
  o.check(decreasing >= 45,
          fmt("exp:1 error decreasing along N=200,2000,20000 in %d/%d seeds; mean |err| %.3f, %.3f, %.3f vs %.4f",
              decreasing, seeds, mean_err[0], mean_err[1], mean_err[2], target));
  o.summary = fmt("symmetric families zero, pareto:2 %.3g, exp:1 convergence %d/%d seeds", pareto, decreasing, seeds);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const Options&) {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "symtest_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::vector<std::string>> files;
  for (const char* threads : {"1", "8"}) {
    const fs::path dir = root / ("threads" + std::string(threads));
    const std::string dir_s = dir.string();
    const char* argv[] = {"symtest", "reproduce", "2", "--seed", "7", "--threads", threads, "--out-dir", dir_s.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(std::size(argv)), argv, out, err);
    o.check(code == 0, fmt("reproduce 2 --seed 7 --threads %s exit %d", threads, code));
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    files.push_back(names);
  }
  o.check(!files[0].empty() && files[0] == files[1], fmt("same file set (%zu files)", files[0].size()));
  for (const auto& name : files[0]) {
    const bool same = slurp(root / "threads1" / name) == slurp(root / "threads8" / name);
    o.check(same, name + (same ? " byte-identical" : " differs"));
  }
  fs::remove_all(root);
  o.summary = fmt("%zu files byte-identical across 1 and 8 threads", files[0].size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--ci") {
      opt.ci = true;
    } else if (a == "--threads" && i + 1 < argc) {
      opt.threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else if (a == "--only" && i + 1 < argc) {
      opt.only = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--ci] [--threads T] [--only N]\n");
      return 2;
    }
  }

  const std::pair<const char*, std::function<Outcome(const Options&)>> criteria[] = {
      {"dataset statistics", statistics_reproduction},
      {"critical values", critical_values},
      {"power", power_reproduction},
      {"p-values", p_values},
      {"algebraic properties", algebraic_properties},
      {"population characterization", characterization},
      {"thread-count determinism", determinism},
  };

  bool all = true;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    if (opt.only && opt.only != static_cast<int>(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second(opt);
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    for (const auto& d : o.details) std::printf("%s\n", d.c_str());
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.summary.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
