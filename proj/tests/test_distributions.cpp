#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symtest/distributions.hpp"
#include "symtest/estimators.hpp"
#include "symtest/montecarlo.hpp"
#include "symtest/parallel.hpp"
#include "symtest/rng.hpp"

namespace symtest {
namespace {

TEST(RngTest, SeededStreamsAreReproducible) {
  RngStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
  auto d1 = RngStream::derive(7, {1, 20, 3});
  auto d2 = RngStream::derive(7, {1, 20, 3});
  auto d3 = RngStream::derive(7, {1, 20, 4});
  const auto first = d1();
  EXPECT_EQ(first, d2());
  EXPECT_NE(first, d3());
}

TEST(RngTest, UniformOpenNeverHitsZero) {
  RngStream rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SamplingTest, SeededSamplesAreIdentical) {
  for (const auto& d : {DistributionSpec::std_normal(), DistributionSpec::chi_square(3),
                        DistributionSpec::pareto(2.5), DistributionSpec::power_function(0.5)}) {
    RngStream a(11), b(11);
    EXPECT_EQ(sample(d, 50, a), sample(d, 50, b)) << d.name();
  }
}

TEST(SamplingTest, ChiSquareOneMean) {
  RngStream rng(2023);
  const std::size_t n = 100000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += draw(DistributionSpec::chi_square(1), rng);
  const double se = std::sqrt(2.0 / static_cast<double>(n));
  EXPECT_NEAR(sum / static_cast<double>(n), 1.0, 3.0 * se);
}

TEST(SamplingTest, NormalMoments) {
  RngStream rng(31);
  const std::size_t n = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.standard_normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 3.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(s2 / n, 1.0, 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST(SamplingTest, UniformPassesKolmogorovSmirnov) {
  RngStream rng(77);
  const Sample s = sample(DistributionSpec::uniform01(), 5000, rng);
  const std::vector<double> v(s.values().begin(), s.values().end());
  EXPECT_LT(oracle::ks_uniform(v), oracle::ks_critical_1pct(v.size()));
}

TEST(SamplingTest, ParetoThroughCdfIsUniform) {
  RngStream rng(78);
  const double theta = 3.0;
  std::vector<double> u;
  for (int i = 0; i < 5000; ++i) u.push_back(1.0 - std::pow(draw(DistributionSpec::pareto(theta), rng), -theta));
  EXPECT_LT(oracle::ks_uniform(u), oracle::ks_critical_1pct(u.size()));
}

TEST(QuantileTest, ClosedForms) {
  EXPECT_DOUBLE_EQ(quantile(DistributionSpec::uniform01(), 0.3), 0.3);
  EXPECT_NEAR(quantile(DistributionSpec::exponential(2.0), 0.5), std::log(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(quantile(DistributionSpec::std_normal(), 0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(quantile(DistributionSpec::pareto(2.0), 0.75), 2.0, 1e-14);
  EXPECT_NEAR(quantile(DistributionSpec::power_function(2.0), 0.25), 0.5, 1e-15);
  EXPECT_THROW(quantile(DistributionSpec::uniform01(), 0.0), argument_error);
}

TEST(QuantileDensityTest, ClosedForms) {
  const auto qu = quantile_density(DistributionSpec::uniform01());
  EXPECT_EQ(qu(0.2), 1.0);
  const auto qe = quantile_density(DistributionSpec::exponential(1.0));
  EXPECT_NEAR(qe(0.75), 4.0, 1e-14);
  EXPECT_NEAR(qe.upper(1e-9), 1e9, 1e-3);
}

TEST(QuantileDensityTest, MatchesFiniteDifferencesOfQuantile) {
  const double h = 1e-6;
  for (const auto& d : {DistributionSpec::power_function(2.0), DistributionSpec::power_function(0.7),
                        DistributionSpec::pareto(3.0), DistributionSpec::std_normal(),
                        DistributionSpec::chi_square(2), DistributionSpec::exponential(1.5)}) {
    const auto q = quantile_density(d);
    for (double u = 0.05; u < 0.96; u += 0.05) {
      const double fd = (quantile(d, u + h) - quantile(d, u - h)) / (2.0 * h);
      EXPECT_NEAR(q.lower(u), fd, 1e-5 * std::max(1.0, fd)) << d.name() << " u=" << u;
      EXPECT_NEAR(q.upper(1.0 - u), q.lower(u), 1e-9 * std::max(1.0, fd)) << d.name() << " u=" << u;
    }
  }
}

TEST(PopulationTest, SymmetricFamiliesGiveZero) {
  for (const auto& r : {RecordSpec(2, 2), RecordSpec(1, 1), RecordSpec(3, 2)}) {
    EXPECT_NEAR(population_delta(DistributionSpec::std_normal(), r), 0.0, 1e-7);
    EXPECT_NEAR(population_delta(DistributionSpec::uniform01(), r), 0.0, 1e-7);
    EXPECT_NEAR(population_delta(DistributionSpec::power_function(1.0), r), 0.0, 1e-7);
  }
  EXPECT_NEAR(population_delta_plain(DistributionSpec::std_normal()), 0.0, 1e-7);
}

TEST(PopulationTest, FrozenArbitraryPrecisionValues) {
  // 30-digit mpmath quadrature of the same truncated functional, eps = 1e-12.
  const auto rel = [](double expect) { return 1e-9 * std::fabs(expect); };
  EXPECT_NEAR(population_delta(DistributionSpec::power_function(2.0), {2, 2}), -0.18842075295913737,
              rel(0.18842075295913737));
  EXPECT_NEAR(population_delta(DistributionSpec::power_function(3.0), {1, 3}), -0.21080164835181509,
              rel(0.21080164835181509));
  EXPECT_NEAR(population_delta(DistributionSpec::power_function(2.0), {3, 1}), -0.14721810163815289,
              rel(0.14721810163815289));
  EXPECT_NEAR(population_delta(DistributionSpec::exponential(1.0), {2, 2}), 13.00156926726256708,
              rel(13.00156926726256708));
  EXPECT_NEAR(population_delta(DistributionSpec::exponential(1.0), {1, 1}), 12.81551055796577410,
              rel(12.81551055796577410));
  EXPECT_NEAR(population_delta(DistributionSpec::pareto(3.0), {2, 2}), 4999.163494605858, rel(4999.163494605858));
  EXPECT_NEAR(population_delta(DistributionSpec::pareto(2.0), {2, 2}), 499998.9291754096751,
              rel(499998.9291754096751));
}

TEST(PopulationTest, ExponentialScalesInverselyWithRate) {
  const double base = population_delta(DistributionSpec::exponential(1.0), {2, 2});
  EXPECT_NEAR(population_delta(DistributionSpec::exponential(4.0), {2, 2}), base / 4.0, 1e-9 * base);
}

TEST(PopulationTest, PlainWeightMatchesUnitRecordPath) {
  for (const auto& d : {DistributionSpec::exponential(1.0), DistributionSpec::chi_square(2),
                        DistributionSpec::power_function(2.0)}) {
    const double a = population_delta(d, {1, 1});
    EXPECT_NEAR(a, population_delta_plain(d), 1e-8 * std::max(1.0, std::fabs(a))) << d.name();
  }
}

TEST(PopulationTest, ParetoAgreesWithMidpointOracle) {
  const double theta = 2.0;
  const RecordSpec r(2, 2);
  const double eps = 1e-12;
  const double quad = population_delta(DistributionSpec::pareto(theta), r, eps);
  EXPECT_GE(quad, 1e-3);
  const double mid = oracle::midpoint_logit(
      [&](double u) { return weight_upper(u, r) - weight_lower(u, r); },
      [&](double, double v) { return std::pow(v, -1.0 / theta - 1.0) / theta; }, eps, 1000000);
  EXPECT_NEAR(quad, mid, 1e-6 * std::fabs(mid));
}

TEST(PopulationTest, PowerFunctionAgreesWithMidpointOracle) {
  const double theta = 2.0;
  const RecordSpec r(2, 2);
  const double quad = population_delta(DistributionSpec::power_function(theta), r);
  const double mid = oracle::midpoint_logit(
      [&](double u) { return weight_upper(u, r) - weight_lower(u, r); },
      [&](double u, double) { return std::pow(u, 1.0 / theta - 1.0) / theta; }, 1e-12, 200000);
  EXPECT_NEAR(quad, mid, 1e-6);
}

TEST(PopulationTest, ParetoIntegrabilityGuard) {
  EXPECT_THROW(population_delta(DistributionSpec::pareto(0.2), {2, 2}), domain_error);
  EXPECT_THROW(population_delta(DistributionSpec::pareto(0.5), {1, 1}), domain_error);
  EXPECT_NO_THROW(population_delta(DistributionSpec::pareto(1.0), {1, 1}));
}

TEST(DistributionSpecTest, ParseAndNameRoundTrip) {
  for (const char* text : {"normal", "uniform", "chisq:3", "exp:1.5", "pareto:2", "power:0.5"}) {
    const auto d = DistributionSpec::parse(text);
    EXPECT_EQ(d.name(), text);
    EXPECT_EQ(DistributionSpec::parse(d.name()), d);
  }
  for (const char* bad : {"gamma", "chisq", "chisq:1.5", "exp:-1", "pareto:x", "normal:2", "exp:"}) {
    EXPECT_THROW(DistributionSpec::parse(bad), config_error) << bad;
  }
  EXPECT_THROW(DistributionSpec::chi_square(0), config_error);
}

TEST(ParallelTest, ResultsDoNotDependOnThreadCount) {
  McConfig cfg;
  cfg.reps = 1000;
  cfg.n_obs = 30;
  cfg.window = WindowSpec(4);
  cfg.threads = 1;
  const auto serial = null_statistics(cfg);
  cfg.threads = 8;
  EXPECT_EQ(serial, null_statistics(cfg));
  cfg.threads = 3;
  EXPECT_EQ(alternative_statistics(cfg, DistributionSpec::chi_square(1)),
            (cfg.threads = 1, alternative_statistics(cfg, DistributionSpec::chi_square(1))));
}

TEST(ParallelTest, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(1000, 4,
                            [](std::size_t i) {
                              if (i == 500) throw numeric_error("boom");
                            }),
               numeric_error);
}

// Bounded support: the mean estimate approaches the population value. The
// quantile density of PowerFunction(2) is singular at 0, so the edge bias
// shrinks slowly (about N^-0.3).
TEST(ConsistencyTest, PowerFunctionBiasShrinksWithSampleSize) {
  const auto d = DistributionSpec::power_function(2.0);
  const double target = population_delta(d, {2, 2});
  double prev = INFINITY;
  for (std::size_t n_obs : {250u, 1000u, 4000u, 16000u}) {
    const WindowSpec w(static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_obs)))));
    double sum = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      auto rng = RngStream::derive(5, {9, n_obs, static_cast<std::uint64_t>(rep)});
      sum += delta_22(sample(d, n_obs, rng), w).value;
    }
    const double bias = std::fabs(sum / reps - target);
    EXPECT_LT(bias, prev) << "N=" << n_obs;
    prev = bias;
  }
  EXPECT_LT(prev, 0.02);
}

// Unbounded support: the per-seed error shrinks along N = 200, 2000, 20000.
// The estimate grows like (1/2) ln N, so this holds only against the
// eps-truncated target and says nothing about convergence to a finite limit.
TEST(ConsistencyTest, ExponentialErrorShrinksAlongSampleSizes) {
  const auto d = DistributionSpec::exponential(1.0);
  const double target = population_delta(d, {2, 2});
  int decreasing = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    double prev = INFINITY;
    bool ok = true;
    for (std::size_t n_obs : {200u, 2000u, 20000u}) {
      auto rng = RngStream::derive(6, {9, n_obs, static_cast<std::uint64_t>(seed)});
      const WindowSpec w(static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_obs)))));
      const double err = std::fabs(delta_22(sample(d, n_obs, rng), w).value - target);
      ok = ok && err < prev;
      prev = err;
    }
    decreasing += ok ? 1 : 0;
  }
  EXPECT_GE(decreasing, 18);
}

}  // namespace
}  // namespace symtest
