#ifndef SYMTEST_DISTRIBUTIONS_HPP
#define SYMTEST_DISTRIBUTIONS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "symtest/errors.hpp"
#include "symtest/estimators.hpp"
#include "symtest/rng.hpp"
#include "symtest/sample.hpp"

namespace symtest {

enum class Family { std_normal, chi_square, uniform01, exponential, pareto, power_function };

/// A null or alternative distribution. `param` is the degrees of freedom for
/// chi_square, the rate for exponential, and theta for pareto (F = 1 - x^-theta
/// on x >= 1) and power_function (F = x^theta on [0,1]); unused otherwise.
class DistributionSpec {
public:
  static DistributionSpec std_normal() { return {Family::std_normal, 0.0}; }
  static DistributionSpec uniform01() { return {Family::uniform01, 0.0}; }
  static DistributionSpec chi_square(int df) {
    if (df < 1) throw config_error("chi-square degrees of freedom must be >= 1");
    return {Family::chi_square, static_cast<double>(df)};
  }
  static DistributionSpec exponential(double rate) { return positive(Family::exponential, rate, "exponential rate"); }
  static DistributionSpec pareto(double theta) { return positive(Family::pareto, theta, "pareto theta"); }
  static DistributionSpec power_function(double theta) {
    return positive(Family::power_function, theta, "power-function theta");
  }

  /// Accepts normal, uniform, chisq:DF, exp:RATE, pareto:THETA, power:THETA.
  static DistributionSpec parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string head(text.substr(0, colon));
    const bool has_arg = colon != std::string_view::npos;
    auto arg = [&]() -> double {
      if (!has_arg) throw config_error("distribution '" + head + "' needs a parameter, e.g. " + head + ":2");
      const std::string s(text.substr(colon + 1));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty()) throw config_error("bad distribution parameter '" + s + "'");
      return v;
    };
    if (head == "normal" || head == "std-normal") {
      if (has_arg) throw config_error("normal takes no parameter");
      return std_normal();
    }
    if (head == "uniform") {
      if (has_arg) throw config_error("uniform takes no parameter");
      return uniform01();
    }
    if (head == "chisq") {
      const double df = arg();
      if (df != std::floor(df)) throw config_error("chi-square degrees of freedom must be an integer");
      return chi_square(static_cast<int>(df));
    }
    if (head == "exp") return exponential(arg());
    if (head == "pareto") return pareto(arg());
    if (head == "power") return power_function(arg());
    throw config_error("unknown distribution '" + std::string(text) + "'");
  }

  Family family() const noexcept { return family_; }
  double param() const noexcept { return param_; }
  int df() const noexcept { return static_cast<int>(param_); }

  std::string name() const {
    switch (family_) {
      case Family::std_normal: return "normal";
      case Family::uniform01: return "uniform";
      case Family::chi_square: return "chisq:" + std::to_string(df());
      case Family::exponential: return "exp:" + format_param();
      case Family::pareto: return "pareto:" + format_param();
      case Family::power_function: return "power:" + format_param();
    }
    return "?";
  }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
  DistributionSpec(Family f, double p) : family_(f), param_(p) {}

  static DistributionSpec positive(Family f, double p, const char* what) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw config_error(std::string(what) + " must be finite and > 0, got " + std::to_string(p));
    }
    return {f, p};
  }

  std::string format_param() const {
    std::string s = std::to_string(param_);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  Family family_;
  double param_;
};

/// One draw.
inline double draw(const DistributionSpec& d, RngStream& rng) {
  switch (d.family()) {
    case Family::std_normal: return rng.standard_normal();
    case Family::chi_square: {
      double acc = 0.0;
      for (int j = 0; j < d.df(); ++j) {
        const double z = rng.standard_normal();
        acc += z * z;
      }
      return acc;
    }
    case Family::uniform01: return rng.uniform01();
    case Family::exponential: return -std::log(rng.uniform_open()) / d.param();
    case Family::pareto: return std::pow(rng.uniform_open(), -1.0 / d.param());
    case Family::power_function: return std::pow(rng.uniform_open(), 1.0 / d.param());
  }
  throw config_error("unsupported distribution family");
}

/// `size` i.i.d. draws, sorted into a Sample.
inline Sample sample(const DistributionSpec& d, std::size_t size, RngStream& rng) {
  if (size < 1) throw argument_error("sample size must be >= 1");
  std::vector<double> out(size);
  for (double& x : out) x = draw(d, rng);
  return Sample(std::move(out));
}

/// F^{-1}(u).
inline double quantile(const DistributionSpec& d, double u) {
  detail::require_open_unit(u, "quantile");
  switch (d.family()) {
    case Family::std_normal: return boost::math::quantile(boost::math::normal_distribution<double>(), u);
    case Family::chi_square:
      return boost::math::quantile(boost::math::chi_squared_distribution<double>(d.param()), u);
    case Family::uniform01: return u;
    case Family::exponential: return -std::log1p(-u) / d.param();
    case Family::pareto: return std::exp(-std::log1p(-u) / d.param());
    case Family::power_function: return std::pow(u, 1.0 / d.param());
  }
  throw config_error("unsupported distribution family");
}

/// q(u) = 1 / f(F^{-1}(u)) = dF^{-1}/du.
///
/// `upper(v)` returns q(1 - v) without forming 1 - v, which keeps the
/// right-tail evaluations accurate when v is tiny.
struct QuantileDensity {
  std::function<double(double)> lower;
  std::function<double(double)> upper;

  double operator()(double u) const { return lower(u); }
};

inline QuantileDensity quantile_density(const DistributionSpec& d) {
  using boost::math::complement;
  switch (d.family()) {
    case Family::std_normal: {
      const boost::math::normal_distribution<double> nd;
      auto at_x = [nd](double x) { return 1.0 / boost::math::pdf(nd, x); };
      return {[=](double u) { return at_x(boost::math::quantile(nd, u)); },
              [=](double v) { return at_x(boost::math::quantile(complement(nd, v))); }};
    }
    case Family::chi_square: {
      const boost::math::chi_squared_distribution<double> cd(d.param());
      auto at_x = [cd](double x) { return 1.0 / boost::math::pdf(cd, x); };
      return {[=](double u) { return at_x(boost::math::quantile(cd, u)); },
              [=](double v) { return at_x(boost::math::quantile(complement(cd, v))); }};
    }
    case Family::uniform01: return {[](double) { return 1.0; }, [](double) { return 1.0; }};
    case Family::exponential: {
      const double rate = d.param();
      return {[=](double u) { return 1.0 / (rate * (1.0 - u)); },
              [=](double v) { return 1.0 / (rate * v); }};
    }
    case Family::pareto: {
      const double th = d.param();
      const double e = -1.0 / th - 1.0;
      return {[=](double u) { return std::exp(e * std::log1p(-u)) / th; },
              [=](double v) { return std::pow(v, e) / th; }};
    }
    case Family::power_function: {
      const double th = d.param();
      const double e = 1.0 / th - 1.0;
      return {[=](double u) { return std::pow(u, e) / th; },
              [=](double v) { return std::exp(e * std::log1p(-v)) / th; }};
    }
  }
  throw config_error("unsupported distribution family");
}

namespace detail {

// -1/2 * int_eps^{1-eps} g(u) q(u) du for a weight difference g with
// g(1-u) = -g(u). Folding onto (eps, 1/2] gives
// -1/2 * int_eps^{1/2} g(u) [q(u) - q(1-u)] du, which is exactly zero for a
// symmetric q. The fold is integrated in s = ln u, which flattens the
// endpoint growth of q.
template <class WeightDiff>
double folded_population_integral(const QuantileDensity& q, double eps, WeightDiff&& g) {
  if (!(eps > 0.0 && eps < 0.5)) throw argument_error("endpoint inset must lie in (0, 1/2)");
  auto integrand = [&](double s) {
    const double u = std::exp(s);
    return g(u) * (q.lower(u) - q.upper(u)) * u;
  };
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, std::log(eps), std::log(0.5), 20, 1e-13, &err);
  const double result = -0.5 * value;
  if (!std::isfinite(result) || 0.5 * err > 1e-8 * std::max(1.0, std::fabs(result))) {
    throw numeric_error("population quadrature did not converge (error estimate " + std::to_string(0.5 * err) +
                        ")");
  }
  return result;
}

inline void require_integrable(const DistributionSpec& d, const RecordSpec& r) {
  if (d.family() == Family::pareto && !(2.0 * r.k * d.param() > 1.0)) {
    throw domain_error("pareto theta=" + std::to_string(d.param()) + " with k=" + std::to_string(r.k) +
                       " makes the residual-extropy integrand non-integrable (need 2k*theta > 1)");
  }
}

}  // namespace detail

/// Quadrature value of -1/2 int (weight_upper - weight_lower) q(u) du over
/// (eps, 1 - eps).
///
/// The untruncated integral is finite only for bounded support. For symmetric
/// families the truncated value is zero for every eps; for unbounded asymmetric
/// families (exponential, chi-square, pareto) it grows without bound as eps
/// shrinks, so the result is the eps-truncated functional.
inline double population_delta(const DistributionSpec& d, const RecordSpec& r, double eps = 1e-12) {
  detail::require_integrable(d, r);
  return detail::folded_population_integral(quantile_density(d), eps, [&](double u) {
    return weight_upper(u, r) - weight_lower(u, r);
  });
}

/// Same functional with the record-free weight 1 - 2u.
inline double population_delta_plain(const DistributionSpec& d, double eps = 1e-12) {
  return detail::folded_population_integral(quantile_density(d), eps,
                                            [](double u) { return 1.0 - 2.0 * u; });
}

}  // namespace symtest

#endif  // SYMTEST_DISTRIBUTIONS_HPP
