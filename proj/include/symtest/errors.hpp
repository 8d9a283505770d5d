#ifndef SYMTEST_ERRORS_HPP
#define SYMTEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace symtest {

// Bad argument to a pure function (index out of range, u outside (0,1), ...).
class argument_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration, e.g. a window with 2m >= N.
class config_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request (non-integrable oracle parameters).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Numerical failure: quadrature did not converge, degenerate variance, ...
class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input data problems: unreadable file, parse failure, non-finite values.
class data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace symtest

#endif  // SYMTEST_ERRORS_HPP
