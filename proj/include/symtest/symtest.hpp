#ifndef SYMTEST_SYMTEST_HPP
#define SYMTEST_SYMTEST_HPP

#include "symtest/data_io.hpp"
#include "symtest/distributions.hpp"
#include "symtest/errors.hpp"
#include "symtest/estimators.hpp"
#include "symtest/montecarlo.hpp"
#include "symtest/parallel.hpp"
#include "symtest/rng.hpp"
#include "symtest/sample.hpp"

#endif  // SYMTEST_SYMTEST_HPP
