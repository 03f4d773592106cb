#include <cmath>

#include "doctest.h"
#include "indeg/error.hpp"
#include "indeg/metrics.hpp"

using namespace indeg;

namespace {
DegreeCountVector dvec(std::vector<double> v) { return DegreeCountVector(std::move(v)); }
}  // namespace

TEST_CASE("tv_distance") {
  CHECK(tv_distance(dvec({3, 2, 1}), dvec({3, 2, 1})) == 0.0);
  CHECK(tv_distance(dvec({3, 2, 1}), dvec({6, 4, 2})) == doctest::Approx(0.0));
  CHECK(tv_distance(dvec({1, 0}), dvec({0, 4})) == doctest::Approx(1.0));
  CHECK(tv_distance(dvec({1, 1}), dvec({1, 3})) == doctest::Approx(0.25));
  // zero padding
  CHECK(tv_distance(dvec({1, 1}), dvec({1, 1, 0, 0})) == 0.0);
  // restricted range renormalizes over 0..max_j
  CHECK(tv_distance(dvec({1, 1, 100}), dvec({1, 3, 0}), 1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(tv_distance(dvec({0, 0}), dvec({1})), DataError);
  CHECK_THROWS_AS(tv_distance(dvec({std::nan(""), 1}), dvec({1, 1})), DataError);
}

TEST_CASE("log_mse") {
  const std::vector<std::size_t> all{0, 1};
  CHECK(log_mse(dvec({5, 7}), dvec({5, 7}), all) == 0.0);
  CHECK(log_mse(dvec({2, 3}), dvec({20, 30}), all) == doctest::Approx(1.0));
  CHECK(log_mse(dvec({100, 10}), dvec({10, 10}), all) == doctest::Approx(0.5));
  CHECK_THROWS_AS(log_mse(dvec({0, 1}), dvec({1, 1}), all), DataError);
  CHECK_THROWS_AS(log_mse(dvec({1, 1}), dvec({1, 1}), std::vector<std::size_t>{}), DataError);
}

TEST_CASE("supports and alpha error") {
  const double nan = std::nan("");
  const auto s = common_positive_support(dvec({1, 0, 2, nan, 4}), dvec({1, 1, 1, 1, 0}), 1);
  CHECK(s == std::vector<std::size_t>{2});
  CHECK(alpha_error(1.62, 1.5) == doctest::Approx(0.12));
  CHECK(alpha_error(1.4, 1.5) == doctest::Approx(0.1));
}
