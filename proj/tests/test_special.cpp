#include <doctest.h>

#include <cmath>

#include "ggsel/errors.hpp"
#include "ggsel/special.hpp"

using namespace ggsel;

TEST_CASE("normal cdf matches reference values") {
  CHECK(math::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(math::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(math::normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(math::normal_cdf(5.0) == doctest::Approx(0.9999997133484281).epsilon(1e-12));
  // deep tail stays accurate through erfc
  CHECK(math::normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-10));
}

TEST_CASE("normal quantile round-trips through the cdf to 1e-12") {
  const double ps[] = {1e-10, 1e-6, 1e-3, 0.025, 0.2, 0.5, 0.7, 0.975, 1 - 1e-6, 1 - 1e-12};
  for (double p : ps) {
    CHECK(std::fabs(math::normal_cdf(math::normal_quantile(p)) - p) <= 1e-12 * std::max(p, 1e-3));
  }
  CHECK(math::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(math::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(math::normal_quantile(0.0), ArgumentError);
  CHECK_THROWS_AS(math::normal_quantile(1.0), ArgumentError);
}

TEST_CASE("chi-square 1-df tail") {
  CHECK(math::chi2_sf_1(2.705543454095404) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(math::chi2_sf_1(3.841458820694124) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(math::chi2_sf_1(0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bisection recovers sqrt(2)") {
  const double r = math::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}
