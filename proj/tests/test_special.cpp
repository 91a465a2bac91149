#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "glmdiag/special.hpp"
#include "support/oracles.hpp"

using namespace glmdiag;

TEST_CASE("log_gamma matches known values", "[special]") {
  CHECK(log_gamma(1.0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(log_gamma(2.0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(log_gamma(5.0) == Catch::Approx(std::log(24.0)).epsilon(1e-13));
  CHECK(log_gamma(0.5) == Catch::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
  CHECK(log_gamma(10.0) == Catch::Approx(std::log(362880.0)).epsilon(1e-13));
  // cross-check against libm over a broad range
  for (double x : {0.1, 0.731, 3.2, 17.0, 123.4, 2500.0, 1.0e4}) {
    CHECK(log_gamma(x) == Catch::Approx(std::lgamma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("digamma and trigamma match classical constants", "[special]") {
  const double euler = 0.57721566490153286061;
  CHECK(digamma(1.0) == Catch::Approx(-euler).epsilon(1e-13));
  CHECK(digamma(0.5) == Catch::Approx(-euler - 2.0 * std::log(2.0)).epsilon(1e-13));
  // psi(n) = -euler + sum_{k<n} 1/k
  double harmonic = 0.0;
  for (int k = 1; k <= 9; ++k) harmonic += 1.0 / k;
  CHECK(digamma(10.0) == Catch::Approx(-euler + harmonic).epsilon(1e-13));

  CHECK(trigamma(1.0) == Catch::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
  CHECK(trigamma(0.5) == Catch::Approx(M_PI * M_PI / 2.0).epsilon(1e-13));

  // recurrence identities hold across the shift threshold
  for (double x : {0.3, 1.7, 6.5, 9.9, 40.0}) {
    CHECK(digamma(x + 1.0) - digamma(x) == Catch::Approx(1.0 / x).epsilon(1e-11));
    CHECK(trigamma(x) - trigamma(x + 1.0) == Catch::Approx(1.0 / (x * x)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(trigamma(-2.0), std::domain_error);
}

TEST_CASE("gamma_p closed forms and branches", "[special]") {
  // P(1, x) = 1 - exp(-x) (series branch for small x, CF branch for large)
  for (double x : {0.1, 0.9, 1.5, 3.0, 10.0, 40.0}) {
    CHECK(gamma_p(1.0, x) == Catch::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
  }
  // P(1/2, x) = erf(sqrt(x)) against the series oracle
  for (double x : {0.05, 0.4, 1.0, 2.2, 6.0}) {
    CHECK(gamma_p(0.5, x) == Catch::Approx(oracle::erf_series(std::sqrt(x))).epsilon(1e-12));
  }
  CHECK(gamma_p(3.0, 0.0) == 0.0);
  // monotone in x, including across the series/CF switch at x = a + 1
  const double a = 7.3;
  double prev = 0.0;
  for (double x = 0.5; x < 20.0; x += 0.25) {
    const double p = gamma_p(a, x);
    CHECK(p >= prev);
    prev = p;
  }
  // large shapes stay accurate: median of gamma(a) is close to a - 1/3
  CHECK(gamma_p(1.0e4, 1.0e4) == Catch::Approx(0.5).margin(0.01));
  CHECK_THROWS_AS(gamma_p(-1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(gamma_p(2.0, -0.5), std::domain_error);
}
