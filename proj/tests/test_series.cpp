#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "test_oracles.hpp"
#include "uqpdf/cumulants.hpp"
#include "uqpdf/errors.hpp"
#include "uqpdf/series.hpp"

using namespace uqpdf;

namespace {

CumulantVector standardized(std::vector<double> higher) {
  CumulantVector kappa;
  kappa.values = {0.0, 1.0};
  kappa.values.insert(kappa.values.end(), higher.begin(), higher.end());
  return kappa;
}

CumulantVector gaussian_cumulants() { return standardized({0.0, 0.0, 0.0, 0.0}); }

}  // namespace

TEST_SUITE_BEGIN("series");

TEST_CASE("gaussian kernel and its derivatives") {
  CHECK(gaussian_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(gaussian_pdf_derivative(0, 1.3) == doctest::Approx(gaussian_pdf(1.3)));
  CHECK(gaussian_pdf_derivative(1, 0.0) == 0.0);
  CHECK(gaussian_pdf_derivative(2, 0.0) ==
        doctest::Approx(-1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(gaussian_pdf_derivative(15, 0.0), ConfigError);

  // finite differences around a few points
  const double h = 1e-5;
  for (const double x : {-0.8, 0.4, 2.0}) {
    for (int l = 1; l <= 3; ++l) {
      const double fd = (gaussian_pdf_derivative(l - 1, x + h) -
                         gaussian_pdf_derivative(l - 1, x - h)) /
                        (2.0 * h);
      CHECK(gaussian_pdf_derivative(l, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("gaussian cumulants reproduce the kernel at every truncation") {
  const auto kappa = gaussian_cumulants();
  for (int order = 3; order <= 6; ++order) {
    const auto series = gc_series(kappa, order);
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      CHECK(std::abs(series(x) - gaussian_pdf(x)) < 1e-14);
    }
  }
  for (int order = 1; order <= 4; ++order) {
    const auto series = ed_series(kappa, order);
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      CHECK(std::abs(series(x) - gaussian_pdf(x)) < 1e-14);
    }
  }
}

TEST_CASE("order bounds and the standardization contract") {
  const auto kappa = standardized({0.3, 0.2, 0.1, 0.05});
  CHECK_THROWS_AS(gc_series(kappa, 2), ConfigError);
  CHECK_THROWS_AS(gc_series(kappa, 7), ConfigError);
  CHECK_THROWS_AS(ed_series(kappa, 0), ConfigError);
  CHECK_THROWS_AS(ed_series(kappa, 5), UnsupportedError);

  CumulantVector raw;
  raw.values = {0.5, 2.0, 0.3, 0.2, 0.1, 0.05};
  CHECK_THROWS_AS(gc_series(raw, 3), ConfigError);
  CHECK_THROWS_AS(ed_series(raw, 1), ConfigError);
}

TEST_CASE("third-order truncation in closed form") {
  const double k3 = -0.79329;
  const auto series = gc_series(standardized({k3}), 3);
  CHECK(series(0.0) == doctest::Approx(gaussian_pdf(0.0)));  // He_3(0) = 0
  for (const double x : {-1.5, 0.3, 2.0}) {
    const double he3 = x * x * x - 3.0 * x;
    CHECK(series(x) ==
          doctest::Approx(gaussian_pdf(x) * (1.0 + k3 * he3 / 6.0)).epsilon(1e-13));
  }
}

TEST_CASE("first Edgeworth truncation equals the third Gram-Charlier truncation") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kappa = standardized({dist(gen), dist(gen), dist(gen), dist(gen)});
    const auto gc3 = gc_series(kappa, 3);
    const auto ed1 = ed_series(kappa, 1);
    double max_diff = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = -6.0 + 12.0 * i / 1000.0;
      max_diff = std::max(max_diff, std::abs(gc3(x) - ed1(x)));
    }
    CHECK(max_diff < 1e-12);
  }
}

TEST_CASE("second Edgeworth term structure at vanishing third cumulant") {
  const double nu4 = 0.85;
  const auto series = ed_series(standardized({0.0, nu4}), 2);
  REQUIRE(series.hermite_coeff.size() >= 7);
  CHECK(series.hermite_coeff[4] == doctest::Approx(nu4 / 24.0));
  CHECK(series.hermite_coeff[6] == 0.0);  // nu_3^2 term drops
  CHECK(series.hermite_coeff[3] == 0.0);
  for (const double x : {-1.0, 0.5, 2.5}) {
    const double he4 = std::pow(x, 4) - 6.0 * x * x + 3.0;
    CHECK(series(x) == doctest::Approx(gaussian_pdf(x) * (1.0 + nu4 * he4 / 24.0))
                           .epsilon(1e-13));
  }
}

TEST_CASE("fourth Edgeworth truncation carries the printed coefficient functions") {
  const double k3 = 0.4, k4 = 0.3, k5 = -0.2, k6 = 0.6;
  const auto series = ed_series(standardized({k3, k4, k5, k6}), 4);
  REQUIRE(series.hermite_coeff.size() == 13);
  CHECK(series.hermite_coeff[3] == doctest::Approx(k3 / 6.0));
  CHECK(series.hermite_coeff[4] == doctest::Approx(k4 / 24.0));
  CHECK(series.hermite_coeff[5] == doctest::Approx(k5 / 120.0));
  CHECK(series.hermite_coeff[6] == doctest::Approx(k3 * k3 / 72.0 + k6 / 720.0));
  CHECK(series.hermite_coeff[7] == doctest::Approx(k3 * k4 / 144.0));
  CHECK(series.hermite_coeff[8] ==
        doctest::Approx(k4 * k4 / 1152.0 + k3 * k5 / 720.0));
  CHECK(series.hermite_coeff[9] == doctest::Approx(std::pow(k3, 3) / 1296.0));
  CHECK(series.hermite_coeff[10] == doctest::Approx(k3 * k3 * k4 / 1728.0));
  CHECK(series.hermite_coeff[12] == doctest::Approx(std::pow(k3, 4) / 31104.0));
}

TEST_CASE("Gram-Charlier coefficients collapse through the Bell polynomials") {
  const double k3 = -0.5, k4 = 0.7, k5 = -0.9, k6 = 2.0;
  const auto series = gc_series(standardized({k3, k4, k5, k6}), 6);
  REQUIRE(series.hermite_coeff.size() == 7);
  CHECK(series.hermite_coeff[3] == doctest::Approx(k3 / 6.0));
  CHECK(series.hermite_coeff[4] == doctest::Approx(k4 / 24.0));
  CHECK(series.hermite_coeff[5] == doctest::Approx(k5 / 120.0));
  CHECK(series.hermite_coeff[6] == doctest::Approx((k6 + 10.0 * k3 * k3) / 720.0));
}

TEST_CASE("evaluation decays in the far tail and respects parity") {
  const auto series = gc_series(standardized({0.0, 1.2, 0.0, 3.0}), 6);
  CHECK(std::abs(series(20.0)) < 1e-80);
  CHECK(std::abs(series(-20.0)) < 1e-80);
  for (double x = 0.0; x <= 5.0; x += 0.5) {
    CHECK(series(x) == doctest::Approx(series(-x)).epsilon(1e-12));
  }
  CHECK(evaluate_series(series, 1.3) == series(1.3));
}

TEST_CASE("every truncation integrates to one") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto kappa = standardized({dist(gen), dist(gen), dist(gen), dist(gen)});
    for (int order = 3; order <= 6; ++order) {
      const auto series = gc_series(kappa, order);
      const double mass =
          oracle::integrate([&](double x) { return series(x); }, -20.0, 20.0, 400);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
    for (int order = 1; order <= 4; ++order) {
      const auto series = ed_series(kappa, order);
      const double mass =
          oracle::integrate([&](double x) { return series(x); }, -20.0, 20.0, 400);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("standardized truncations keep zero mean and unit variance") {
  const auto kappa = standardized({-0.6, 0.9, -1.2, 2.5});
  for (int order = 3; order <= 6; ++order) {
    const auto series = gc_series(kappa, order);
    const double mean =
        oracle::integrate([&](double x) { return x * series(x); }, -20.0, 20.0, 400);
    const double second = oracle::integrate(
        [&](double x) { return x * x * series(x); }, -20.0, 20.0, 400);
    CHECK(std::abs(mean) < 1e-8);
    CHECK(second == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("negative lobes are reported as-is") {
  // Strong skew drives the truncation negative somewhere; values come back
  // unclipped.
  const auto series = gc_series(standardized({2.0, 0.0, 0.0, 0.0}), 3);
  double min_value = 1.0;
  for (double x = -6.0; x <= 6.0; x += 0.01) min_value = std::min(min_value, series(x));
  CHECK(min_value < 0.0);
}

TEST_SUITE_END();
