#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hetsim/gammafn.hpp"
#include "hetsim/rng.hpp"
#include "hetsim/traffic.hpp"

using namespace hetsim;

namespace {

// Independent CDF oracle: Simpson quadrature of the Gamma pdf. For shape < 1
// the pdf has an integrable singularity at 0, so integrate in u = x^shape,
// where the integrand becomes the smooth exp(-u^(1/shape)) / Gamma(shape+1).
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x0 = a + i * h;
    acc += h / 6.0 * (f(x0) + 4.0 * f(x0 + h / 2.0) + f(x0 + h));
  }
  return acc;
}

double cdf_by_quadrature(double shape, double x) {
  if (shape <= 1.0) {
    const double scale = std::exp(-math::log_gamma(shape + 1.0));
    auto integrand = [&](double u) {
      return u <= 0.0 ? scale : scale * std::exp(-std::pow(u, 1.0 / shape));
    };
    return simpson(integrand, 0.0, std::pow(x, shape), 40000);
  }
  auto pdf = [&](double t) {
    return t <= 0.0 ? 0.0
                    : std::exp((shape - 1.0) * std::log(t) - t - math::log_gamma(shape));
  };
  return simpson(pdf, 0.0, x, 40000);
}

}  // namespace

TEST_CASE("incomplete gamma agrees with quadrature oracle") {
  for (double shape : {0.2892, 0.7, 1.0, 2.5}) {
    for (double x : {0.05, 0.3, 1.0, 2.0}) {
      const double mine = math::gamma_p(shape, x);
      const double oracle = cdf_by_quadrature(shape, x);
      CHECK(mine == doctest::Approx(oracle).epsilon(1e-7));
    }
  }
  CHECK(math::gamma_p(0.5, 0.0) == 0.0);
  CHECK_THROWS_AS(math::gamma_p(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("calibrate pins theta to the target mean") {
  const auto present = traffic::calibrate(0.2892, 4000.0, 64000.0);
  CHECK(present.scale_theta == doctest::Approx(60000.0 / 0.2892).epsilon(1e-12));
  CHECK(present.scale_theta == doctest::Approx(207468.8797).epsilon(1e-7));
  CHECK(present.analytic_mean() == doctest::Approx(64000.0).epsilon(1e-12));

  const auto future = traffic::calibrate(0.2892, 4000.0, 64.0e6);
  CHECK(future.scale_theta == doctest::Approx((64.0e6 - 4000.0) / 0.2892).epsilon(1e-12));
  CHECK(future.scale_theta == doctest::Approx(2.2129e8).epsilon(1e-3));
  CHECK(future.shape_k == 0.2892);  // calibration never touches the shape

  CHECK_THROWS_AS(traffic::calibrate(0.2892, 4000.0, 4000.0), std::invalid_argument);
  CHECK_THROWS_AS(traffic::calibrate(0.0, 4000.0, 64000.0), std::invalid_argument);
}

TEST_CASE("samples respect the bias floor and the calibrated moments") {
  const auto profile = traffic::calibrate(0.2892, 4000.0, 64000.0);
  rng::Xoshiro256pp gen(42);

  const int n = 1000000;
  double sum = 0.0;
  std::vector<double> samples(n);
  for (auto& s : samples) {
    s = traffic::sample_demand(profile, gen);
    REQUIRE(s >= 4000.0);
    sum += s;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean / 64000.0 - 1.0) < 0.01);

  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double variance = ss / (n - 1);
  CHECK(std::abs(variance / profile.analytic_variance() - 1.0) < 0.03);
}

TEST_CASE("empirical CDF matches the analytic CDF (KS)") {
  const auto profile = traffic::calibrate(0.2892, 4000.0, 64000.0);
  rng::Xoshiro256pp gen(7);
  const int n = 200000;
  std::vector<double> samples(n);
  for (auto& s : samples) s = traffic::sample_demand(profile, gen);
  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = traffic::demand_cdf(profile, samples[i]);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  CHECK(ks < 0.005);
}

TEST_CASE("quantiles: bounds, long tail, inversion") {
  const auto profile = traffic::calibrate(0.2892, 4000.0, 64000.0);
  CHECK(traffic::demand_quantile(profile, 0.0) == 4000.0);

  // Median far below the mean for k < 1. The exact ratio at these parameters
  // is 0.277457 (frozen from bisection on two independently written
  // incomplete-gamma implementations, matching to 10 digits).
  const double median = traffic::demand_quantile(profile, 0.5);
  CHECK(median / 64000.0 == doctest::Approx(0.2774574400).epsilon(1e-6));
  CHECK(median < 0.3 * 64000.0);

  for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
    const double x = traffic::demand_quantile(profile, p);
    CHECK(traffic::demand_cdf(profile, x) == doctest::Approx(p).epsilon(1e-9));
    const double x2 = traffic::demand_quantile(profile, traffic::demand_cdf(profile, x));
    CHECK(x2 == doctest::Approx(x).epsilon(1e-6));
  }

  CHECK_THROWS_AS(traffic::demand_quantile(profile, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(traffic::demand_quantile(profile, -0.1), std::invalid_argument);
}
