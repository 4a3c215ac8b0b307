#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "wbansec/stats.hpp"

using namespace wbansec;

namespace {

// Independent oracle for the Student-t critical value: integrate the t density
// with Simpson's rule and invert the CDF by bisection.  Shares nothing with
// the library implementation.
double oracle_t_pdf(double x, double df) {
  const double a = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0);
  const double norm = std::exp(a) / std::sqrt(df * M_PI);
  return norm * std::pow(1.0 + x * x / df, -(df + 1.0) / 2.0);
}

double oracle_t_cdf(double t, double df) {
  // CDF(t) = 0.5 + integral_0^t pdf.  Simpson over 20k panels.
  const int n = 20000;
  const double h = t / n;
  double acc = oracle_t_pdf(0.0, df) + oracle_t_pdf(t, df);
  for (int i = 1; i < n; ++i) {
    acc += oracle_t_pdf(h * i, df) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return 0.5 + acc * h / 3.0;
}

double oracle_t_quantile_two_tailed(double p, double df) {
  const double target = 1.0 - p / 2.0;
  double lo = 0.0, hi = 200.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = (lo + hi) / 2.0;
    if (oracle_t_cdf(mid, df) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("critical values match frozen textbook entries") {
  CHECK(student_t_quantile(0.05, 1) == doctest::Approx(12.706).epsilon(0.001));
  CHECK(student_t_quantile(0.05, 19) == doctest::Approx(2.093).epsilon(0.001));
  CHECK(student_t_quantile(0.05, 199) == doctest::Approx(1.972).epsilon(0.001));
  // Normal limit.
  CHECK(student_t_quantile(0.05, 10000000) == doctest::Approx(1.960).epsilon(0.0006));
}

TEST_CASE("critical values match an integrate-and-bisect oracle") {
  for (int df : {1, 19, 199}) {
    const double want = oracle_t_quantile_two_tailed(0.05, df);
    const double got = student_t_quantile(0.05, df);
    CHECK(std::abs(got - want) < 1e-3);
  }
}

TEST_CASE("critical value decreases strictly with degrees of freedom") {
  CHECK(student_t_quantile(0.05, 199) < student_t_quantile(0.05, 19));
  CHECK(student_t_quantile(0.05, 19) < student_t_quantile(0.05, 1));
}

TEST_CASE("domain violations are rejected") {
  CHECK_THROWS_AS(student_t_quantile(0.0, 5), DomainError);
  CHECK_THROWS_AS(student_t_quantile(1.0, 5), DomainError);
  CHECK_THROWS_AS(student_t_quantile(-0.5, 5), DomainError);
  CHECK_THROWS_AS(student_t_quantile(0.05, 0), DomainError);
  CHECK_THROWS_AS(confidence_beta({1.0}, 0.05), DomainError);
}

TEST_CASE("half-width reproduces the hand-computed five-sample fixture") {
  // Samples 1..5: mean 3, S = sqrt(2.5), R = 5, t(0.05, 4) = 2.7764,
  // beta = 2.7764 * sqrt(2.5) / sqrt(5) = 1.9632.
  const std::vector<double> xs{1, 2, 3, 4, 5};
  const SampleStats s = sample_stats(xs);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.5)));
  CHECK(confidence_beta(xs) == doctest::Approx(1.9632).epsilon(0.0001));
}

TEST_CASE("zero variance gives a zero half-width") {
  const std::vector<double> xs(200, 7.25);
  CHECK(confidence_beta(xs) == 0.0);
}

TEST_CASE("aggregation is order independent") {
  std::vector<double> xs{5.5, 1.25, -3.0, 9.75, 0.5, 2.25, 8.0};
  std::vector<double> ys = xs;
  std::reverse(ys.begin(), ys.end());
  CHECK(sample_stats(xs).mean == doctest::Approx(sample_stats(ys).mean));
  CHECK(confidence_beta(xs) == doctest::Approx(confidence_beta(ys)));
}

}  // TEST_SUITE
