#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "taser/rng.hpp"
#include "taser/stat_tests.hpp"
#include "test_util.hpp"

using namespace taser;

TEST_CASE("student_t_cdf matches the df=1 and df=2 closed forms") {
  for (double t = -5.0; t <= 5.0 + 1e-12; t += 0.25) {
    CHECK(close_abs(student_t_cdf(t, 1), oracle::t_cdf_df1(t), 1e-10));
    CHECK(close_abs(student_t_cdf(t, 2), oracle::t_cdf_df2(t), 1e-10));
  }
  // Spot values quoted from the closed forms.
  CHECK(close_abs(student_t_cdf(1.0, 1), 0.75, 1e-12));
  CHECK(close_abs(student_t_cdf(std::sqrt(2.0), 2), 0.8535533905932737, 1e-12));
}

TEST_CASE("student_t_cdf basics") {
  CHECK(student_t_cdf(0.0, 1) == 0.5);
  CHECK(student_t_cdf(0.0, 7) == 0.5);
  CHECK(student_t_cdf(0.0, 400) == 0.5);
  CHECK_THROWS_AS(student_t_cdf(1.0, 0), std::domain_error);
}

TEST_CASE("student_t_cdf is monotone and symmetric") {
  for (std::size_t df : {1u, 2u, 4u, 19u, 200u, 1000u}) {
    double prev = 0.0;
    for (double t = -50.0; t <= 50.0; t += 1.0) {
      const double c = student_t_cdf(t, df);
      CHECK(c >= prev);
      CHECK(close_abs(student_t_cdf(t, df) + student_t_cdf(-t, df), 1.0, 1e-10));
      prev = c;
    }
  }
}

TEST_CASE("student_t_cdf approaches the normal CDF for large df") {
  const double c = student_t_cdf(1.96, 200);
  CHECK(c >= 0.973);
  CHECK(c <= 0.976);
}

TEST_CASE("student_t_cdf agrees with quadrature across df") {
  for (std::size_t df : {1u, 2u, 3u, 5u, 10u, 30u, 120u, 1000u}) {
    for (double t : {-50.0, -8.0, -2.5, -0.7, -0.1, 0.3, 1.0, 4.0, 20.0, 50.0}) {
      CHECK(close_abs(student_t_cdf(t, df), oracle::t_cdf(t, static_cast<double>(df)), 1e-10));
    }
  }
}

TEST_CASE("two_tailed_p basics and frozen reference value") {
  CHECK(close_abs(two_tailed_p(0.0, 4), 1.0, 1e-12));
  CHECK(close_abs(two_tailed_p(1.0, 1), 0.5, 1e-10));
  // Reference value computed independently (30-digit arithmetic):
  // t = -0.2 / sqrt(0.7 / 5), df = 4.
  CHECK(close_abs(two_tailed_p(-0.53452248382484877, 4), 0.62130829503749702, 1e-9));
}

TEST_CASE("two_tailed_p is consistent with the CDF at moderate t") {
  for (std::size_t df : {1u, 3u, 12u, 150u}) {
    for (double t = -6.0; t <= 6.0; t += 0.375) {
      CHECK(close_abs(two_tailed_p(t, df), 2.0 * (1.0 - student_t_cdf(std::fabs(t), df)), 1e-12));
    }
  }
}

TEST_CASE("two_tailed_p is even in t and decreasing in |t|") {
  for (std::size_t df : {1u, 4u, 60u}) {
    double prev = 1.1;
    for (double t = 0.0; t <= 12.0; t += 0.5) {
      CHECK(two_tailed_p(t, df) == two_tailed_p(-t, df));
      const double p = two_tailed_p(t, df);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("two_tailed_p matches the quadrature oracle on 20 fixed sample vectors") {
  // Velocity-shaped samples: windows of reports vs a 15 m/s limit.
  const std::vector<std::vector<double>> vectors = {
      {14, 15, 16, 15, 14},
      {14.2, 15.1, 15.3, 14.9},
      {13, 14, 15, 16, 17, 18},
      {2, 2.5, 1.5, 2.2, 1.8},
      {22, 21.5, 22.5, 23, 21},
      {15.5, 15.6, 15.4, 15.5, 15.7, 15.3},
      {9, 10, 11, 12, 13},
      {15, 14, 15, 16, 15, 14, 15, 16},
      {17, 18, 16.5, 17.2, 17.9, 18.3},
      {14.8, 15.2, 14.9, 15.1, 15.0, 14.7, 15.3},
      {5, 6, 7, 8},
      {25, 24, 26, 25.5},
      {15.01, 14.99, 15.02, 14.98, 15.0},
      {12, 18, 13, 17, 14, 16},
      {10.5, 10.9, 11.2, 10.7, 11.0, 10.8, 11.1, 10.6},
      {19.5, 20.1, 19.8, 20.3},
      {14, 14, 14, 14, 15},
      {16, 16, 16, 15, 16, 16},
      {3, 3.1, 2.9, 3.05, 2.95, 3.2, 2.8},
      {15.4, 14.6, 15.8, 14.2, 15.6, 14.4, 15.2, 14.8, 15.0},
  };
  const double limit = 15.0;
  for (const auto& v : vectors) {
    const std::size_t n = v.size();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = (mean - limit) / (s / std::sqrt(static_cast<double>(n)));
    const double expected = oracle::two_tailed_p(t, static_cast<double>(n - 1));
    CHECK(close_abs(two_tailed_p(t, n - 1), expected, 1e-6));

    const TTestResult r = velocity_t_test(v, limit, 0.01, 0.4, 3);
    if (!r.degenerate) CHECK(close_abs(r.p_value, expected, 1e-6));
  }
}

TEST_CASE("velocity_t_test on the reference window") {
  const std::vector<double> samples = {14, 15, 16, 15, 14};
  const TTestResult r = velocity_t_test(samples, 15.0, 0.01, 0.4, 3);
  CHECK_FALSE(r.degenerate);
  CHECK(close_abs(r.t_statistic, -0.53452248382484877, 1e-12));
  CHECK(r.degrees_of_freedom == 4);
  CHECK(close_abs(r.p_value, 0.62130829503749702, 1e-9));
  CHECK_FALSE(r.reject);
}

TEST_CASE("velocity_t_test degenerate paths fall back to the delta gate") {
  // Zero variance: a Sybil window of constant 2 m/s claims.
  const std::vector<double> sybil = {2, 2, 2, 2, 2};
  const TTestResult r1 = velocity_t_test(sybil, 15.0, 0.01, 0.4, 3);
  CHECK(r1.degenerate);
  CHECK(r1.reject);  // |2 - 15| = 13 > 6
  CHECK(r1.p_value == 0.0);

  // Too few samples, inside the gate.
  const std::vector<double> single = {15.0};
  const TTestResult r2 = velocity_t_test(single, 15.0, 0.01, 0.4, 3);
  CHECK(r2.degenerate);
  CHECK_FALSE(r2.reject);  // |0| <= 6
  CHECK(r2.p_value == 1.0);

  // Too few samples, outside the gate.
  const std::vector<double> two = {2.0, 2.5};
  const TTestResult r3 = velocity_t_test(two, 15.0, 0.01, 0.4, 3);
  CHECK(r3.degenerate);
  CHECK(r3.reject);

  CHECK_THROWS_AS(velocity_t_test(std::vector<double>{}, 15.0, 0.01, 0.4, 3), std::domain_error);
}

TEST_CASE("velocity_t_test is invariant under sample permutation") {
  Rng rng(99);
  std::vector<double> v = {14.2, 16.1, 13.8, 15.9, 14.4, 15.2, 16.6, 13.1};
  const TTestResult base = velocity_t_test(v, 15.0, 0.05, 0.4, 3);
  for (int k = 0; k < 50; ++k) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[rng.next_below(i)]);
    const TTestResult r = velocity_t_test(v, 15.0, 0.05, 0.4, 3);
    CHECK(close_abs(r.p_value, base.p_value, 1e-12));
    CHECK(r.reject == base.reject);
  }
}
