#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace taser {

struct TTestResult {
  double t_statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  bool reject = false;
  bool degenerate = false;  // fallback delta-gate path taken
};

namespace detail {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("beta_cf failed to converge");
}

// Regularized incomplete beta I_x(a, b).
inline double reg_inc_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("reg_inc_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// P(T <= t) for Student's t with df degrees of freedom.
inline double student_t_cdf(double t, std::size_t df) {
  if (df == 0) throw std::domain_error("student_t_cdf: df must be >= 1");
  if (t == 0.0) return 0.5;
  const double v = static_cast<double>(df);
  const double x = v / (v + t * t);
  const double tail = 0.5 * detail::reg_inc_beta(0.5 * v, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

// Equals 2 * (1 - student_t_cdf(|t|, df)); evaluated directly from the
// incomplete beta so extreme |t| keeps a meaningful (non-underflowed) tail.
inline double two_tailed_p(double t, std::size_t df) {
  if (df == 0) throw std::domain_error("two_tailed_p: df must be >= 1");
  if (t == 0.0) return 1.0;
  const double v = static_cast<double>(df);
  return detail::reg_inc_beta(0.5 * v, 0.5, v / (v + t * t));
}

// One-sample two-tailed t-test of reported velocities against the speed
// limit. Short or zero-variance samples fall back to the delta gate.
inline TTestResult velocity_t_test(std::span<const double> samples, double speed_limit,
                                   double alpha, double delta, std::size_t min_n) {
  if (samples.empty()) throw std::domain_error("velocity_t_test: empty sample");

  const std::size_t n = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;

  TTestResult r;
  if (n < min_n || variance == 0.0) {
    r.degenerate = true;
    r.reject = std::fabs(mean - speed_limit) > delta * speed_limit;
    r.p_value = r.reject ? 0.0 : 1.0;
    return r;
  }

  r.degrees_of_freedom = n - 1;
  r.t_statistic = (mean - speed_limit) / std::sqrt(variance / static_cast<double>(n));
  r.p_value = two_tailed_p(r.t_statistic, r.degrees_of_freedom);
  r.reject = r.p_value < alpha;
  return r;
}

}  // namespace taser
