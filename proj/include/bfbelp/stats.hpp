#pragma once

// Student t machinery: regularized incomplete beta, t CDF and quantile,
// one-sample confidence intervals and t-tests.

#include <cstddef>
#include <span>

namespace bfbelp {

/// I_x(a, b) by Lentz's continued fraction. a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student t with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Inverse of student_t_cdf; p in (0, 1).
double student_t_quantile(double p, double df);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double half_width() const { return 0.5 * (hi - lo); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< n - 1 denominator
};

SampleMoments moments(std::span<const double> xs);

/// mean +- t_{n-1,(1+level)/2} * s / sqrt(n). Throws InputError for n < 2.
Interval confidence_interval(std::span<const double> xs, double level = 0.95);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  ///< two-sided
};

/// One-sample two-sided test of mean = 0. Zero variance gives p = 1 when
/// the mean is zero and p = 0 otherwise. Throws InputError for n < 2.
TTestResult t_test(std::span<const double> xs);

}  // namespace bfbelp
