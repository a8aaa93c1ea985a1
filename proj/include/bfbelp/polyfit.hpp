#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bfbelp {

/// a x^3 + b x^2 + c x + d over step index x.
struct CubicFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double operator()(double x) const { return ((a * x + b) * x + c) * x + d; }
  friend bool operator==(const CubicFit&, const CubicFit&) = default;
};

/// Least-squares cubic through (k, series[k]), k = 0..n-1. Needs n >= 4.
CubicFit fit_cubic(std::span<const double> series);

/// Least-squares line (a = b = 0). Needs n >= 2.
CubicFit fit_linear(std::span<const double> series);

/// Cubic when n >= 4, otherwise the linear fallback.
CubicFit fit_cubic_or_linear(std::span<const double> series);

/// Polynomial evaluated at from_index, from_index + 1, ... (horizon values).
std::vector<double> extrapolate_u(const CubicFit& fit, std::size_t from_index, std::size_t horizon);

}  // namespace bfbelp
