#include "bfbelp/polyfit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "bfbelp/types.hpp"

namespace bfbelp {
namespace {

// Least squares on a Vandermonde system in powers of a centred, scaled
// index so the columns stay well conditioned; the result is mapped back to
// raw-index coefficients.
CubicFit solve_poly(std::span<const double> series, int degree) {
  const auto n = static_cast<Eigen::Index>(series.size());
  const double centre = 0.5 * static_cast<double>(n - 1);
  const double scale = n > 1 ? centre : 1.0;

  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!std::isfinite(series[k])) throw InputError("non-finite sample in fit input");
    const double s = (static_cast<double>(k) - centre) / scale;
    double power = 1.0;
    for (int j = 0; j <= degree; ++j) {
      design(k, j) = power;
      power *= s;
    }
    rhs(k) = series[k];
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(rhs);

  // p(x) = sum_j beta_j ((x - centre) / scale)^j, expanded in x.
  double coeff[4] = {0.0, 0.0, 0.0, 0.0};  // coeff[j] multiplies x^j
  const double h = -centre;
  for (int j = 0; j <= degree; ++j) {
    const double bj = beta(j) / std::pow(scale, j);
    // (x + h)^j = sum_i C(j, i) x^i h^(j - i)
    for (int i = 0; i <= j; ++i) {
      double binom = 1.0;
      for (int t = 0; t < i; ++t) binom = binom * (j - t) / (t + 1);
      coeff[i] += bj * binom * std::pow(h, j - i);
    }
  }
  return CubicFit{coeff[3], coeff[2], coeff[1], coeff[0]};
}

}  // namespace

CubicFit fit_cubic(std::span<const double> series) {
  if (series.size() < 4) throw InputError("cubic fit needs at least 4 samples");
  return solve_poly(series, 3);
}

CubicFit fit_linear(std::span<const double> series) {
  if (series.size() < 2) throw InputError("linear fit needs at least 2 samples");
  return solve_poly(series, 1);
}

CubicFit fit_cubic_or_linear(std::span<const double> series) {
  return series.size() >= 4 ? fit_cubic(series) : fit_linear(series);
}

std::vector<double> extrapolate_u(const CubicFit& fit, std::size_t from_index, std::size_t horizon) {
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t k = 0; k < horizon; ++k) out.push_back(fit(static_cast<double>(from_index + k)));
  return out;
}

}  // namespace bfbelp
