#pragma once

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace boxjenkins::dist {

[[nodiscard]] inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

[[nodiscard]] inline double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

[[nodiscard]] inline double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

/// P(X > x) for X ~ chi-square(df).
[[nodiscard]] inline double chi_squared_upper_tail(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

/// Two-sided normal p-value for a z statistic.
[[nodiscard]] inline double two_sided_p(double z) { return std::clamp(2.0 * normal_upper_tail(std::abs(z)), 0.0, 1.0); }

}  // namespace boxjenkins::dist
