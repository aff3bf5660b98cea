#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "boxjenkins/error.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

enum class CorrelogramKind { acf, pacf };

/// Sample (partial) autocorrelations at lags 1..max_lag together with the
/// fixed-level significance band 1.96/sqrt(n).
struct AcfResult {
  CorrelogramKind kind = CorrelogramKind::acf;
  std::vector<double> coefficients;  // coefficients[k-1] is lag k
  std::size_t n = 0;
  double band = 0.0;

  [[nodiscard]] std::size_t max_lag() const noexcept { return coefficients.size(); }
  [[nodiscard]] double at_lag(std::size_t k) const { return coefficients.at(k - 1); }
  [[nodiscard]] bool significant(std::size_t k) const { return std::abs(at_lag(k)) > band; }
};

[[nodiscard]] inline double significance_band(std::size_t n) { return 1.96 / std::sqrt(static_cast<double>(n)); }

/// Biased (denominator n) autocorrelation estimator.
[[nodiscard]] inline AcfResult acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n < 2) throw DataError("autocorrelation needs at least two observations");
  if (max_lag < 1 || max_lag >= n) {
    throw ConfigError("max_lag " + std::to_string(max_lag) + " must lie in [1, " + std::to_string(n - 1) + "]");
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (!(denom > 0.0)) throw DataError("autocorrelation undefined for a constant series");

  AcfResult out{CorrelogramKind::acf, std::vector<double>(max_lag), n, significance_band(n)};
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) num += (x[t] - mean) * (x[t + k] - mean);
    out.coefficients[k - 1] = num / denom;
  }
  return out;
}

[[nodiscard]] inline AcfResult acf(const TimeSeries& series, std::size_t max_lag) {
  return acf(series.values(), max_lag);
}

/// Durbin-Levinson recursion: maps autocorrelations r_1..r_m onto partial
/// autocorrelations phi_11..phi_mm.
[[nodiscard]] inline std::vector<double> durbin_levinson(std::span<const double> r) {
  const std::size_t m = r.size();
  std::vector<double> partial(m);
  std::vector<double> phi;
  std::vector<double> next;
  double v = 1.0;
  for (std::size_t k = 1; k <= m; ++k) {
    double num = r[k - 1];
    for (std::size_t j = 1; j < k; ++j) num -= phi[j - 1] * r[k - j - 1];
    double kappa = num / v;
    if (!std::isfinite(kappa) || std::abs(kappa) >= 1.0) {
      throw NumericError("Durbin-Levinson recursion broke down at lag " + std::to_string(k) +
                         " (|phi_kk| >= 1; degenerate input)");
    }
    next.assign(k, 0.0);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - kappa * phi[k - j - 1];
    next[k - 1] = kappa;
    phi.swap(next);
    v *= 1.0 - kappa * kappa;
    partial[k - 1] = kappa;
  }
  return partial;
}

[[nodiscard]] inline AcfResult pacf(std::span<const double> x, std::size_t max_lag) {
  AcfResult r = acf(x, max_lag);
  r.kind = CorrelogramKind::pacf;
  r.coefficients = durbin_levinson(r.coefficients);
  return r;
}

[[nodiscard]] inline AcfResult pacf(const TimeSeries& series, std::size_t max_lag) {
  return pacf(series.values(), max_lag);
}

}  // namespace boxjenkins
