#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/dickey_fuller_table.hpp"
#include "boxjenkins/distributions.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

struct TestResult {
  std::string name;
  double statistic = 0.0;
  std::optional<int> df;
  double p_value = 1.0;
  bool p_clamped = false;  // p sits at a table boundary; the true value is at least as extreme
  std::string null_hypothesis;
};

namespace detail {

// Piecewise-linear interpolation with end-point clamping. `xs` ascending.
inline double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t i = 1;
  while (xs[i] < x) ++i;
  double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace detail

/// p-value of a trend-case Dickey-Fuller statistic for sample size `n`.
/// Returns the p-value and whether it was clamped to the grid.
[[nodiscard]] inline std::pair<double, bool> dickey_fuller_p_value(double statistic, double n) {
  namespace df = dickey_fuller;
  std::array<double, df::probabilities.size()> at_n{};
  for (std::size_t c = 0; c < at_n.size(); ++c) {
    std::array<double, df::sample_sizes.size()> column{};
    for (std::size_t r = 0; r < column.size(); ++r) column[r] = df::critical_values[r][c];
    at_n[c] = detail::interpolate(df::sample_sizes, column, n);
  }
  bool clamped = statistic < at_n.front() || statistic > at_n.back();
  return {detail::interpolate(at_n, df::probabilities, statistic), clamped};
}

/// Augmented Dickey-Fuller test with constant, linear trend and
/// trunc((n-1)^(1/3)) lagged differences. Null: the series has a unit root.
[[nodiscard]] inline TestResult adf_test(std::span<const double> x, std::optional<int> lags = std::nullopt) {
  const long n_obs = static_cast<long>(x.size());
  if (n_obs < 8) throw DataError("ADF test needs at least 8 observations, got " + std::to_string(n_obs));
  const long k = lags.value_or(static_cast<int>(std::trunc(std::pow(static_cast<double>(n_obs - 1), 1.0 / 3.0))));
  if (k < 0) throw ConfigError("ADF lag order must be non-negative");

  std::vector<double> dy = difference(x, 1);
  const long n = static_cast<long>(dy.size());
  const long rows = n - k;
  const long cols = 3 + k;
  if (rows <= cols) throw DataError("series too short for an ADF regression with " + std::to_string(k) + " lags");

  // Row for time index t (1-based over dy, t = k+1..n):
  //   dy_t ~ 1 + y_{t-1}... following the standard layout [1, y_level, trend, dy lags].
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (long r = 0; r < rows; ++r) {
    const long t = k + r;  // 0-based index into dy
    y(r) = dy[static_cast<std::size_t>(t)];
    X(r, 0) = 1.0;
    X(r, 1) = x[static_cast<std::size_t>(t)];  // level preceding dy_t
    X(r, 2) = static_cast<double>(t + 1);
    for (long j = 1; j <= k; ++j) X(r, 2 + j) = dy[static_cast<std::size_t>(t - j)];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < cols) throw NumericError("ADF regression matrix is singular");
  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd resid = y - X * beta;
  double s2 = resid.squaredNorm() / static_cast<double>(rows - cols);
  Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
  double se = std::sqrt(s2 * xtx_inv(1, 1));
  if (!(se > 0.0) || !std::isfinite(se)) throw NumericError("ADF regression produced a degenerate standard error");

  TestResult out;
  out.name = "Augmented Dickey-Fuller";
  out.statistic = beta(1) / se;
  out.df = static_cast<int>(k);  // lag order, as conventionally reported
  auto [p, clamped] = dickey_fuller_p_value(out.statistic, static_cast<double>(n));
  out.p_value = p;
  out.p_clamped = clamped;
  out.null_hypothesis = "the series has a unit root (is not stationary)";
  return out;
}

[[nodiscard]] inline TestResult adf_test(const TimeSeries& series, std::optional<int> lags = std::nullopt) {
  return adf_test(series.values(), lags);
}

/// Ljung-Box portmanteau statistic on the first `lag` autocorrelations.
[[nodiscard]] inline TestResult ljung_box(std::span<const double> residuals, int lag, int fitdf = 0) {
  const std::size_t n = residuals.size();
  if (lag < 1 || static_cast<std::size_t>(lag) >= n) {
    throw ConfigError("Ljung-Box lag " + std::to_string(lag) + " must lie in [1, " + std::to_string(n - 1) + "]");
  }
  if (fitdf < 0 || lag - fitdf <= 0) {
    throw ConfigError("Ljung-Box degrees of freedom lag - fitdf must be positive");
  }
  const double nd = static_cast<double>(n);
  double q = 0.0;
  double mean = 0.0;
  for (double e : residuals) mean += e;
  mean /= nd;
  double ss = 0.0;
  for (double e : residuals) ss += (e - mean) * (e - mean);
  if (ss > 0.0) {
    AcfResult r = acf(residuals, static_cast<std::size_t>(lag));
    for (int k = 1; k <= lag; ++k) q += r.at_lag(static_cast<std::size_t>(k)) * r.at_lag(static_cast<std::size_t>(k)) / (nd - k);
    q *= nd * (nd + 2.0);
  }
  TestResult out;
  out.name = "Ljung-Box";
  out.statistic = q;
  out.df = lag - fitdf;
  out.p_value = dist::chi_squared_upper_tail(q, static_cast<double>(lag - fitdf));
  out.null_hypothesis = "the residuals are independently distributed (no lack of fit)";
  return out;
}

namespace detail {

// c[0] + c[1] x + ... + c[n-1] x^(n-1)
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

}  // namespace detail

/// Shapiro-Wilk normality test, Royston's AS R94 algorithm.
[[nodiscard]] inline TestResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) throw DataError("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));

  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (range < 1e-19 * std::max(1.0, std::abs(x.front()))) throw DataError("Shapiro-Wilk undefined for a sample with zero range");

  static constexpr std::array<double, 2> g = {-2.273, 0.459};
  static constexpr std::array<double, 6> c1 = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr std::array<double, 6> c2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr std::array<double, 4> c3 = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr std::array<double, 4> c4 = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr std::array<double, 4> c5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr std::array<double, 3> c6 = {-0.4803, -0.082676, 0.0030302};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> a(half);  // a[0] pairs the extremes
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // Full antisymmetric weight vector aligned with ascending order statistics.
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    w[i] = -a[i];
    w[n - 1 - i] = a[i];
  }
  double wbar = 0.0;
  double xbar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wbar += w[i];
    xbar += x[i] / range;
  }
  wbar /= an;
  xbar /= an;
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = w[i] - wbar;
    const double dx = x[i] / range - xbar;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double stat = 1.0 - w1;

  double p = 0.0;
  if (n == 3) {
    constexpr double six_over_pi = 1.90985931710274;
    constexpr double pi_over_three = 1.04719755119660;
    p = std::max(0.0, six_over_pi * (std::asin(std::sqrt(stat)) - pi_over_three));
  } else {
    double y = std::log(w1);
    const double ln_n = std::log(an);
    double mu = 0.0;
    double sigma = 0.0;
    if (n <= 11) {
      const double gamma = detail::poly(g, an);
      if (y >= gamma) {
        y = std::numeric_limits<double>::infinity();
      } else {
        y = -std::log(gamma - y);
      }
      mu = detail::poly(c3, an);
      sigma = std::exp(detail::poly(c4, an));
    } else {
      mu = detail::poly(c5, ln_n);
      sigma = std::exp(detail::poly(c6, ln_n));
    }
    p = std::isinf(y) ? 1e-99 : dist::normal_upper_tail((y - mu) / sigma);
  }

  TestResult out;
  out.name = "Shapiro-Wilk";
  out.statistic = stat;
  out.p_value = std::clamp(p, 0.0, 1.0);
  out.null_hypothesis = "the sample is drawn from a normal distribution";
  return out;
}

}  // namespace boxjenkins
