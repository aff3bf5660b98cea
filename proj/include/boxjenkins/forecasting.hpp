#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boxjenkins/arima.hpp"
#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/distributions.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/hypothesis_tests.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

/// MA(infinity) weights psi_0..psi_{h-1} of the (integrated) model; psi_0 = 1.
struct PsiWeights {
  std::vector<double> weights;
};

[[nodiscard]] inline PsiWeights psi_weights(const ArimaParams& params, const ArimaOrder& order, std::size_t h) {
  if (!is_stationary(params.phi)) throw NumericError("psi weights need stationary AR parameters");
  const std::vector<double> ar = integrated_ar_polynomial(params.phi, order.d);
  PsiWeights out{std::vector<double>(h, 0.0)};
  for (std::size_t j = 0; j < h; ++j) {
    double v = j == 0 ? 1.0 : (j <= params.theta.size() ? params.theta[j - 1] : 0.0);
    for (std::size_t i = 1; i < ar.size() && i <= j; ++i) v -= ar[i] * out.weights[j - i];
    out.weights[j] = v;
  }
  return out;
}

struct ForecastOptions {
  bool bias_adjust = false;  // default reports the median (plain back-transform)
};

struct ForecastResult {
  Period origin;  // last observed period
  std::size_t horizon = 0;
  double level = 0.95;
  std::vector<Period> periods;
  std::vector<double> point;  // original scale
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> mean_transformed;
  std::vector<double> variance_transformed;
};

namespace detail {

inline double bias_adjusted(double m, double v, BoxCoxLambda lambda) {
  if (lambda.is_log()) return std::exp(m) * (1.0 + 0.5 * v);
  const double base = lambda.value * m + 1.0;
  return inv_box_cox_value(m, lambda) * (1.0 + 0.5 * v * (1.0 - lambda.value) / (base * base));
}

// One-step predictions of the transformed series at positions d..n-1.
struct TransformedPredictions {
  std::vector<double> z;
  std::vector<double> w;
  FilterOutput filter;
};

inline TransformedPredictions filter_series(const ArimaFit& fit, const TimeSeries& series) {
  TransformedPredictions out;
  out.z = box_cox(series.values(), fit.lambda);
  if (out.z.size() <= static_cast<std::size_t>(fit.order.d)) {
    throw DataError("history too short for " + fit.order.label());
  }
  out.w = difference(out.z, fit.order.d);
  out.filter = arma_filter(out.w, fit.params.phi, fit.params.theta, fit.params.mean());
  return out;
}

}  // namespace detail

/// h-step forecasts from the end of `history` with the fit's parameters held fixed.
[[nodiscard]] inline ForecastResult forecast(const ArimaFit& fit, const TimeSeries& history, std::size_t h, double level,
                                             const ForecastOptions& options = {}) {
  if (h < 1) throw ConfigError("forecast horizon must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");

  const auto tp = detail::filter_series(fit, history);
  const auto ss = detail::arma_state_space(fit.params.phi, fit.params.theta);
  const std::vector<double> diff_poly = integrated_ar_polynomial({}, fit.order.d);  // (1-B)^d
  const PsiWeights psi = psi_weights(fit.params, fit.order, h);
  const double zq = dist::normal_quantile(0.5 * (1.0 + level));
  const double mu = fit.params.mean();

  ForecastResult out;
  out.origin = history.end();
  out.horizon = h;
  out.level = level;
  std::vector<double> z = tp.z;
  Eigen::VectorXd state = tp.filter.next_state;
  double cum_psi2 = 0.0;
  for (std::size_t k = 0; k < h; ++k) {
    double next = mu + state(0);
    for (std::size_t i = 1; i < diff_poly.size(); ++i) next -= diff_poly[i] * z[z.size() - i];
    z.push_back(next);
    state = ss.transition * state;

    cum_psi2 += psi.weights[k] * psi.weights[k];
    const double var = fit.params.sigma2 * cum_psi2;
    const double sd = std::sqrt(var);
    out.periods.push_back(history.end().plus_months(static_cast<long>(k + 1)));
    out.mean_transformed.push_back(next);
    out.variance_transformed.push_back(var);
    out.point.push_back(options.bias_adjust ? detail::bias_adjusted(next, var, fit.lambda)
                                            : inv_box_cox_value(next, fit.lambda));
    out.lower.push_back(inv_box_cox_value(next - zq * sd, fit.lambda));
    out.upper.push_back(inv_box_cox_value(next + zq * sd, fit.lambda));
  }
  return out;
}

struct EvaluationRow {
  Period period;
  double actual = 0.0;
  double forecast = 0.0;
  double error = 0.0;  // actual - forecast
};

struct EvaluationResult {
  std::vector<EvaluationRow> rows;
  double mae = 0.0;
  double rmse = 0.0;
  std::optional<AcfResult> error_acf;  // absent when the errors have no variance
  std::optional<AcfResult> error_pacf;
  std::optional<TestResult> error_shapiro;

  [[nodiscard]] std::vector<double> errors() const {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.error);
    return e;
  }
};

/// Default correlogram length for a sample of size n: 10 + sqrt(n), capped at n - 1.
[[nodiscard]] inline std::size_t default_max_lag(std::size_t n) {
  const auto lag = static_cast<std::size_t>(std::ceil(10.0 + std::sqrt(static_cast<double>(n))));
  return std::min(lag, n - 1);
}

/// One-step-ahead predictions over `validation`, filtering train + validation
/// with the fit's parameters held fixed.
[[nodiscard]] inline EvaluationResult one_step_eval(const ArimaFit& fit, const TimeSeries& train,
                                                    const TimeSeries& validation) {
  const TimeSeries full = concatenate(train, validation);
  const auto tp = detail::filter_series(fit, full);
  const std::size_t d = static_cast<std::size_t>(fit.order.d);
  if (train.size() <= d) throw DataError("training series too short for " + fit.order.label());

  // z_t = w_t - sum_{i>=1} c_i z_{t-i} with (1-B)^d = sum c_i B^i.
  const std::vector<double> diff_poly = integrated_ar_polynomial({}, fit.order.d);
  EvaluationResult out;
  for (std::size_t i = 0; i < validation.size(); ++i) {
    const std::size_t t = train.size() + i;
    double predicted_z = tp.filter.predictions[t - d];
    for (std::size_t j = 1; j < diff_poly.size(); ++j) predicted_z -= diff_poly[j] * tp.z[t - j];
    EvaluationRow row;
    row.period = full.period_at(t);
    row.actual = validation[i];
    row.forecast = inv_box_cox_value(predicted_z, fit.lambda);
    row.error = row.actual - row.forecast;
    out.rows.push_back(row);
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (const auto& r : out.rows) {
    abs_sum += std::abs(r.error);
    sq_sum += r.error * r.error;
  }
  const double n = static_cast<double>(out.rows.size());
  out.mae = abs_sum / n;
  out.rmse = std::sqrt(sq_sum / n);

  const std::vector<double> e = out.errors();
  if (e.size() >= 3) {
    try {
      out.error_acf = acf(e, default_max_lag(e.size()));
      out.error_pacf = pacf(e, default_max_lag(e.size()));
      out.error_shapiro = shapiro_wilk(e);
    } catch (const Error&) {
      // constant or degenerate errors: diagnostics undefined
    }
  }
  return out;
}

}  // namespace boxjenkins
