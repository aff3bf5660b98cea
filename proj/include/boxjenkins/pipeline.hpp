#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "boxjenkins/arima.hpp"
#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/csv.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/forecasting.hpp"
#include "boxjenkins/hypothesis_tests.hpp"
#include "boxjenkins/model_selection.hpp"
#include "boxjenkins/time_series.hpp"

#ifndef BOXJENKINS_VERSION
#define BOXJENKINS_VERSION "1.0.0"
#endif

namespace boxjenkins {

inline constexpr const char* toolkit_version = BOXJENKINS_VERSION;

enum class OutputFormat { text, json, plotdata };

[[nodiscard]] inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "text") return OutputFormat::text;
  if (s == "json") return OutputFormat::json;
  if (s == "plotdata") return OutputFormat::plotdata;
  throw ConfigError("unknown output format '" + s + "' (expected text, json or plotdata)");
}

[[nodiscard]] inline const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::text:
      return "text";
    case OutputFormat::json:
      return "json";
    case OutputFormat::plotdata:
      return "plotdata";
  }
  return "unknown";
}

/// Settings for the identify -> estimate -> diagnose -> evaluate -> forecast
/// run. The defaults reproduce the analysis of the bundled fire-incidence data.
struct PipelineConfig {
  std::filesystem::path input;
  double lambda = 0.0;
  std::optional<int> d;                        // empty: chosen by repeated ADF tests
  int max_d = 2;
  std::optional<std::vector<ArimaOrder>> grid;  // empty: suggested from ACF/PACF
  std::optional<std::size_t> n_train;          // empty: everything but the validation block
  std::size_t validation_length = 12;
  bool evaluate = true;  // false skips the holdout stage but keeps the split
  std::size_t horizon = 12;
  double level = 0.95;
  double alpha = 0.05;
  int ljung_box_lag = 10;
  int ljung_box_fitdf = 0;
  std::optional<std::size_t> max_lag;  // correlogram length; empty: 10 + sqrt(n)
  std::filesystem::path output_dir;
  std::vector<OutputFormat> formats{OutputFormat::text};

  void validate() const {
    if (input.empty()) throw ConfigError("an input CSV is required");
    BoxCoxLambda{lambda};
    if (d && (*d < 0 || *d > max_d)) throw ConfigError("d must lie in [0, " + std::to_string(max_d) + "]");
    if (max_d < 0 || max_d > 2) throw ConfigError("max_d must lie in [0, 2]");
    if (horizon < 1) throw ConfigError("forecast horizon must be at least 1");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (ljung_box_lag < 1 || ljung_box_fitdf < 0 || ljung_box_fitdf >= ljung_box_lag) {
      throw ConfigError("Ljung-Box needs lag >= 1 and 0 <= fitdf < lag");
    }
    if (n_train && *n_train < 1) throw ConfigError("training length must be positive");
    if (max_lag && *max_lag < cutoff_window + 1) {
      throw ConfigError("max_lag must be at least " + std::to_string(cutoff_window + 1));
    }
    if (grid) {
      if (grid->empty()) throw ConfigError("candidate grid is empty");
      for (const auto& o : *grid) o.validate();
      (void)CandidateSet::from_orders(*grid);
      if (d && grid->front().d != *d) throw ConfigError("grid differencing order disagrees with d");
    }
  }
};

struct DataSummary {
  Period start;
  Period end;
  std::size_t n = 0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct StationarityStep {
  int d = 0;  // differences applied before the test
  TestResult adf;
};

struct ResidualDiagnostics {
  TestResult ljung_box;
  std::optional<TestResult> shapiro_wilk;
  AcfResult acf;
  AcfResult pacf;
};

struct Report {
  std::string version = toolkit_version;
  PipelineConfig config;
  DataSummary data;
  double lambda = 0.0;
  int d = 0;
  bool d_automatic = true;
  std::vector<StationarityStep> stationarity;
  AcfResult identification_acf;
  AcfResult identification_pacf;
  CandidateSet candidates;
  SelectionTrace selection;
  ArimaFit fit;
  std::vector<CoefficientRow> coefficients;
  ResidualDiagnostics residuals;
  std::optional<EvaluationResult> evaluation;
  ForecastResult forecast;

  // Inputs to the plot-data files.
  TimeSeries series{Period{}, {0.0}};  // train + validation
  TimeSeries train{Period{}, {0.0}};
  std::vector<double> fitted;  // original scale, aligned with fit.residuals
};

namespace detail {

template <class F>
auto run_stage(const char* stage, const char* hint, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    const std::string msg = std::string("stage '") + stage + "': " + e.what() + " (hint: " + hint + ")";
    switch (e.kind()) {
      case ErrorKind::config:
        throw ConfigError(msg);
      case ErrorKind::data:
        throw DataError(msg);
      case ErrorKind::numeric:
        throw NumericError(msg);
    }
    throw;
  }
}

}  // namespace detail

struct IdentificationResult {
  int d = 0;
  bool d_automatic = true;
  std::vector<StationarityStep> stationarity;
  AcfResult acf;
  AcfResult pacf;
  CandidateSet candidates;
};

/// Box-Cox transform, difference until ADF rejects a unit root at 0.05 (or use
/// the fixed `d`), then read tentative orders off the correlograms. Candidates
/// stay empty when the correlogram is too short to classify.
[[nodiscard]] inline IdentificationResult identify(const TimeSeries& series, BoxCoxLambda lambda, std::optional<int> fixed_d,
                                                   int max_d = 2, std::optional<std::size_t> max_lag = {}) {
  const TimeSeries z = box_cox(series, lambda);
  IdentificationResult out;
  if (fixed_d) {
    out.d = *fixed_d;
    out.d_automatic = false;
    const TimeSeries w = difference(z, out.d);
    if (w.size() >= 8) out.stationarity.push_back({out.d, adf_test(w)});
  } else {
    while (true) {
      const TestResult t = adf_test(difference(z, out.d));
      out.stationarity.push_back({out.d, t});
      if (t.p_value < 0.05 || out.d >= max_d) break;
      ++out.d;
    }
  }
  const TimeSeries w = difference(z, out.d);
  const std::size_t lag = max_lag.value_or(default_max_lag(w.size()));
  if (lag >= w.size()) throw ConfigError("max_lag must be below the differenced length " + std::to_string(w.size()));
  out.acf = acf(w, lag);
  out.pacf = pacf(w, lag);
  out.candidates.d = out.d;
  if (lag > cutoff_window) out.candidates = suggest_candidates(out.acf, out.pacf, out.d);
  return out;
}

/// Portmanteau and normality tests plus the correlogram of the fit's residuals.
[[nodiscard]] inline ResidualDiagnostics diagnose(const ArimaFit& fit, int lb_lag = 10, int lb_fitdf = 0,
                                                  std::optional<std::size_t> max_lag = {}) {
  const auto& e = fit.residuals;
  ResidualDiagnostics out;
  out.ljung_box = ljung_box(e, lb_lag, lb_fitdf);
  try {
    out.shapiro_wilk = shapiro_wilk(e);
  } catch (const DataError&) {
  }
  const std::size_t lag = std::min(max_lag.value_or(default_max_lag(e.size())), e.size() - 1);
  out.acf = acf(e, lag);
  out.pacf = pacf(e, lag);
  return out;
}

[[nodiscard]] inline Report run_pipeline(const PipelineConfig& config) {
  config.validate();
  Report report;
  report.config = config;
  const BoxCoxLambda lambda{config.lambda};
  report.lambda = config.lambda;

  // Pre-processing: load, check and split.
  auto loaded = detail::run_stage("load", "check the CSV path and its date,value format", [&] {
    TimeSeries all = load_csv(config.input);
    const std::size_t n_train = config.n_train.value_or(
        all.size() > config.validation_length ? all.size() - config.validation_length : 0);
    if (n_train < 1 || n_train + config.validation_length > all.size()) {
      throw ConfigError("training length " + std::to_string(n_train) + " plus validation length " +
                        std::to_string(config.validation_length) + " exceeds the " + std::to_string(all.size()) +
                        " observations");
    }
    std::vector<double> used(all.values().begin(), all.values().begin() + static_cast<long>(n_train + config.validation_length));
    TimeSeries full(all.start(), std::move(used));
    if (config.validation_length == 0) return std::tuple{full, full, std::optional<TimeSeries>{}};
    auto [tr, va] = split(full, SplitSpec{n_train});
    return std::tuple{full, tr, std::optional<TimeSeries>{va}};
  });
  const TimeSeries series = std::get<0>(loaded);
  const TimeSeries train = std::get<1>(loaded);
  const std::optional<TimeSeries> validation = std::get<2>(loaded);
  report.series = series;
  report.train = train;
  {
    auto v = series.values();
    report.data = DataSummary{series.start(),
                              series.end(),
                              series.size(),
                              train.size(),
                              validation ? validation->size() : 0,
                              *std::min_element(v.begin(), v.end()),
                              *std::max_element(v.begin(), v.end()),
                              0.0};
    for (double x : v) report.data.mean += x;
    report.data.mean /= static_cast<double>(v.size());
  }

  // Identification: transform, difference to stationarity, read the correlograms.
  detail::run_stage("identification", "use --lambda 1 for non-positive data, or fix --d", [&] {
    IdentificationResult id = identify(train, lambda, config.d, config.max_d, config.max_lag);
    report.d = id.d;
    report.d_automatic = id.d_automatic;
    report.stationarity = std::move(id.stationarity);
    report.identification_acf = std::move(id.acf);
    report.identification_pacf = std::move(id.pacf);
    if (config.grid) {
      report.candidates = CandidateSet::from_orders(*config.grid);
      if (report.candidates.d != report.d) {
        throw ConfigError("grid uses d = " + std::to_string(report.candidates.d) + " but the series needs d = " +
                          std::to_string(report.d));
      }
    } else {
      if (id.candidates.orders.empty()) throw ConfigError("too few lags to read candidate orders off the correlogram");
      report.candidates = std::move(id.candidates);
    }
  });

  // Estimation and selection.
  detail::run_stage("estimation", "try an explicit --grid with fewer parameters", [&] {
    auto [chosen, trace] = select(train, report.candidates, lambda, config.alpha);
    report.fit = std::move(chosen);
    report.selection = std::move(trace);
    report.coefficients = report.fit.covariance ? coef_test(report.fit) : std::vector<CoefficientRow>{};
  });

  // Diagnostic checking.
  detail::run_stage("diagnostics", "lower --ljung-box-lag for short series", [&] {
    report.residuals = diagnose(report.fit, config.ljung_box_lag, config.ljung_box_fitdf, config.max_lag);
    report.fitted = fitted_values(report.fit, train);
  });

  // Forecast evaluation on the holdout block.
  if (validation && config.evaluate) {
    detail::run_stage("evaluation", "the validation block must directly follow the training data", [&] {
      report.evaluation = one_step_eval(report.fit, train, *validation);
    });
  }

  // Final forecasts from the whole series with the parameters held fixed.
  detail::run_stage("forecast", "check --horizon and --level", [&] {
    report.forecast = forecast(report.fit, series, config.horizon, config.level);
  });
  return report;
}

}  // namespace boxjenkins
