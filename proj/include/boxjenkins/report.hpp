#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "boxjenkins/distributions.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/pipeline.hpp"
#include "boxjenkins/serialization.hpp"

namespace boxjenkins {

inline constexpr int report_schema_version = 1;

inline json to_json(const PipelineConfig& c) {
  json grid = nullptr;
  if (c.grid) {
    grid = json::array();
    for (const auto& o : *c.grid) grid.push_back(to_json(o));
  }
  json formats = json::array();
  for (auto f : c.formats) formats.push_back(to_string(f));
  return json{{"input", c.input.string()},
              {"lambda", c.lambda},
              {"d", c.d ? json(*c.d) : json("auto")},
              {"max_d", c.max_d},
              {"grid", c.grid ? grid : json("auto")},
              {"n_train", c.n_train ? json(*c.n_train) : json("auto")},
              {"validation_length", c.validation_length},
              {"evaluate", c.evaluate},
              {"horizon", c.horizon},
              {"level", c.level},
              {"alpha", c.alpha},
              {"ljung_box_lag", c.ljung_box_lag},
              {"ljung_box_fitdf", c.ljung_box_fitdf},
              {"max_lag", c.max_lag ? json(*c.max_lag) : json("auto")},
              {"output_dir", c.output_dir.string()},
              {"formats", formats}};
}

/// Report schema, version 1.
inline json to_json(const Report& r) {
  json stationarity = json::array();
  for (const auto& s : r.stationarity) stationarity.push_back(json{{"d", s.d}, {"test", to_json(s.adf)}});
  json coefs = json::array();
  for (const auto& c : r.coefficients) coefs.push_back(to_json(c));
  return json{
      {"schema", "boxjenkins.report"},
      {"schema_version", report_schema_version},
      {"toolkit_version", r.version},
      {"config", to_json(r.config)},
      {"data",
       json{{"start", to_json(r.data.start)},
            {"end", to_json(r.data.end)},
            {"n", r.data.n},
            {"n_train", r.data.n_train},
            {"n_validation", r.data.n_validation},
            {"min", r.data.min},
            {"max", r.data.max},
            {"mean", r.data.mean}}},
      {"transformation", json{{"lambda", r.lambda}, {"d", r.d}, {"d_source", r.d_automatic ? "adf" : "fixed"}}},
      {"stationarity", stationarity},
      {"identification",
       json{{"acf", to_json(r.identification_acf)},
            {"pacf", to_json(r.identification_pacf)},
            {"candidates", to_json(r.candidates)}}},
      {"selection", to_json(r.selection)},
      {"model", to_json(r.fit)},
      {"coefficients", coefs},
      {"residual_diagnostics",
       json{{"ljung_box", to_json(r.residuals.ljung_box)},
            {"shapiro_wilk", r.residuals.shapiro_wilk ? to_json(*r.residuals.shapiro_wilk) : json(nullptr)},
            {"acf", to_json(r.residuals.acf)},
            {"pacf", to_json(r.residuals.pacf)}}},
      {"evaluation", r.evaluation ? to_json(*r.evaluation) : json(nullptr)},
      {"forecast", to_json(r.forecast)}};
}

/// Counts in printed tables: nearest integer, halves away from zero.
[[nodiscard]] inline long round_count(double x) { return std::lround(x); }

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string fmt_p(const TestResult& t) {
  return (t.p_clamped ? (t.p_value <= 0.5 ? "<" : ">") : std::string()) + fmt("%.4f", t.p_value);
}

inline void correlogram_table(std::string& out, const AcfResult& a, const AcfResult& p) {
  out += "Lag  ACF      PACF\n";
  for (std::size_t k = 1; k <= a.max_lag(); ++k) {
    out += fmt("%-3.0f", static_cast<double>(k)) + "  " + fmt("%7.4f", a.at_lag(k)) + "  " + fmt("%7.4f", p.at_lag(k));
    if (a.significant(k) || p.significant(k)) out += "  *";
    out += '\n';
  }
  out += "band: +/-" + fmt("%.4f", a.band) + " (1.96/sqrt(" + std::to_string(a.n) + "))\n";
}

inline std::string coefficient_label(const std::string& name) {
  if (name.rfind("ar", 0) == 0) return "AR (" + name.substr(2) + ")";
  if (name.rfind("ma", 0) == 0) return "MA (" + name.substr(2) + ")";
  return "Constant";
}

}  // namespace detail

namespace text {

using detail::fmt;

[[nodiscard]] inline std::string stationarity(const std::vector<StationarityStep>& steps) {
  std::string out = "Stationarity (Augmented Dickey-Fuller, constant + trend)\n";
  out += "  d  Statistic  Lags  p-value\n";
  for (const auto& s : steps) {
    out += "  " + std::to_string(s.d) + "  " + fmt("%9.4f", s.adf.statistic) + "  " + std::to_string(s.adf.df.value_or(0)) +
           "     " + detail::fmt_p(s.adf) + "\n";
  }
  return out;
}

[[nodiscard]] inline std::string correlogram(const std::string& title, const AcfResult& a, const AcfResult& p) {
  std::string out = title + "\n";
  detail::correlogram_table(out, a, p);
  return out;
}

[[nodiscard]] inline std::string candidates(const CandidateSet& c) {
  std::string out = std::string("Candidate models (") + (c.source == CandidateSource::heuristic ? "from ACF/PACF" : "explicit grid") + "):";
  for (const auto& o : c.orders) out += " " + o.label();
  return out + "\n";
}

[[nodiscard]] inline std::string selection(const SelectionTrace& t) {
  std::string out = "Table 1. Tentative models with AIC values\n";
  out += "Model            AIC      Status\n";
  for (const auto& e : t.entries) {
    out += e.order.label() + "     " + fmt("%7.2f", e.aic) + "  " + to_string(e.status);
    if (!e.note.empty()) out += " (" + e.note + ")";
    out += '\n';
  }
  for (const auto& f : t.failures) out += f.order.label() + "     fit failed: " + f.reason + "\n";
  return out;
}

[[nodiscard]] inline std::string coefficients(const ArimaFit& fit) {
  std::string out = "Table 2. Coefficient estimates of " + fit.order.label() + "\n";
  if (fit.covariance) {
    out += "        Estimates   Std. Error  z-value    p-value\n";
    for (const auto& c : coef_test(fit)) {
      out += detail::coefficient_label(c.name) + "  " + fmt("%10.6f", c.estimate) + "  " + fmt("%10.6f", c.std_error) + "  " +
             fmt("%9.4f", c.z) + "  " + fmt("%.4f", c.p_value) + "\n";
    }
  } else {
    const auto names = fit.coefficient_names;
    const auto values = fit.coefficients();
    for (std::size_t i = 0; i < names.size(); ++i) {
      out += detail::coefficient_label(names[i]) + "  " + fmt("%10.6f", values[i]) + "\n";
    }
  }
  out += "sigma^2 = " + fmt("%.6f", fit.params.sigma2) + ", log-likelihood = " + fmt("%.4f", fit.loglik) +
         ", AIC = " + fmt("%.2f", fit.aic) + "\n";
  for (const auto& w : fit.warnings) out += "warning: " + w + "\n";
  return out;
}

[[nodiscard]] inline std::string residual_tests(const TestResult& lb, const std::optional<TestResult>& sw) {
  std::string out = "Table 3. Ljung-Box test for lack of fit\n";
  out += "Test Statistic  df  p-value\n";
  out += fmt("%.4f", lb.statistic) + "          " + std::to_string(lb.df.value_or(0)) + "  " + fmt("%.4f", lb.p_value) + "\n";
  if (sw) out += "Shapiro-Wilk on residuals: W = " + fmt("%.4f", sw->statistic) + ", p-value = " + fmt("%.4f", sw->p_value) + "\n";
  return out;
}

[[nodiscard]] inline std::string evaluation(const EvaluationResult& e) {
  std::string out = "Table 4. Actual and one-step ahead forecasted values\n";
  out += "Date  Actual  Forecast  Error\n";
  for (const auto& row : e.rows) {
    out += row.period.label() + "  " + std::to_string(round_count(row.actual)) + "  " +
           std::to_string(round_count(row.forecast)) + "  " + std::to_string(round_count(row.error)) + "\n";
  }
  out += "MAE = " + fmt("%.4f", e.mae) + ", RMSE = " + fmt("%.4f", e.rmse) + "\n";
  if (e.error_shapiro) {
    out += "Shapiro-Wilk on forecast errors: W = " + fmt("%.4f", e.error_shapiro->statistic) +
           ", p-value = " + fmt("%.4f", e.error_shapiro->p_value) + "\n";
  }
  if (e.error_acf && e.error_pacf) out += correlogram("Forecast-error correlogram", *e.error_acf, *e.error_pacf);
  return out;
}

[[nodiscard]] inline std::string forecast(const ForecastResult& f) {
  const std::string pct = std::to_string(std::lround(f.level * 100.0));
  std::string out = "Table 5. Forecasts with " + pct + "% intervals\n";
  out += "Date  Forecast  Lower" + pct + "  Upper" + pct + "\n";
  for (std::size_t k = 0; k < f.horizon; ++k) {
    out += f.periods[k].label() + "  " + std::to_string(round_count(f.point[k])) + "  " +
           std::to_string(round_count(f.lower[k])) + "  " + std::to_string(round_count(f.upper[k])) + "\n";
  }
  return out;
}

}  // namespace text

[[nodiscard]] inline std::string render_text(const Report& r) {
  using detail::fmt;
  std::string out;
  out += "Box-Jenkins analysis report (toolkit " + r.version + ")\n";
  out += "input: " + r.config.input.string() + "\n\n";

  out += "Data\n";
  out += "  " + r.data.start.label() + " to " + r.data.end.label() + ", n = " + std::to_string(r.data.n) +
         " (training " + std::to_string(r.data.n_train) + ", validation " + std::to_string(r.data.n_validation) + ")\n";
  out += "  min " + fmt("%g", r.data.min) + ", max " + fmt("%g", r.data.max) + ", mean " + fmt("%.4f", r.data.mean) + "\n\n";

  out += "Transformation\n";
  out += "  Box-Cox lambda = " + fmt("%g", r.lambda) + ", differences d = " + std::to_string(r.d) +
         (r.d_automatic ? " (chosen by ADF at 0.05)" : " (fixed)") + "\n\n";

  out += text::stationarity(r.stationarity) + "\n";
  out += text::correlogram("Identification: correlogram of the transformed, differenced training series",
                           r.identification_acf, r.identification_pacf);
  out += text::candidates(r.candidates) + "\n";
  out += text::selection(r.selection) + "\n";
  out += text::coefficients(r.fit) + "\n";
  out += text::residual_tests(r.residuals.ljung_box, r.residuals.shapiro_wilk);
  out += text::correlogram("Residual correlogram", r.residuals.acf, r.residuals.pacf) + "\n";
  if (r.evaluation) out += text::evaluation(*r.evaluation) + "\n";
  out += text::forecast(r.forecast);
  return out;
}

[[nodiscard]] inline std::string render(const Report& r, const std::string& format) {
  if (format == "text") return render_text(r);
  if (format == "json") return to_json(r).dump(2) + "\n";
  throw ConfigError("unknown render format '" + format + "' (expected text or json)");
}

/// Names and headers of the plot-data files.
struct PlotFile {
  const char* name;
  const char* header;
};

inline constexpr PlotFile plot_manifest[] = {
    {"series.csv", "period,raw,transformed,differenced"},
    {"identification_correlogram.csv", "lag,acf,pacf,band"},
    {"residuals_time.csv", "period,residual"},
    {"residuals_fitted.csv", "fitted,residual"},
    {"residuals_qq.csv", "theoretical_quantile,sorted_residual"},
    {"residuals_correlogram.csv", "lag,acf,pacf,band"},
    {"forecast_errors_qq.csv", "theoretical_quantile,sorted_error"},
    {"forecast_errors_correlogram.csv", "lag,acf,pacf,band"},
    {"forecast_fan.csv", "period,point,lower,upper"},
};

/// Normal scores for a Q-Q plot: quantiles of (i - a)/(n + 1 - 2a), a = 3/8
/// for n <= 10 and 1/2 otherwise.
[[nodiscard]] inline std::vector<double> normal_scores(std::size_t n) {
  const double a = n <= 10 ? 0.375 : 0.5;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = dist::normal_quantile((static_cast<double>(i + 1) - a) / (static_cast<double>(n) + 1.0 - 2.0 * a));
  }
  return q;
}

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const char* header) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ConfigError("cannot write plot data to '" + path.string() + "'");
    out_ << header << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

inline void write_qq(CsvFile& f, std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const auto q = normal_scores(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) f.row({num(q[i]), num(sample[i])});
}

inline void write_correlogram(CsvFile& f, const AcfResult& a, const AcfResult& p) {
  for (std::size_t k = 1; k <= a.max_lag(); ++k) {
    f.row({std::to_string(k), num(a.at_lag(k)), num(p.at_lag(k)), num(a.band)});
  }
}

}  // namespace detail

/// Writes the data behind the diagnostic plots as CSV files; returns their paths.
/// Forecast-error files are skipped when the evaluation stage did not run.
inline std::vector<std::filesystem::path> emit_plot_data(const Report& r, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw ConfigError("cannot create plot-data directory '" + directory.string() + "'");
  }
  std::vector<std::filesystem::path> written;
  auto open = [&](std::size_t i) { return detail::CsvFile(directory / plot_manifest[i].name, plot_manifest[i].header); };
  using detail::num;

  {
    auto f = open(0);
    const BoxCoxLambda lambda{r.lambda};
    const std::vector<double> z = box_cox(r.train.values(), lambda);
    const std::vector<double> w = difference(z, r.d);
    for (std::size_t t = 0; t < r.train.size(); ++t) {
      const std::size_t d = static_cast<std::size_t>(r.d);
      f.row({r.train.period_at(t).iso(), num(r.train[t]), num(z[t]), t >= d ? num(w[t - d]) : std::string()});
    }
    written.push_back(f.path());
  }
  {
    auto f = open(1);
    detail::write_correlogram(f, r.identification_acf, r.identification_pacf);
    written.push_back(f.path());
  }
  {
    auto f = open(2);
    for (std::size_t t = 0; t < r.fit.residuals.size(); ++t) {
      f.row({r.fit.residual_start.plus_months(static_cast<long>(t)).iso(), num(r.fit.residuals[t])});
    }
    written.push_back(f.path());
  }
  {
    auto f = open(3);
    for (std::size_t t = 0; t < r.fit.residuals.size(); ++t) f.row({num(r.fitted[t]), num(r.fit.residuals[t])});
    written.push_back(f.path());
  }
  {
    auto f = open(4);
    detail::write_qq(f, r.fit.residuals);
    written.push_back(f.path());
  }
  {
    auto f = open(5);
    detail::write_correlogram(f, r.residuals.acf, r.residuals.pacf);
    written.push_back(f.path());
  }
  if (r.evaluation) {
    {
      auto f = open(6);
      detail::write_qq(f, r.evaluation->errors());
      written.push_back(f.path());
    }
    if (r.evaluation->error_acf && r.evaluation->error_pacf) {
      auto f = open(7);
      detail::write_correlogram(f, *r.evaluation->error_acf, *r.evaluation->error_pacf);
      written.push_back(f.path());
    }
  }
  {
    auto f = open(8);
    for (std::size_t k = 0; k < r.forecast.horizon; ++k) {
      f.row({r.forecast.periods[k].iso(), num(r.forecast.point[k]), num(r.forecast.lower[k]), num(r.forecast.upper[k])});
    }
    written.push_back(f.path());
  }
  return written;
}

}  // namespace boxjenkins
