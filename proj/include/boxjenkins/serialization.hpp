#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxjenkins/arima.hpp"
#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/forecasting.hpp"
#include "boxjenkins/hypothesis_tests.hpp"
#include "boxjenkins/model_selection.hpp"

// JSON encodings. Keys are emitted in sorted order and doubles at full
// round-trip precision, so equal values always serialise to equal bytes.

namespace boxjenkins {

using json = nlohmann::json;

inline constexpr int fit_schema_version = 1;

inline json to_json(const Period& p) { return p.iso(); }

inline json to_json(const ArimaOrder& o) { return json{{"p", o.p}, {"d", o.d}, {"q", o.q}}; }

inline json to_json(const TestResult& t) {
  json j{{"name", t.name},
         {"statistic", t.statistic},
         {"p_value", t.p_value},
         {"p_clamped", t.p_clamped},
         {"null_hypothesis", t.null_hypothesis}};
  j["df"] = t.df ? json(*t.df) : json(nullptr);
  return j;
}

inline json to_json(const AcfResult& r) {
  return json{{"kind", r.kind == CorrelogramKind::acf ? "acf" : "pacf"},
              {"n", r.n},
              {"band", r.band},
              {"coefficients", r.coefficients}};
}

inline json to_json(const CoefficientRow& r) {
  return json{{"name", r.name}, {"estimate", r.estimate}, {"std_error", r.std_error}, {"z", r.z}, {"p_value", r.p_value}};
}

/// ArimaFit schema, version 1.
inline json to_json(const ArimaFit& f) {
  json cov = nullptr;
  if (f.covariance) {
    std::vector<double> rowmajor;
    for (Eigen::Index i = 0; i < f.covariance->rows(); ++i) {
      for (Eigen::Index k = 0; k < f.covariance->cols(); ++k) rowmajor.push_back((*f.covariance)(i, k));
    }
    cov = json{{"names", f.coefficient_names}, {"dim", f.covariance->rows()}, {"row_major", rowmajor}};
  }
  return json{{"schema", "boxjenkins.arima_fit"},
              {"version", fit_schema_version},
              {"order", to_json(f.order)},
              {"lambda", f.lambda.value},
              {"include_constant", f.include_constant},
              {"coefficients", json{{"phi", f.params.phi}, {"theta", f.params.theta}, {"delta", f.params.delta}}},
              {"sigma2", f.params.sigma2},
              {"loglik", f.loglik},
              {"aic", f.aic},
              {"n_used", f.n_used},
              {"covariance", cov},
              {"residual_start", to_json(f.residual_start)},
              {"residuals", f.residuals},
              {"warnings", f.warnings},
              {"data_fingerprint", f.data_fingerprint}};
}

[[nodiscard]] inline ArimaFit fit_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != "boxjenkins.arima_fit") throw DataError("not an ARIMA fit document");
    if (j.at("version").get<int>() != fit_schema_version) {
      throw DataError("unsupported ARIMA fit schema version " + std::to_string(j.at("version").get<int>()));
    }
    ArimaFit f;
    f.order = ArimaOrder{j.at("order").at("p").get<int>(), j.at("order").at("d").get<int>(), j.at("order").at("q").get<int>()};
    f.order.validate();
    f.lambda = BoxCoxLambda{j.at("lambda").get<double>()};
    f.include_constant = j.at("include_constant").get<bool>();
    const json& c = j.at("coefficients");
    f.params.phi = c.at("phi").get<std::vector<double>>();
    f.params.theta = c.at("theta").get<std::vector<double>>();
    f.params.delta = c.at("delta").get<double>();
    f.params.sigma2 = j.at("sigma2").get<double>();
    if (f.params.phi.size() != static_cast<std::size_t>(f.order.p) ||
        f.params.theta.size() != static_cast<std::size_t>(f.order.q)) {
      throw DataError("coefficient counts do not match the order");
    }
    if (!(f.params.sigma2 > 0.0)) throw DataError("sigma2 must be positive");
    f.loglik = j.at("loglik").get<double>();
    f.aic = j.at("aic").get<double>();
    f.n_used = j.at("n_used").get<std::size_t>();
    f.coefficient_names = detail::CoefficientLayout{f.order.p, f.order.q, f.include_constant}.names();
    if (!j.at("covariance").is_null()) {
      const json& cj = j.at("covariance");
      const auto dim = cj.at("dim").get<Eigen::Index>();
      const auto values = cj.at("row_major").get<std::vector<double>>();
      if (values.size() != static_cast<std::size_t>(dim * dim) || static_cast<std::size_t>(dim) != f.coefficient_names.size()) {
        throw DataError("covariance dimensions do not match the coefficients");
      }
      Eigen::MatrixXd m(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = values[static_cast<std::size_t>(i * dim + k)];
      }
      f.covariance = m;
    }
    const std::string rs = j.at("residual_start").get<std::string>();
    f.residual_start = Period{std::stoi(rs.substr(0, 4)), std::stoi(rs.substr(5, 2))};
    f.residuals = j.at("residuals").get<std::vector<double>>();
    f.warnings = j.at("warnings").get<std::vector<std::string>>();
    f.data_fingerprint = j.at("data_fingerprint").get<std::string>();
    return f;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ARIMA fit JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(std::string("malformed ARIMA fit JSON: ") + e.what());
  }
}

inline void save_fit(const std::filesystem::path& path, const ArimaFit& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_json(f).dump(2) << '\n';
}

[[nodiscard]] inline ArimaFit load_fit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return fit_from_json(j);
}

inline json to_json(const ForecastResult& f) {
  json rows = json::array();
  for (std::size_t k = 0; k < f.horizon; ++k) {
    rows.push_back(json{{"period", to_json(f.periods[k])},
                        {"point", f.point[k]},
                        {"lower", f.lower[k]},
                        {"upper", f.upper[k]},
                        {"mean_transformed", f.mean_transformed[k]},
                        {"variance_transformed", f.variance_transformed[k]}});
  }
  return json{{"origin", to_json(f.origin)}, {"horizon", f.horizon}, {"level", f.level}, {"rows", rows}};
}

inline json to_json(const EvaluationResult& e) {
  json rows = json::array();
  for (const auto& r : e.rows) {
    rows.push_back(json{{"period", to_json(r.period)}, {"actual", r.actual}, {"forecast", r.forecast}, {"error", r.error}});
  }
  return json{{"rows", rows},
              {"mae", e.mae},
              {"rmse", e.rmse},
              {"error_acf", e.error_acf ? to_json(*e.error_acf) : json(nullptr)},
              {"error_pacf", e.error_pacf ? to_json(*e.error_pacf) : json(nullptr)},
              {"error_shapiro_wilk", e.error_shapiro ? to_json(*e.error_shapiro) : json(nullptr)}};
}

inline json to_json(const SelectionTrace& t) {
  json ranked = json::array();
  for (const auto& e : t.entries) {
    ranked.push_back(json{{"order", to_json(e.order)}, {"aic", e.aic}, {"status", to_string(e.status)}, {"note", e.note}});
  }
  json failures = json::array();
  for (const auto& f : t.failures) failures.push_back(json{{"order", to_json(f.order)}, {"reason", f.reason}});
  return json{{"alpha", t.alpha}, {"ranked", ranked}, {"failures", failures}};
}

inline json to_json(const CandidateSet& c) {
  json orders = json::array();
  for (const auto& o : c.orders) orders.push_back(to_json(o));
  return json{{"d", c.d}, {"source", c.source == CandidateSource::heuristic ? "heuristic" : "explicit-grid"}, {"orders", orders}};
}

}  // namespace boxjenkins
