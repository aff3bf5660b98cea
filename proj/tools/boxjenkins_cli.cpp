// boxjenkins: command-line front end.
//
//   boxjenkins identify --input data.csv [--lambda 0] [--train 72]
//   boxjenkins fit      --input data.csv --order 1,1,1 [--save-model fit.json]
//   boxjenkins fit      --input data.csv --grid 0,1,1 1,1,0 1,1,1
//   boxjenkins diagnose --model fit.json
//   boxjenkins evaluate --input data.csv --model fit.json --train 72
//   boxjenkins forecast --input data.csv --model fit.json --horizon 12
//   boxjenkins run      --input data.csv [--format text --format plotdata --output-dir out]
//
// Exit status: 0 success, 2 configuration error, 3 data error, 4 numeric failure.

#include <cstddef>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boxjenkins/boxjenkins.hpp"

namespace bj = boxjenkins;

namespace {

bj::ArimaOrder parse_order(const std::string& s) {
  std::istringstream in(s);
  std::vector<int> v;
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw bj::ConfigError("order '" + s + "' is not of the form p,d,q");
    }
  }
  if (v.size() != 3) throw bj::ConfigError("order '" + s + "' is not of the form p,d,q");
  bj::ArimaOrder o{v[0], v[1], v[2]};
  o.validate();
  return o;
}

struct Options {
  std::string input;
  double lambda = 0.0;
  std::optional<std::size_t> train;
  std::size_t validation = 12;
  std::string order;
  std::vector<std::string> grid;
  std::optional<int> d;
  int max_d = 2;
  std::optional<std::size_t> max_lag;
  std::size_t horizon = 12;
  double level = 0.95;
  double alpha = 0.05;
  int lb_lag = 10;
  int lb_fitdf = 0;
  std::string model;
  std::string save_model;
  std::vector<std::string> formats;
  std::string output_dir;
  bool json = false;
};

bj::TimeSeries load_input(const Options& o) {
  if (o.input.empty()) throw bj::ConfigError("--input is required");
  return bj::load_csv(o.input);
}

bj::TimeSeries prefix(const bj::TimeSeries& s, std::size_t n) {
  if (n < 1 || n > s.size()) {
    throw bj::ConfigError("--train " + std::to_string(n) + " must lie in [1, " + std::to_string(s.size()) + "]");
  }
  if (n == s.size()) return s;
  return bj::split(s, bj::SplitSpec{n}).first;
}

bj::TimeSeries training_data(const Options& o) {
  const bj::TimeSeries all = load_input(o);
  return o.train ? prefix(all, *o.train) : all;
}

std::vector<bj::ArimaOrder> grid_orders(const Options& o) {
  std::vector<bj::ArimaOrder> out;
  for (const auto& g : o.grid) out.push_back(parse_order(g));
  return out;
}

// The saved model if --model was given, otherwise a fresh fit of --order.
bj::ArimaFit obtain_fit(const Options& o) {
  if (!o.model.empty()) return bj::load_fit(o.model);
  if (o.order.empty()) throw bj::ConfigError("either --model or --order is required");
  return bj::fit(training_data(o), parse_order(o.order), bj::BoxCoxLambda{o.lambda});
}

void print(const bj::json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_identify(const Options& o) {
  const bj::TimeSeries series = training_data(o);
  const auto id = bj::identify(series, bj::BoxCoxLambda{o.lambda}, o.d, o.max_d, o.max_lag);
  if (o.json) {
    bj::json steps = bj::json::array();
    for (const auto& s : id.stationarity) steps.push_back(bj::json{{"d", s.d}, {"test", bj::to_json(s.adf)}});
    print(bj::json{{"d", id.d},
                   {"d_source", id.d_automatic ? "adf" : "fixed"},
                   {"stationarity", steps},
                   {"acf", bj::to_json(id.acf)},
                   {"pacf", bj::to_json(id.pacf)},
                   {"candidates", bj::to_json(id.candidates)}});
    return 0;
  }
  std::cout << bj::text::stationarity(id.stationarity) << '\n'
            << bj::text::correlogram("Correlogram of the transformed series after " + std::to_string(id.d) + " difference(s)",
                                     id.acf, id.pacf)
            << '\n';
  if (!id.candidates.orders.empty()) std::cout << bj::text::candidates(id.candidates);
  return 0;
}

int cmd_fit(const Options& o) {
  const bj::BoxCoxLambda lambda{o.lambda};
  bj::ArimaFit chosen;
  std::optional<bj::SelectionTrace> trace;
  if (!o.grid.empty()) {
    if (!o.order.empty()) throw bj::ConfigError("--order and --grid are mutually exclusive");
    auto [f, t] = bj::select(training_data(o), bj::CandidateSet::from_orders(grid_orders(o)), lambda, o.alpha);
    chosen = std::move(f);
    trace = std::move(t);
  } else {
    if (!o.model.empty()) throw bj::ConfigError("fit estimates a new model; --model is not accepted");
    chosen = obtain_fit(o);
  }
  if (!o.save_model.empty()) bj::save_fit(o.save_model, chosen);
  if (o.json) {
    bj::json coefs = bj::json::array();
    if (chosen.covariance) {
      for (const auto& r : bj::coef_test(chosen)) coefs.push_back(bj::to_json(r));
    }
    print(bj::json{{"model", bj::to_json(chosen)},
                   {"coefficients", coefs},
                   {"selection", trace ? bj::to_json(*trace) : bj::json(nullptr)}});
    return 0;
  }
  if (trace) std::cout << bj::text::selection(*trace) << '\n';
  std::cout << bj::text::coefficients(chosen);
  return 0;
}

int cmd_diagnose(const Options& o) {
  const bj::ArimaFit f = obtain_fit(o);
  const auto diag = bj::diagnose(f, o.lb_lag, o.lb_fitdf, o.max_lag);
  if (o.json) {
    print(bj::json{{"order", bj::to_json(f.order)},
                   {"ljung_box", bj::to_json(diag.ljung_box)},
                   {"shapiro_wilk", diag.shapiro_wilk ? bj::to_json(*diag.shapiro_wilk) : bj::json(nullptr)},
                   {"acf", bj::to_json(diag.acf)},
                   {"pacf", bj::to_json(diag.pacf)}});
    return 0;
  }
  std::cout << bj::text::residual_tests(diag.ljung_box, diag.shapiro_wilk)
            << bj::text::correlogram("Residual correlogram", diag.acf, diag.pacf);
  return 0;
}

int cmd_evaluate(const Options& o) {
  const bj::TimeSeries all = load_input(o);
  const std::size_t n_train = o.train.value_or(all.size() > o.validation ? all.size() - o.validation : 0);
  if (n_train < 1 || n_train >= all.size()) {
    throw bj::ConfigError("training length must leave at least one validation observation");
  }
  const std::size_t n_valid = std::min(o.validation, all.size() - n_train);
  if (n_valid == 0) throw bj::ConfigError("--validation must be at least 1");
  auto [train, rest] = bj::split(all, bj::SplitSpec{n_train});
  const bj::TimeSeries validation = n_valid == rest.size() ? rest : bj::split(rest, bj::SplitSpec{n_valid}).first;
  bj::ArimaFit f;
  if (!o.model.empty()) {
    f = bj::load_fit(o.model);
  } else {
    if (o.order.empty()) throw bj::ConfigError("either --model or --order is required");
    f = bj::fit(train, parse_order(o.order), bj::BoxCoxLambda{o.lambda});
  }
  const auto eval = bj::one_step_eval(f, train, validation);
  if (o.json) {
    print(bj::to_json(eval));
    return 0;
  }
  std::cout << bj::text::evaluation(eval);
  return 0;
}

int cmd_forecast(const Options& o) {
  const bj::ArimaFit f = obtain_fit(o);
  const auto fc = bj::forecast(f, load_input(o), o.horizon, o.level);
  if (o.json) {
    print(bj::to_json(fc));
    return 0;
  }
  std::cout << bj::text::forecast(fc);
  return 0;
}

int cmd_run(const Options& o) {
  bj::PipelineConfig c;
  c.input = o.input;
  c.lambda = o.lambda;
  c.d = o.d;
  c.max_d = o.max_d;
  if (!o.grid.empty()) c.grid = grid_orders(o);
  c.n_train = o.train;
  c.validation_length = o.validation;
  c.horizon = o.horizon;
  c.level = o.level;
  c.alpha = o.alpha;
  c.ljung_box_lag = o.lb_lag;
  c.ljung_box_fitdf = o.lb_fitdf;
  c.max_lag = o.max_lag;
  c.output_dir = o.output_dir;
  c.formats.clear();
  for (const auto& f : o.formats) c.formats.push_back(bj::parse_output_format(f));
  if (o.json) c.formats.push_back(bj::OutputFormat::json);
  if (c.formats.empty()) c.formats.push_back(bj::OutputFormat::text);
  for (auto f : c.formats) {
    if (f == bj::OutputFormat::plotdata && c.output_dir.empty()) {
      throw bj::ConfigError("--format plotdata needs --output-dir");
    }
  }

  const bj::Report report = bj::run_pipeline(c);
  if (!o.save_model.empty()) bj::save_fit(o.save_model, report.fit);
  for (auto f : c.formats) {
    switch (f) {
      case bj::OutputFormat::text:
        std::cout << bj::render(report, "text");
        break;
      case bj::OutputFormat::json:
        std::cout << bj::render(report, "json");
        break;
      case bj::OutputFormat::plotdata:
        for (const auto& p : bj::emit_plot_data(report, c.output_dir)) std::cerr << "wrote " << p.string() << '\n';
        break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box-Jenkins ARIMA modelling of monthly series"};
  app.set_version_flag("--version", std::string(bj::toolkit_version));
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--input", o.input, "CSV file with a date,value header");
    if (required) opt->required();
    s->add_option("--lambda", o.lambda, "Box-Cox lambda (0 = log)")->capture_default_str();
    s->add_flag("--json", o.json, "JSON output");
  };
  auto model = [&](CLI::App* s) {
    s->add_option("--order", o.order, "ARIMA order p,d,q");
    s->add_option("--model", o.model, "saved ArimaFit JSON");
    s->add_option("--train", o.train, "use only the first N observations for fitting");
  };

  auto* identify = app.add_subcommand("identify", "stationarity tests, correlograms and tentative orders");
  input(identify, true);
  identify->add_option("--train", o.train, "use only the first N observations");
  identify->add_option("--d", o.d, "fixed differencing order (default: ADF)");
  identify->add_option("--max-d", o.max_d, "cap on automatic differencing")->capture_default_str();
  identify->add_option("--max-lag", o.max_lag, "correlogram length");

  auto* fit = app.add_subcommand("fit", "estimate one order, or select from a grid");
  input(fit, true);
  model(fit);
  fit->add_option("--grid", o.grid, "candidate orders p,d,q ...");
  fit->add_option("--alpha", o.alpha, "significance level for selection")->capture_default_str();
  fit->add_option("--save-model", o.save_model, "write the fit as JSON");

  auto* diagnose = app.add_subcommand("diagnose", "Ljung-Box, Shapiro-Wilk and residual correlogram");
  input(diagnose, false);
  model(diagnose);
  diagnose->add_option("--lb-lag", o.lb_lag, "Ljung-Box lag")->capture_default_str();
  diagnose->add_option("--lb-fitdf", o.lb_fitdf, "degrees of freedom removed from the Ljung-Box test")->capture_default_str();
  diagnose->add_option("--max-lag", o.max_lag, "correlogram length");

  auto* evaluate = app.add_subcommand("evaluate", "one-step-ahead forecasts over a holdout block");
  input(evaluate, true);
  model(evaluate);
  evaluate->add_option("--validation", o.validation, "holdout length")->capture_default_str();

  auto* forecast = app.add_subcommand("forecast", "h-step forecasts from the end of the input");
  input(forecast, true);
  model(forecast);
  forecast->add_option("--horizon", o.horizon, "forecast horizon")->capture_default_str();
  forecast->add_option("--level", o.level, "interval coverage")->capture_default_str();

  auto* run = app.add_subcommand("run", "full pipeline: identify, select, diagnose, evaluate, forecast");
  input(run, true);
  run->add_option("--d", o.d, "fixed differencing order (default: ADF)");
  run->add_option("--max-d", o.max_d, "cap on automatic differencing")->capture_default_str();
  run->add_option("--grid", o.grid, "candidate orders p,d,q ... (default: from ACF/PACF)");
  run->add_option("--train", o.train, "training length (default: all but the validation block)");
  run->add_option("--validation", o.validation, "holdout length")->capture_default_str();
  run->add_option("--horizon", o.horizon, "forecast horizon")->capture_default_str();
  run->add_option("--level", o.level, "interval coverage")->capture_default_str();
  run->add_option("--alpha", o.alpha, "significance level for selection")->capture_default_str();
  run->add_option("--lb-lag", o.lb_lag, "Ljung-Box lag")->capture_default_str();
  run->add_option("--lb-fitdf", o.lb_fitdf, "degrees of freedom removed from the Ljung-Box test")->capture_default_str();
  run->add_option("--max-lag", o.max_lag, "correlogram length");
  run->add_option("--format", o.formats, "text, json or plotdata (repeatable)");
  run->add_option("--output-dir", o.output_dir, "directory for plot-data CSV files");
  run->add_option("--save-model", o.save_model, "write the selected fit as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (identify->parsed()) return cmd_identify(o);
    if (fit->parsed()) return cmd_fit(o);
    if (diagnose->parsed()) return cmd_diagnose(o);
    if (evaluate->parsed()) return cmd_evaluate(o);
    if (forecast->parsed()) return cmd_forecast(o);
    if (run->parsed()) return cmd_run(o);
  } catch (const bj::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bj::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
