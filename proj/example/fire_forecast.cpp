// Fits ARIMA(1,1,1) to the log of the monthly fire counts, checks the
// residuals and prints a year of forecasts. Usage: fire_forecast [data.csv]

#include <cstdio>
#include <iostream>

#include "boxjenkins/boxjenkins.hpp"

namespace bj = boxjenkins;

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : BOXJENKINS_FIRE_CSV;
  try {
    const bj::TimeSeries all = bj::load_csv(path);
    auto [train, validation] = bj::split(all, bj::SplitSpec{all.size() - 12});
    const bj::BoxCoxLambda log{0.0};

    const bj::ArimaFit model = bj::fit(train, bj::ArimaOrder{1, 1, 1}, log);
    std::cout << bj::text::coefficients(model) << '\n';

    const bj::TestResult lb = bj::ljung_box(model.residuals, 10);
    std::printf("Ljung-Box Q = %.4f, p = %.4f\n\n", lb.statistic, lb.p_value);

    const bj::EvaluationResult eval = bj::one_step_eval(model, train, validation);
    std::printf("holdout MAE = %.2f, RMSE = %.2f\n\n", eval.mae, eval.rmse);

    std::cout << bj::text::forecast(bj::forecast(model, all, 12, 0.95));
  } catch (const bj::Error& e) {
    std::cerr << e.what() << '\n';
    return bj::exit_code(e.kind());
  }
  return 0;
}
