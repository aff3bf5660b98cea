#pragma once

// Everything: series handling, diagnostics, ARIMA estimation, forecasting,
// model selection and the reporting pipeline.

#include "boxjenkins/arima.hpp"
#include "boxjenkins/arma_polynomial.hpp"
#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/csv.hpp"
#include "boxjenkins/dickey_fuller_table.hpp"
#include "boxjenkins/distributions.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/forecasting.hpp"
#include "boxjenkins/hypothesis_tests.hpp"
#include "boxjenkins/model_selection.hpp"
#include "boxjenkins/nelder_mead.hpp"
#include "boxjenkins/pipeline.hpp"
#include "boxjenkins/report.hpp"
#include "boxjenkins/serialization.hpp"
#include "boxjenkins/time_series.hpp"
