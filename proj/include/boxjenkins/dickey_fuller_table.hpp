#pragma once

#include <array>
#include <string_view>

// Critical values of the Dickey-Fuller t statistic for the regression with a
// constant and a linear trend (Fuller 1976, Table 8.5.2, tau_tau). Rows are
// sample sizes, columns are cumulative probabilities. The p-value of an ADF
// statistic is found by linear interpolation in sample size, then in the
// statistic, and is clamped to the probability grid's end points.
//
// Asset version 1. Any change to these numbers must bump the version: ADF
// p-values in stored reports depend on them bit for bit.

namespace boxjenkins::dickey_fuller {

inline constexpr std::string_view table_version = "fuller-1976-8.5.2-trend/1";

inline constexpr std::array<double, 6> sample_sizes = {25, 50, 100, 250, 500, 100000};

inline constexpr std::array<double, 8> probabilities = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};

// critical_values[size_row][probability_column]
inline constexpr std::array<std::array<double, 8>, 6> critical_values = {{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

}  // namespace boxjenkins::dickey_fuller
