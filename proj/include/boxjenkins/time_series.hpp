#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boxjenkins/error.hpp"

namespace boxjenkins {

/// A calendar month.
struct Period {
  int year = 1970;
  int month = 1;  // 1..12

  [[nodiscard]] Period plus_months(long k) const {
    long idx = static_cast<long>(year) * 12 + (month - 1) + k;
    long y = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
    return Period{static_cast<int>(y), static_cast<int>(idx - y * 12) + 1};
  }

  [[nodiscard]] long months_until(const Period& other) const {
    return (static_cast<long>(other.year) * 12 + other.month) - (static_cast<long>(year) * 12 + month);
  }

  /// `YYYY-MM`, the CSV representation.
  [[nodiscard]] std::string iso() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }

  /// `Jan-2018`, the layout used in printed tables.
  [[nodiscard]] std::string label() const {
    static constexpr std::array<const char*, 12> names = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return std::string(names[static_cast<std::size_t>(month - 1)]) + "-" + std::to_string(year);
  }

  auto operator<=>(const Period&) const = default;
};

/// Regularly spaced monthly observations. Immutable once constructed.
class TimeSeries {
 public:
  static constexpr int frequency = 12;

  TimeSeries(Period start, std::vector<double> values) : start_(start), values_(std::move(values)) {
    if (start_.month < 1 || start_.month > 12) {
      throw DataError("invalid start month " + std::to_string(start_.month));
    }
    if (values_.empty()) {
      throw DataError("a time series needs at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DataError("non-finite value at position " + std::to_string(i + 1));
      }
    }
  }

  [[nodiscard]] Period start() const noexcept { return start_; }
  [[nodiscard]] Period end() const { return period_at(values_.size() - 1); }
  [[nodiscard]] Period period_at(std::size_t i) const { return start_.plus_months(static_cast<long>(i)); }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const TimeSeries&) const = default;

 private:
  Period start_;
  std::vector<double> values_;
};

struct BoxCoxLambda {
  double value = 0.0;

  explicit BoxCoxLambda(double v = 0.0) : value(v) {
    if (!std::isfinite(v)) throw ConfigError("Box-Cox lambda must be finite");
  }
  [[nodiscard]] bool is_log() const noexcept { return value == 0.0; }
};

struct SplitSpec {
  std::size_t n_train = 0;
};

[[nodiscard]] inline double box_cox_value(double y, BoxCoxLambda lambda) {
  if (!(y > 0.0)) {
    throw DataError("Box-Cox transform requires positive values, got " + std::to_string(y));
  }
  return lambda.is_log() ? std::log(y) : (std::pow(y, lambda.value) - 1.0) / lambda.value;
}

[[nodiscard]] inline double inv_box_cox_value(double z, BoxCoxLambda lambda) {
  if (lambda.is_log()) return std::exp(z);
  double base = lambda.value * z + 1.0;
  if (!(base > 0.0)) {
    throw DataError("inverse Box-Cox undefined: lambda*y + 1 <= 0 for y = " + std::to_string(z));
  }
  return std::pow(base, 1.0 / lambda.value);
}

[[nodiscard]] inline std::vector<double> box_cox(std::span<const double> values, BoxCoxLambda lambda) {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      out.push_back(box_cox_value(values[i], lambda));
    } catch (const DataError&) {
      throw DataError("Box-Cox transform requires positive values; position " + std::to_string(i + 1) +
                      " is " + std::to_string(values[i]));
    }
  }
  return out;
}

[[nodiscard]] inline TimeSeries box_cox(const TimeSeries& series, BoxCoxLambda lambda) {
  return TimeSeries(series.start(), box_cox(series.values(), lambda));
}

[[nodiscard]] inline TimeSeries inv_box_cox(const TimeSeries& series, BoxCoxLambda lambda) {
  std::vector<double> out;
  out.reserve(series.size());
  for (double z : series.values()) out.push_back(inv_box_cox_value(z, lambda));
  return TimeSeries(series.start(), std::move(out));
}

/// Applies (1 - B) `d` times. The result is `d` shorter.
[[nodiscard]] inline std::vector<double> difference(std::span<const double> values, int d) {
  if (d < 0) throw ConfigError("differencing order must be non-negative");
  if (values.size() < static_cast<std::size_t>(d)) {
    throw DataError("series of length " + std::to_string(values.size()) + " is too short to difference " +
                    std::to_string(d) + " times");
  }
  std::vector<double> out(values.begin(), values.end());
  for (int k = 0; k < d; ++k) {
    for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
    out.pop_back();
  }
  return out;
}

[[nodiscard]] inline TimeSeries difference(const TimeSeries& series, int d) {
  if (d < 0) throw ConfigError("differencing order must be non-negative");
  if (series.size() <= static_cast<std::size_t>(d)) {
    throw DataError("series of length " + std::to_string(series.size()) + " is too short to difference " +
                    std::to_string(d) + " times");
  }
  return TimeSeries(series.start().plus_months(d), difference(series.values(), d));
}

/// Inverse of `difference`: `seeds` are the first d values of the undifferenced series.
[[nodiscard]] inline std::vector<double> integrate(std::span<const double> diffs, std::span<const double> seeds) {
  const std::size_t d = seeds.size();
  // First value of each lower-order difference, recovered from the seeds.
  std::vector<double> heads(d);
  std::vector<double> work(seeds.begin(), seeds.end());
  for (std::size_t j = 0; j < d; ++j) {
    heads[j] = work.front();
    for (std::size_t i = 0; i + 1 < work.size(); ++i) work[i] = work[i + 1] - work[i];
    work.pop_back();
  }
  std::vector<double> level(diffs.begin(), diffs.end());
  for (std::size_t j = d; j-- > 0;) {
    std::vector<double> lower;
    lower.reserve(level.size() + 1);
    lower.push_back(heads[j]);
    for (double step : level) lower.push_back(lower.back() + step);
    level = std::move(lower);
  }
  return level;
}

[[nodiscard]] inline TimeSeries integrate(const TimeSeries& diffs, std::span<const double> seeds, int d) {
  if (seeds.size() != static_cast<std::size_t>(d)) {
    throw ConfigError("integrate needs exactly " + std::to_string(d) + " seed values, got " +
                      std::to_string(seeds.size()));
  }
  return TimeSeries(diffs.start().plus_months(-d), integrate(diffs.values(), seeds));
}

[[nodiscard]] inline std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, SplitSpec spec) {
  if (spec.n_train < 1 || spec.n_train >= series.size()) {
    throw ConfigError("training length " + std::to_string(spec.n_train) + " must lie in [1, " +
                      std::to_string(series.size() - 1) + "]");
  }
  auto v = series.values();
  TimeSeries train(series.start(), std::vector<double>(v.begin(), v.begin() + static_cast<long>(spec.n_train)));
  TimeSeries validation(series.period_at(spec.n_train),
                        std::vector<double>(v.begin() + static_cast<long>(spec.n_train), v.end()));
  return {std::move(train), std::move(validation)};
}

/// Joins two series where `tail` starts the month after `head` ends.
[[nodiscard]] inline TimeSeries concatenate(const TimeSeries& head, const TimeSeries& tail) {
  if (head.end().plus_months(1) != tail.start()) {
    throw DataError("series are not contiguous: " + head.end().iso() + " is not followed by " + tail.start().iso());
  }
  std::vector<double> v(head.values().begin(), head.values().end());
  v.insert(v.end(), tail.values().begin(), tail.values().end());
  return TimeSeries(head.start(), std::move(v));
}

}  // namespace boxjenkins
