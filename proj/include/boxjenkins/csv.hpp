#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "boxjenkins/error.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<Period> parse_period(std::string_view s) {
  if (s.size() != 7 || s[4] != '-') return std::nullopt;
  int year = 0;
  int month = 0;
  auto [p1, e1] = std::from_chars(s.data(), s.data() + 4, year);
  auto [p2, e2] = std::from_chars(s.data() + 5, s.data() + 7, month);
  if (e1 != std::errc{} || p1 != s.data() + 4 || e2 != std::errc{} || p2 != s.data() + 7) return std::nullopt;
  if (month < 1 || month > 12) return std::nullopt;
  return Period{year, month};
}

inline std::optional<double> parse_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses the `date,value` format. Row numbers in errors count the header as row 1.
[[nodiscard]] inline TimeSeries parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV: missing header row");
  std::string_view header = detail::trim(line);
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.remove_prefix(3);  // BOM
  if (header != "date,value") {
    throw DataError("malformed header at row 1: expected 'date,value', got '" + std::string(header) + "'");
  }

  std::optional<Period> start;
  Period previous;
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw DataError("row " + std::to_string(row) + ": expected two fields 'date,value'");
    }
    auto period = detail::parse_period(detail::trim(text.substr(0, comma)));
    if (!period) {
      throw DataError("row " + std::to_string(row) + ": unparseable date '" + std::string(text.substr(0, comma)) +
                      "' (expected YYYY-MM)");
    }
    auto value = detail::parse_real(detail::trim(text.substr(comma + 1)));
    if (!value) {
      throw DataError("row " + std::to_string(row) + ": unparseable value '" + std::string(text.substr(comma + 1)) +
                      "'");
    }
    if (!std::isfinite(*value)) throw DataError("row " + std::to_string(row) + ": non-finite value");
    if (start) {
      long step = previous.months_until(*period);
      if (step > 1) throw DataError("gap at row " + std::to_string(row) + ": " + previous.iso() + " -> " + period->iso());
      if (step < 1) {
        throw DataError("duplicate or out-of-order month at row " + std::to_string(row) + ": " + period->iso());
      }
    } else {
      start = period;
    }
    previous = *period;
    values.push_back(*value);
  }
  if (!start) throw DataError("CSV contains a header but no observations");
  return TimeSeries(*start, std::move(values));
}

[[nodiscard]] inline TimeSeries load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file '" + path.string() + "'");
  return parse_csv(in);
}

inline void write_csv(std::ostream& out, const TimeSeries& series) {
  out << "date,value\n";
  std::ostringstream num;
  num << std::setprecision(17);
  for (std::size_t i = 0; i < series.size(); ++i) {
    num.str({});
    num << series[i];
    out << series.period_at(i).iso() << ',' << num.str() << '\n';
  }
}

inline void save_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(out, series);
}

}  // namespace boxjenkins
