#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "boxjenkins/arima.hpp"
#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

enum class CandidateSource { heuristic, explicit_grid };

struct CandidateSet {
  std::vector<ArimaOrder> orders;
  int d = 0;
  CandidateSource source = CandidateSource::explicit_grid;

  static CandidateSet from_orders(std::vector<ArimaOrder> orders) {
    if (orders.empty()) throw ConfigError("candidate set is empty");
    CandidateSet set;
    set.d = orders.front().d;
    for (const auto& o : orders) {
      if (o.d != set.d) throw ConfigError("all candidates must share the same differencing order");
      if (std::find(set.orders.begin(), set.orders.end(), o) != set.orders.end()) {
        throw ConfigError("duplicate candidate " + o.label());
      }
      set.orders.push_back(o);
    }
    return set;
  }
};

/// How a correlogram decays.
struct CorrelogramShape {
  enum class Kind { cuts_off, ambiguous, tails_off } kind = Kind::tails_off;
  std::size_t lag = 0;  // length of the initial run of significant lags
};

inline constexpr std::size_t cutoff_window = 5;

/// Lags 1..k significant and k+1..k+5 not: cuts off at k. An initial run that
/// ends but is followed by further spikes inside the window is ambiguous;
/// a run that never ends tails off.
[[nodiscard]] inline CorrelogramShape classify(const AcfResult& r) {
  std::size_t k = 0;
  while (k < r.max_lag() && r.significant(k + 1)) ++k;
  if (k == r.max_lag()) return {CorrelogramShape::Kind::tails_off, k};
  const std::size_t last = std::min(r.max_lag(), k + cutoff_window);
  for (std::size_t lag = k + 1; lag <= last; ++lag) {
    if (r.significant(lag)) return {CorrelogramShape::Kind::ambiguous, k};
  }
  return {CorrelogramShape::Kind::cuts_off, k};
}

/// Tentative orders read off the ACF (MA order) and PACF (AR order) of an
/// already differenced series.
[[nodiscard]] inline CandidateSet suggest_candidates(const AcfResult& acf_r, const AcfResult& pacf_r, int d) {
  if (acf_r.max_lag() < cutoff_window + 1 || pacf_r.max_lag() < cutoff_window + 1) {
    throw ConfigError("at least " + std::to_string(cutoff_window + 1) + " lags are needed to classify a correlogram");
  }
  using Kind = CorrelogramShape::Kind;
  const CorrelogramShape a = classify(acf_r);
  const CorrelogramShape p = classify(pacf_r);

  CandidateSet set;
  set.d = d;
  set.source = CandidateSource::heuristic;
  auto add = [&](ArimaOrder o) {
    if (std::find(set.orders.begin(), set.orders.end(), o) == set.orders.end()) set.orders.push_back(o);
  };

  if (a.kind == Kind::cuts_off && p.kind == Kind::cuts_off && a.lag == 0 && p.lag == 0) {
    add({0, d, 0});
    return set;
  }
  const auto cap = [](std::size_t k) { return static_cast<int>(std::min<std::size_t>(k, max_arma_order)); };
  if (a.kind != Kind::tails_off && a.lag > 0) add({0, d, cap(a.lag)});
  if (p.kind != Kind::tails_off && p.lag > 0) add({cap(p.lag), d, 0});

  const bool clean_ma = a.kind == Kind::cuts_off && a.lag > 0;
  const bool clean_ar = p.kind == Kind::cuts_off && p.lag > 0;
  if (clean_ma == clean_ar) {
    for (int ar = 1; ar <= 3; ++ar) {
      for (int ma = 1; ma <= 3; ++ma) add({ar, d, ma});
    }
  }
  if (set.orders.empty()) add({0, d, 0});
  return set;
}

enum class CandidateStatus { selected, rejected_insignificant, not_examined };

[[nodiscard]] inline const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::selected:
      return "selected";
    case CandidateStatus::rejected_insignificant:
      return "rejected-insignificant";
    case CandidateStatus::not_examined:
      return "not-examined";
  }
  return "unknown";
}

struct SelectionEntry {
  ArimaOrder order;
  double aic = 0.0;
  CandidateStatus status = CandidateStatus::not_examined;
  std::string note;  // why a candidate was rejected
  std::optional<ArimaFit> fit;
};

struct CandidateFailure {
  ArimaOrder order;
  std::string reason;
};

struct SelectionTrace {
  std::vector<SelectionEntry> entries;  // ranked by AIC
  std::vector<CandidateFailure> failures;
  double alpha = 0.05;
};

/// AIC values closer than this are treated as tied.
inline constexpr double aic_tie_tolerance = 1e-8;

/// Orders entries by AIC; ties go to fewer coefficients, then lower q.
inline void rank_entries(std::vector<SelectionEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const SelectionEntry& a, const SelectionEntry& b) {
    if (std::abs(a.aic - b.aic) > aic_tie_tolerance) return a.aic < b.aic;
    const int ka = a.order.p + a.order.q;
    const int kb = b.order.p + b.order.q;
    if (ka != kb) return ka < kb;
    return a.order.q < b.order.q;
  });
}

/// Fits every candidate (concurrently) and ranks the successful fits by AIC.
[[nodiscard]] inline SelectionTrace rank_by_aic(const TimeSeries& series, const CandidateSet& candidates,
                                                BoxCoxLambda lambda, const FitOptions& options = {}) {
  if (candidates.orders.empty()) throw ConfigError("candidate set is empty");
  std::vector<std::future<ArimaFit>> jobs;
  jobs.reserve(candidates.orders.size());
  for (const auto& order : candidates.orders) {
    jobs.push_back(std::async(std::launch::async, [&series, order, lambda, options] {
      return fit(series, order, lambda, options);
    }));
  }
  SelectionTrace trace;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      ArimaFit f = jobs[i].get();
      trace.entries.push_back({f.order, f.aic, CandidateStatus::not_examined, {}, std::move(f)});
    } catch (const std::exception& e) {
      trace.failures.push_back({candidates.orders[i], e.what()});
    }
  }
  if (trace.entries.empty()) {
    std::string msg = "every candidate failed to fit:";
    for (const auto& f : trace.failures) msg += " " + f.order.label() + " (" + f.reason + ");";
    throw NumericError(msg);
  }
  rank_entries(trace.entries);
  return trace;
}

/// Walks the AIC ranking and keeps the first model whose coefficients are all
/// significant at `alpha`.
[[nodiscard]] inline std::pair<ArimaFit, SelectionTrace> select(const TimeSeries& series, const CandidateSet& candidates,
                                                                BoxCoxLambda lambda, double alpha,
                                                                const FitOptions& options = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  SelectionTrace trace = rank_by_aic(series, candidates, lambda, options);
  trace.alpha = alpha;
  std::optional<ArimaFit> chosen;
  for (auto& entry : trace.entries) {
    if (chosen) break;
    if (!entry.fit->covariance) {
      entry.status = CandidateStatus::rejected_insignificant;
      entry.note = "coefficient covariance unavailable";
      continue;
    }
    std::string weak;
    for (const auto& row : coef_test(*entry.fit)) {
      if (!(row.p_value < alpha)) weak += (weak.empty() ? "" : ", ") + row.name;
    }
    if (weak.empty()) {
      entry.status = CandidateStatus::selected;
      chosen = *entry.fit;
    } else {
      entry.status = CandidateStatus::rejected_insignificant;
      entry.note = "not significant: " + weak;
    }
  }
  if (!chosen) {
    std::string msg = "no candidate has all coefficients significant at alpha = " + std::to_string(alpha) + ":";
    for (const auto& e : trace.entries) msg += " " + e.order.label() + " (" + e.note + ");";
    for (const auto& f : trace.failures) msg += " " + f.order.label() + " (fit failed: " + f.reason + ");";
    throw NumericError(msg);
  }
  return {std::move(*chosen), std::move(trace)};
}

}  // namespace boxjenkins
