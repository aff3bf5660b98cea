#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boxjenkins/arma_polynomial.hpp"
#include "boxjenkins/distributions.hpp"
#include "boxjenkins/error.hpp"
#include "boxjenkins/nelder_mead.hpp"
#include "boxjenkins/time_series.hpp"

namespace boxjenkins {

inline constexpr int max_arma_order = 10;

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;

  void validate() const {
    if (p < 0 || d < 0 || q < 0) throw ConfigError("ARIMA orders must be non-negative");
    if (p > max_arma_order || q > max_arma_order) {
      throw ConfigError("ARIMA p and q are limited to " + std::to_string(max_arma_order));
    }
    if (p + d + q < 1) throw ConfigError("ARIMA(0,0,0) is not a fittable model");
  }

  [[nodiscard]] std::string label() const {
    return "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
  }

  auto operator<=>(const ArimaOrder&) const = default;
};

/// Model coefficients in the convention
///   (1 - sum phi_i B^i)(1 - B)^d y_t = delta + (1 + sum theta_j B^j) e_t,
/// i.e. MA terms enter with a plus sign.
struct ArimaParams {
  std::vector<double> phi;
  std::vector<double> theta;
  double delta = 0.0;
  double sigma2 = 1.0;

  /// Mean of the differenced process.
  [[nodiscard]] double mean() const {
    double s = 1.0;
    for (double c : phi) s -= c;
    return delta / s;
  }
};

/// Per-step output of the ARMA Kalman filter. Variances are in units of sigma^2.
struct FilterOutput {
  std::vector<double> predictions;  // E[w_t | w_1..w_{t-1}], mean included
  std::vector<double> innovations;  // w_t - prediction
  std::vector<double> gains;        // Var(innovation) / sigma^2
  Eigen::VectorXd next_state;       // state prediction one step past the data (mean removed)
  Eigen::MatrixXd next_cov;
};

namespace detail {

struct StateSpace {
  Eigen::MatrixXd transition;
  Eigen::VectorXd loading;  // R: how an innovation enters the state
};

inline StateSpace arma_state_space(std::span<const double> phi, std::span<const double> theta) {
  const Eigen::Index r = static_cast<Eigen::Index>(std::max(phi.size(), theta.size() + 1));
  StateSpace ss{Eigen::MatrixXd::Zero(r, r), Eigen::VectorXd::Zero(r)};
  for (std::size_t i = 0; i < phi.size(); ++i) ss.transition(static_cast<Eigen::Index>(i), 0) = phi[i];
  for (Eigen::Index i = 0; i + 1 < r; ++i) ss.transition(i, i + 1) = 1.0;
  ss.loading(0) = 1.0;
  for (std::size_t j = 0; j < theta.size(); ++j) ss.loading(static_cast<Eigen::Index>(j + 1)) = theta[j];
  return ss;
}

/// Solves P = T P T' + R R' (stationary state covariance).
inline Eigen::MatrixXd stationary_covariance(const StateSpace& ss) {
  const Eigen::Index r = ss.transition.rows();
  const Eigen::Index r2 = r * r;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(r2, r2);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      const double tij = ss.transition(i, j);
      if (tij == 0.0) continue;
      lhs.block(i * r, j * r, r, r) -= tij * ss.transition;
    }
  }
  Eigen::MatrixXd rr = ss.loading * ss.loading.transpose();
  Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(rr.data(), r2);
  Eigen::VectorXd sol = lhs.partialPivLu().solve(rhs);
  Eigen::MatrixXd p = Eigen::Map<Eigen::MatrixXd>(sol.data(), r, r);
  return 0.5 * (p + p.transpose());
}

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Runs the exact ARMA Kalman filter over an already differenced series,
/// started from the stationary state distribution.
[[nodiscard]] inline FilterOutput arma_filter(std::span<const double> w, std::span<const double> phi,
                                              std::span<const double> theta, double mean) {
  if (!is_stationary(phi)) throw NumericError("AR parameters are not stationary");
  const auto ss = detail::arma_state_space(phi, theta);
  Eigen::MatrixXd cov = detail::stationary_covariance(ss);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(ss.transition.rows());
  const Eigen::MatrixXd rr = ss.loading * ss.loading.transpose();

  FilterOutput out;
  out.predictions.reserve(w.size());
  out.innovations.reserve(w.size());
  out.gains.reserve(w.size());
  for (double obs : w) {
    const double f = cov(0, 0);
    if (!(f > 0.0) || !std::isfinite(f)) throw NumericError("Kalman filter diverged (non-positive prediction variance)");
    const double v = (obs - mean) - state(0);
    out.predictions.push_back(mean + state(0));
    out.innovations.push_back(v);
    out.gains.push_back(f);
    Eigen::VectorXd k = cov.col(0) / f;
    state += k * v;
    cov -= k * cov.row(0);
    state = ss.transition * state;
    cov = ss.transition * cov * ss.transition.transpose() + rr;
    cov = 0.5 * (cov + cov.transpose());
  }
  out.next_state = std::move(state);
  out.next_cov = std::move(cov);
  return out;
}

/// Exact Gaussian log-likelihood of ARIMA(p,d,q) on a series that is already
/// on the transformed scale. sigma^2 enters explicitly.
[[nodiscard]] inline double exact_loglik(const ArimaParams& params, const ArimaOrder& order, std::span<const double> z) {
  if (params.phi.size() != static_cast<std::size_t>(order.p) || params.theta.size() != static_cast<std::size_t>(order.q)) {
    throw ConfigError("parameter counts do not match " + order.label());
  }
  if (!(params.sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  if (z.size() <= static_cast<std::size_t>(order.d)) throw DataError("series too short for " + order.label());
  const std::vector<double> w = difference(z, order.d);
  const FilterOutput f = arma_filter(w, params.phi, params.theta, params.mean());
  double ll = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    const double var = params.sigma2 * f.gains[t];
    ll -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + f.innovations[t] * f.innovations[t] / var);
  }
  return ll;
}

[[nodiscard]] inline double exact_loglik(const ArimaParams& params, const ArimaOrder& order, const TimeSeries& z) {
  return exact_loglik(params, order, z.values());
}

/// Likelihood maximised over sigma^2 for fixed coefficients.
struct ProfileLikelihood {
  double loglik = 0.0;
  double sigma2 = 0.0;
};

[[nodiscard]] inline ProfileLikelihood profile_loglik(std::span<const double> w, std::span<const double> phi,
                                                      std::span<const double> theta, double mean) {
  const FilterOutput f = arma_filter(w, phi, theta, mean);
  const double n = static_cast<double>(w.size());
  double ssq = 0.0;
  double sumlog = 0.0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    ssq += f.innovations[t] * f.innovations[t] / f.gains[t];
    sumlog += std::log(f.gains[t]);
  }
  const double s2 = ssq / n;
  if (!(s2 > 0.0)) throw NumericError("degenerate fit: zero innovation variance");
  return {-0.5 * n * (std::log(2.0 * std::numbers::pi * s2) + 1.0) - 0.5 * sumlog, s2};
}

/// Conditional sum of squares: pre-sample innovations are zero and the first
/// p differenced observations are conditioned on.
[[nodiscard]] inline double css_objective(const ArimaParams& params, const ArimaOrder& order, std::span<const double> z) {
  if (params.phi.size() != static_cast<std::size_t>(order.p) || params.theta.size() != static_cast<std::size_t>(order.q)) {
    throw ConfigError("parameter counts do not match " + order.label());
  }
  if (z.size() <= static_cast<std::size_t>(order.d)) throw DataError("series too short for " + order.label());
  if (!is_stationary(params.phi)) throw NumericError("AR parameters are not stationary");
  const std::vector<double> w = difference(z, order.d);
  const double mu = params.mean();
  const std::size_t p = params.phi.size();
  const std::size_t q = params.theta.size();
  std::vector<double> e(w.size(), 0.0);
  double ssq = 0.0;
  for (std::size_t t = p; t < w.size(); ++t) {
    double r = w[t] - mu;
    for (std::size_t i = 0; i < p; ++i) r -= params.phi[i] * (w[t - i - 1] - mu);
    for (std::size_t j = 0; j < q && j < t; ++j) r -= params.theta[j] * e[t - j - 1];
    e[t] = r;
    ssq += r * r;
  }
  return ssq;
}

[[nodiscard]] inline double css_objective(const ArimaParams& params, const ArimaOrder& order, const TimeSeries& z) {
  return css_objective(params, order, z.values());
}

struct FitOptions {
  bool include_constant = false;  // only meaningful for d = 0
  NelderMeadOptions optimizer{};
};

struct ArimaFit {
  ArimaOrder order;
  ArimaParams params;
  BoxCoxLambda lambda{0.0};
  bool include_constant = false;
  double loglik = 0.0;  // transformed scale
  double aic = 0.0;
  std::vector<std::string> coefficient_names;
  std::optional<Eigen::MatrixXd> covariance;  // absent when the Hessian was not invertible
  std::vector<double> residuals;              // one per differenced observation
  Period residual_start;
  std::size_t n_used = 0;
  std::size_t evaluations = 0;
  std::vector<std::string> warnings;
  std::string data_fingerprint;

  [[nodiscard]] std::size_t num_coefficients() const { return coefficient_names.size(); }

  [[nodiscard]] std::vector<double> coefficients() const {
    std::vector<double> c(params.phi);
    c.insert(c.end(), params.theta.begin(), params.theta.end());
    if (include_constant) c.push_back(params.delta);
    return c;
  }

  [[nodiscard]] TimeSeries residual_series() const { return TimeSeries(residual_start, residuals); }
};

[[nodiscard]] inline std::string fingerprint(const TimeSeries& series) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int32_t head[2] = {series.start().year, series.start().month};
  h = detail::fnv1a(h, head, sizeof head);
  for (double v : series.values()) h = detail::fnv1a(h, &v, sizeof v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct CoefficientLayout {
  int p = 0;
  int q = 0;
  bool constant = false;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(p + q) + (constant ? 1 : 0); }

  [[nodiscard]] ArimaParams unpack(std::span<const double> x) const {
    ArimaParams out;
    out.phi.assign(x.begin(), x.begin() + p);
    out.theta.assign(x.begin() + p, x.begin() + p + q);
    out.delta = constant ? x[static_cast<std::size_t>(p + q)] : 0.0;
    return out;
  }

  [[nodiscard]] bool feasible(const ArimaParams& a) const { return is_stationary(a.phi) && is_invertible(a.theta); }

  [[nodiscard]] std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (int i = 1; i <= p; ++i) n.push_back("ar" + std::to_string(i));
    for (int j = 1; j <= q; ++j) n.push_back("ma" + std::to_string(j));
    if (constant) n.push_back("delta");
    return n;
  }
};

inline double negative_profile(const CoefficientLayout& layout, std::span<const double> w, std::span<const double> x) {
  const ArimaParams a = layout.unpack(x);
  if (!layout.feasible(a)) return std::numeric_limits<double>::infinity();
  try {
    return -profile_loglik(w, a.phi, a.theta, a.mean()).loglik;
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Central-difference Hessian with steps 1e-4 * max(1, |x_i|).
template <class F>
std::optional<Eigen::MatrixXd> numeric_hessian(F&& f, std::span<const double> x0) {
  const std::size_t k = x0.size();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::vector<double> step(k);
  for (std::size_t i = 0; i < k; ++i) step[i] = 1e-4 * std::max(1.0, std::abs(x0[i]));
  std::vector<double> x(x0.begin(), x0.end());
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    x.assign(x0.begin(), x0.end());
    x[i] += di;
    x[j] += dj;
    return f(std::span<const double>(x));
  };
  const double f0 = f(x0);
  for (std::size_t i = 0; i < k; ++i) {
    const double fp = at(i, step[i], i, 0.0);
    const double fm = at(i, -step[i], i, 0.0);
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double fpp = at(i, step[i], j, step[j]);
      const double fpm = at(i, step[i], j, -step[j]);
      const double fmp = at(i, -step[i], j, step[j]);
      const double fmm = at(i, -step[i], j, -step[j]);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  if (!h.allFinite()) return std::nullopt;
  return h;
}

}  // namespace detail

/// Maximum-likelihood fit of ARIMA(p,d,q) to a series on its original scale.
/// The Box-Cox transform is applied internally; the likelihood, AIC and
/// residuals all live on the transformed scale.
[[nodiscard]] inline ArimaFit fit(const TimeSeries& series, const ArimaOrder& order, BoxCoxLambda lambda,
                                  const FitOptions& options = {}) {
  order.validate();
  if (options.include_constant && order.d > 0) {
    throw ConfigError("a constant term can only be estimated when d = 0");
  }
  const std::vector<double> z = box_cox(series.values(), lambda);
  if (z.size() <= static_cast<std::size_t>(order.d) ||
      static_cast<long>(z.size()) - order.d <= order.p + order.q + 5) {
    throw DataError(order.label() + " needs more than " + std::to_string(order.p + order.q + 5 + order.d) +
                    " observations, got " + std::to_string(z.size()));
  }
  const std::vector<double> w = difference(z, order.d);
  const detail::CoefficientLayout layout{order.p, order.q, options.include_constant};
  const std::size_t k = layout.size();

  double w_mean = 0.0;
  for (double v : w) w_mean += v;
  w_mean /= static_cast<double>(w.size());

  ArimaFit out;
  out.order = order;
  out.lambda = lambda;
  out.include_constant = options.include_constant;
  out.coefficient_names = layout.names();
  out.n_used = w.size();
  out.residual_start = series.start().plus_months(order.d);
  out.data_fingerprint = fingerprint(series);

  std::vector<double> start(k, 0.0);
  if (options.include_constant) start.back() = w_mean;

  std::vector<double> best = start;
  if (k > 0) {
    // Conditional sum of squares for starting values.
    auto css = [&](const std::vector<double>& x) {
      const ArimaParams a = layout.unpack(x);
      if (!layout.feasible(a)) return std::numeric_limits<double>::infinity();
      return css_objective(a, ArimaOrder{order.p, 0, order.q}, w);
    };
    NelderMeadResult css_fit = nelder_mead(css, start, options.optimizer);
    out.evaluations += css_fit.evaluations;
    if (std::isfinite(css_fit.value) && layout.feasible(layout.unpack(css_fit.x))) best = css_fit.x;

    auto objective = [&](const std::vector<double>& x) { return detail::negative_profile(layout, w, x); };
    // Maximise from the CSS estimates and from the origin; keep the better optimum.
    std::vector<std::vector<double>> starts{best};
    if (best != start) starts.push_back(start);
    std::optional<NelderMeadResult> winner;
    for (const auto& from : starts) {
      if (!std::isfinite(objective(from))) continue;
      NelderMeadResult ml = nelder_mead(objective, from, options.optimizer);
      out.evaluations += ml.evaluations;
      // A restart from the optimum guards against a collapsed simplex.
      NelderMeadOptions polish = options.optimizer;
      polish.initial_step = 0.01;
      polish.max_evaluations = options.optimizer.max_evaluations > ml.evaluations
                                   ? options.optimizer.max_evaluations - ml.evaluations
                                   : 0;
      NelderMeadResult polished = nelder_mead(objective, ml.x, polish);
      out.evaluations += polished.evaluations;
      if (!ml.converged || !polished.converged || !std::isfinite(polished.value)) continue;
      if (polished.value > ml.value) polished = ml;
      if (!winner || polished.value < winner->value) winner = std::move(polished);
    }
    if (!winner) {
      throw NumericError("optimizer did not converge for " + order.label() + " within " +
                         std::to_string(options.optimizer.max_evaluations) + " evaluations");
    }
    best = winner->x;
  }

  ArimaParams params = layout.unpack(best);
  if (!layout.feasible(params)) {
    throw NumericError("stationarity or invertibility violated at the optimum of " + order.label());
  }
  const ProfileLikelihood prof = profile_loglik(w, params.phi, params.theta, params.mean());
  params.sigma2 = prof.sigma2;
  out.params = params;
  out.loglik = prof.loglik;
  out.aic = -2.0 * out.loglik + 2.0 * static_cast<double>(k + 1);
  if (max_ma_reflection(params.theta) > 0.999) {
    out.warnings.push_back("MA polynomial has a root on or near the unit circle");
  }

  if (k > 0) {
    auto negll = [&](std::span<const double> x) { return detail::negative_profile(layout, w, x); };
    auto hessian = detail::numeric_hessian(negll, best);
    if (hessian) {
      Eigen::LLT<Eigen::MatrixXd> llt(*hessian);
      if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(hessian->rows(), hessian->cols()));
        out.covariance = 0.5 * (cov + cov.transpose());
      }
    }
    if (!out.covariance) out.warnings.push_back("Hessian is not positive definite; covariance unavailable");
  } else {
    out.covariance = Eigen::MatrixXd(0, 0);
  }

  const FilterOutput f = arma_filter(w, params.phi, params.theta, params.mean());
  out.residuals.resize(w.size());
  for (std::size_t t = 0; t < w.size(); ++t) out.residuals[t] = f.innovations[t] / std::sqrt(f.gains[t]);
  return out;
}

struct CoefficientRow {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p_value = 1.0;
};

/// Wald z tests for each coefficient from the Hessian-based covariance.
[[nodiscard]] inline std::vector<CoefficientRow> coef_test(const ArimaFit& fit) {
  if (!fit.covariance) throw NumericError("coefficient covariance unavailable for " + fit.order.label());
  const std::vector<double> est = fit.coefficients();
  std::vector<CoefficientRow> rows;
  for (std::size_t i = 0; i < est.size(); ++i) {
    CoefficientRow r;
    r.name = fit.coefficient_names[i];
    r.estimate = est[i];
    const double var = (*fit.covariance)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    r.std_error = var > 0.0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
    if (r.estimate == 0.0) {
      r.z = 0.0;
      r.p_value = 1.0;
    } else {
      r.z = r.estimate / r.std_error;
      r.p_value = std::isfinite(r.z) ? dist::two_sided_p(r.z) : 1.0;
    }
    rows.push_back(r);
  }
  return rows;
}

/// Fitted values on the original scale: back-transformed one-step predictions
/// of the transformed series. One per residual.
[[nodiscard]] inline std::vector<double> fitted_values(const ArimaFit& fit, const TimeSeries& series) {
  const std::vector<double> z = box_cox(series.values(), fit.lambda);
  const auto d = static_cast<std::size_t>(fit.order.d);
  if (z.size() != fit.residuals.size() + d) throw DataError("series does not match the fitted data");
  const std::vector<double> w = difference(z, fit.order.d);
  const FilterOutput f = arma_filter(w, fit.params.phi, fit.params.theta, fit.params.mean());
  const std::vector<double> diff_poly = integrated_ar_polynomial({}, fit.order.d);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double zhat = f.predictions[i];
    for (std::size_t j = 1; j < diff_poly.size(); ++j) zhat -= diff_poly[j] * z[i + d - j];
    out[i] = inv_box_cox_value(zhat, fit.lambda);
  }
  return out;
}

}  // namespace boxjenkins
