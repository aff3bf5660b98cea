#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "boxjenkins/time_series.hpp"

#ifndef BOXJENKINS_FIRE_CSV
#error "BOXJENKINS_FIRE_CSV must point at the bundled dataset"
#endif

namespace bjtest {

inline constexpr const char* fire_csv = BOXJENKINS_FIRE_CSV;

/// ARMA(p,q) sample path, plus-MA convention, after `burn` discarded steps.
inline std::vector<double> simulate_arma(const std::vector<double>& phi, const std::vector<double>& theta, std::size_t n,
                                         unsigned seed, double sigma = 1.0, std::size_t burn = 200) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> eps(0.0, sigma);
  std::vector<double> x(n + burn, 0.0);
  std::vector<double> e(n + burn, 0.0);
  for (std::size_t t = 0; t < n + burn; ++t) {
    e[t] = eps(rng);
    double v = e[t];
    for (std::size_t i = 0; i < phi.size() && i < t; ++i) v += phi[i] * x[t - 1 - i];
    for (std::size_t j = 0; j < theta.size() && j < t; ++j) v += theta[j] * e[t - 1 - j];
    x[t] = v;
  }
  return {x.begin() + static_cast<long>(burn), x.end()};
}

inline std::vector<double> white_noise(std::size_t n, unsigned seed) { return simulate_arma({}, {}, n, seed, 1.0, 0); }

inline std::vector<double> random_walk(std::size_t n, unsigned seed) {
  auto e = white_noise(n, seed);
  for (std::size_t t = 1; t < n; ++t) e[t] += e[t - 1];
  return e;
}

inline boxjenkins::TimeSeries monthly(std::vector<double> v, boxjenkins::Period start = {2000, 1}) {
  return boxjenkins::TimeSeries(start, std::move(v));
}

/// AR coefficients from partial autocorrelations (Levinson step-up); any
/// |k| < 1 gives a stationary polynomial.
inline std::vector<double> ar_from_reflections(const std::vector<double>& k) {
  std::vector<double> a;
  for (double kappa : k) {
    std::vector<double> next(a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i) next[i] = a[i] - kappa * a[a.size() - 1 - i];
    next[a.size()] = kappa;
    a = next;
  }
  return a;
}

/// Log-density of w under a stationary ARMA with mean mu, built from the dense
/// autocovariance matrix gamma(h) = sigma2 * sum_j psi_j psi_{j+h}.
inline double dense_arma_loglik(const std::vector<double>& phi, const std::vector<double>& theta, double mu,
                                double sigma2, const std::vector<double>& w, std::size_t terms = 3000) {
  std::vector<double> psi(terms, 0.0);
  for (std::size_t j = 0; j < terms; ++j) {
    double v = j == 0 ? 1.0 : (j <= theta.size() ? theta[j - 1] : 0.0);
    for (std::size_t i = 0; i < phi.size() && i < j; ++i) v += phi[i] * psi[j - 1 - i];
    psi[j] = v;
  }
  const auto n = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto h = static_cast<std::size_t>(std::abs(i - k));
      double g = 0.0;
      for (std::size_t j = 0; j + h < terms; ++j) g += psi[j] * psi[j + h];
      cov(i, k) = sigma2 * g;
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = w[static_cast<std::size_t>(i)] - mu;
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd sol = llt.solve(x);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet + x.dot(sol));
}

}  // namespace bjtest
