#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace boxjenkins {

/// Step-down (Schur-Cohn) reduction of the polynomial 1 - sum c_i z^i.
/// Returns the reflection coefficients; all roots lie strictly outside the
/// unit circle iff every coefficient has magnitude below one.
[[nodiscard]] inline std::vector<double> reflection_coefficients(std::span<const double> c) {
  std::vector<double> a(c.begin(), c.end());
  std::vector<double> kappas(a.size());
  for (std::size_t k = a.size(); k > 0; --k) {
    const double kappa = a[k - 1];
    kappas[k - 1] = kappa;
    if (!(std::abs(kappa) < 1.0)) {
      for (std::size_t j = 0; j + 1 < k; ++j) kappas[j] = 0.0;
      break;
    }
    const double scale = 1.0 - kappa * kappa;
    std::vector<double> lower(k - 1);
    for (std::size_t j = 1; j < k; ++j) lower[j - 1] = (a[j - 1] + kappa * a[k - j - 1]) / scale;
    a = std::move(lower);
  }
  return kappas;
}

/// 1 - sum phi_i z^i has all roots strictly outside the unit circle.
[[nodiscard]] inline bool is_stationary(std::span<const double> phi) {
  for (double k : reflection_coefficients(phi)) {
    if (!(std::abs(k) < 1.0)) return false;
  }
  return true;
}

/// 1 + sum theta_j z^j has all roots strictly outside the unit circle.
[[nodiscard]] inline bool is_invertible(std::span<const double> theta) {
  std::vector<double> negated(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) negated[j] = -theta[j];
  return is_stationary(negated);
}

/// Largest |reflection coefficient| of 1 + sum theta_j z^j; values near 1
/// mean an MA root close to the unit circle.
[[nodiscard]] inline double max_ma_reflection(std::span<const double> theta) {
  std::vector<double> negated(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) negated[j] = -theta[j];
  double m = 0.0;
  for (double k : reflection_coefficients(negated)) m = std::max(m, std::abs(k));
  return m;
}

/// Product of two polynomials given by coefficient vectors (index = power).
[[nodiscard]] inline std::vector<double> poly_multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Full coefficient vector of Phi(B)(1-B)^d = 1 - phi_1 B - ... times (1-B)^d.
[[nodiscard]] inline std::vector<double> integrated_ar_polynomial(std::span<const double> phi, int d) {
  std::vector<double> poly{1.0};
  for (double c : phi) poly.push_back(-c);
  const std::vector<double> one_minus_b{1.0, -1.0};
  for (int i = 0; i < d; ++i) poly = poly_multiply(poly, one_minus_b);
  return poly;
}

}  // namespace boxjenkins
