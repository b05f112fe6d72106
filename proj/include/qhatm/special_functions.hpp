#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "qhatm/errors.hpp"

namespace qhatm {

namespace detail {

// Lanczos approximation, g = 7, nine coefficients. Valid for x >= 0.5;
// smaller positive arguments are shifted up by one with the recurrence.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double xm1) {
  double sum = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    sum += kLanczosCoeffs[k] / (xm1 + static_cast<double>(k));
  }
  return sum;
}

inline void check_gamma_domain(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw GammaDomainError(x);
  }
}

}  // namespace detail

/// ln Gamma(x) for x > 0. Throws GammaDomainError otherwise.
inline double ln_gamma(double x) {
  detail::check_gamma_domain(x);
  if (x < 0.5) {
    return ln_gamma(x + 1.0) - std::log(x);
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
  return half_log_two_pi + (xm1 + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_sum(xm1));
}

/// Gamma(x) for x > 0. Negative arguments are rejected rather than reflected.
inline double gamma(double x) {
  detail::check_gamma_domain(x);
  // Integer arguments return the factorial exactly.
  if (x <= 171.0 && x == std::floor(x)) {
    double f = 1.0;
    for (double k = 2.0; k < x; k += 1.0) f *= k;
    return f;
  }
  if (x < 0.5) {
    return gamma(x + 1.0) / x;
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  // Split the power so t^(x-0.5) does not overflow before e^-t is applied.
  const double half_power = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) *
         detail::lanczos_sum(xm1);
}

/// Gamma(a) / Gamma(b), switching to log space once either argument exceeds 30.
inline double gamma_ratio(double a, double b) {
  if (a > 30.0 || b > 30.0) {
    return std::exp(ln_gamma(a) - ln_gamma(b));
  }
  return gamma(a) / gamma(b);
}

}  // namespace qhatm
