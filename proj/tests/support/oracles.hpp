#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the library's Gamma implementation or its series operators; Gamma values
// come from std::tgamma and closed forms are written out by hand.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "qhatm/frac_series.hpp"
#include "qhatm/problem_spec.hpp"

namespace qhatm {

// Readable failure output for GoogleTest.
inline void PrintTo(const FracSeries& s, std::ostream* os) {
  *os << "{";
  for (const auto& t : s.terms()) {
    *os << " " << t.coeff << "*z^" << to_string(t.exponent) << "*" << s.catalog()->id(t.factor) << ";";
  }
  *os << " }";
}

}  // namespace qhatm

namespace qhatm::testing {

inline double factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return static_cast<double>(f);
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// sum_{k=0}^{K} (rate z)^k / k!
inline double taylor_exp(double rate, double z, int K) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 0; k <= K; ++k) {
    sum += term;
    term *= rate * z / static_cast<double>(k + 1);
  }
  return sum;
}

/// (1/Gamma(a)) * int_0^t (t-s)^(a-1) f(s) ds via the substitution
/// u = (t-s)^a, which removes the endpoint singularity, and composite Simpson.
inline double rl_integral_quadrature(const std::function<double(double)>& f, double a, double t, int panels = 4000) {
  const double umax = std::pow(t, a);
  const double h = umax / panels;
  auto g = [&](double u) { return f(t - std::pow(u, 1.0 / a)); };
  double sum = g(0.0) + g(umax);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(i * h);
  return sum * h / 3.0 / (a * std::tgamma(a));
}

/// Central finite difference.
inline double central_difference(const std::function<double(double)>& f, double z, double step = 1e-5) {
  return (f(z + step) - f(z - step)) / (2.0 * step);
}

/// Random series over a catalog with p in [p_min, p_max], q in [0, q_max].
inline FracSeries random_series(std::mt19937_64& rng, const std::shared_ptr<const FactorCatalog>& catalog,
                                int max_terms, int p_min, int p_max, int q_max) {
  std::uniform_int_distribution<int> count(1, max_terms);
  std::uniform_int_distribution<int> p(p_min, p_max);
  std::uniform_int_distribution<int> q(0, q_max);
  std::uniform_int_distribution<std::size_t> f(0, catalog->size() - 1);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::vector<Term> terms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) terms.push_back({c(rng), {p(rng), q(rng)}, f(rng)});
  return FracSeries(catalog, std::move(terms));
}

// ---------------------------------------------------------------------------
// Hand-written closed forms of the first three iterates of each reference
// problem, as functions of (gamma, h, n). Each term is coeff * z^(p + q gamma)
// on the single factor of the problem (ex43 lives on the constant factor).

struct ClosedTerm {
  double coeff;
  int p;
  int q;
  std::size_t factor;
};

inline FracSeries closed_form(const std::shared_ptr<const FactorCatalog>& catalog, const std::vector<ClosedTerm>& ts) {
  std::vector<Term> terms;
  for (const auto& t : ts) terms.push_back({t.coeff, {t.p, t.q}, t.factor});
  return FracSeries(catalog, std::move(terms));
}

/// Time-fractional family with damping c and initial slope -c:
///   v1 = -c^2 h t^(a+1)/G(a+2)
///   v2 = -c^2 h(n+h) t^(a+1)/G(a+2) - c^3 h^2 t^(2a+1)/G(2a+2)
///   v3 = -c^2 h(n+h)^2 .../G(a+2) - 2 c^3 h^2 (n+h) .../G(2a+2) - c^4 h^3 t^(3a+1)/G(3a+2)
/// For c = 2 this is (-4, -8, -16) and for c = 3 it is (-9, -27, -81).
inline std::vector<FracSeries> time_family_iterates(const std::shared_ptr<const FactorCatalog>& cat, double c,
                                                    double a, double h, double n) {
  const double g1 = std::tgamma(a + 2.0);
  const double g2 = std::tgamma(2.0 * a + 2.0);
  const double g3 = std::tgamma(3.0 * a + 2.0);
  const double c2 = c * c, c3 = c2 * c, c4 = c3 * c;
  return {
      closed_form(cat, {{-c2 * h / g1, 1, 1, 0}}),
      closed_form(cat, {{-c2 * h * (n + h) / g1, 1, 1, 0}, {-c3 * h * h / g2, 1, 2, 0}}),
      closed_form(cat, {{-c2 * h * (n + h) * (n + h) / g1, 1, 1, 0},
                        {-2.0 * c3 * h * h * (n + h) / g2, 1, 2, 0},
                        {-c4 * h * h * h / g3, 1, 3, 0}}),
  };
}

/// Space-fractional problem with e^-t data:
///   v_m contains -h(n+h)^.. e^-t [x^(kb)/G(kb+1) + x^(kb+1)/G(kb+2)] blocks.
inline std::vector<FracSeries> ex42_iterates(const std::shared_ptr<const FactorCatalog>& cat, double b, double h,
                                             double n) {
  auto block = [&](double w, int k) {
    return std::vector<ClosedTerm>{{w / std::tgamma(k * b + 1.0), 0, k, 0}, {w / std::tgamma(k * b + 2.0), 1, k, 0}};
  };
  auto join = [](std::vector<ClosedTerm> a, const std::vector<ClosedTerm>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const double s = n + h;
  return {
      closed_form(cat, block(-h, 1)),
      closed_form(cat, join(block(-h * s, 1), block(h * h, 2))),
      closed_form(cat, join(join(block(-h * s * s, 1), block(2.0 * h * h * s, 2)), block(-h * h * h, 3))),
  };
}

/// Non-homogeneous space-fractional problem (factor index 0 is the constant):
///   v1 = -2h x^(2b)/G(2b+1) + 2h x^(2b+2)/G(2b+3), and so on.
inline std::vector<FracSeries> ex43_iterates(const std::shared_ptr<const FactorCatalog>& cat, double b, double h,
                                             double n) {
  auto block = [&](double w, int k) {
    // w * [ -x^(2kb)/G(2kb+1) + x^(2kb+2)/G(2kb+3) ]
    return std::vector<ClosedTerm>{{-w / std::tgamma(2.0 * k * b + 1.0), 0, 2 * k, 0},
                                   {w / std::tgamma(2.0 * k * b + 3.0), 2, 2 * k, 0}};
  };
  auto join = [](std::vector<ClosedTerm> a, const std::vector<ClosedTerm>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const double s = n + h;
  return {
      closed_form(cat, block(2.0 * h, 1)),
      closed_form(cat, join(block(2.0 * h * s, 1), block(-2.0 * h * h, 2))),
      closed_form(cat, join(join(block(2.0 * h * s * s, 1), block(-4.0 * h * h * s, 2)), block(2.0 * h * h * h, 3))),
  };
}

/// Iterates v1..v3 for a built-in problem by name.
inline std::vector<FracSeries> printed_iterates(const ProblemSpec& spec, double g, double h, double n) {
  if (spec.name == "ex41" || spec.name == "ex45") return time_family_iterates(spec.catalog, 2.0, g, h, n);
  if (spec.name == "ex44") return time_family_iterates(spec.catalog, 3.0, g, h, n);
  if (spec.name == "ex42") return ex42_iterates(spec.catalog, g, h, n);
  return ex43_iterates(spec.catalog, g, h, n);
}

}  // namespace qhatm::testing
