#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "qhatm/frac_series.hpp"
#include "qhatm/problem_spec.hpp"

namespace qhatm {

/// Schedule multiplying the previous iterate: 0 for m <= 1, n afterwards.
constexpr int k_m(int m, int n) noexcept { return m <= 1 ? 0 : n; }

/// Linear part of the bracket plus, optionally, the source:
///   sum_i c_i D^{order_i} v + M v (+ source).
inline FracSeries bracket(const FracSeries& v, const ProblemSpec& spec, const QhatmParams& params,
                          bool with_source) {
  if (!v.same_catalog(spec.source)) throw CatalogMismatch();
  FracSeries out = apply_matrix(v, spec.bracket_matrix);
  for (const auto& lt : spec.lower_terms) {
    out = out + scale(caputo(v, lt.order, params.gamma), lt.coeff);
  }
  if (with_source) out = out + spec.source;
  return out;
}

/// One step of the m-th order deformation equation in the evolution domain:
///   v_m = k_m v_{m-1} + h [ v_{m-1} + J(lin(v_{m-1})) + (1 - k_m/n)(J(source) - u0) ]
/// with J the Riemann-Liouville integral of the leading order.
inline FracSeries deformation_step(const FracSeries& v_prev, int m, const ProblemSpec& spec,
                                   const QhatmParams& params) {
  if (m < 1) throw ParamError("deformation step index must be at least 1");
  const int k = k_m(m, params.n);
  const double data_weight = 1.0 - static_cast<double>(k) / static_cast<double>(params.n);

  FracSeries inner = v_prev + rl_integral(bracket(v_prev, spec, params, false), spec.leading_order, params.gamma);
  if (data_weight != 0.0) {
    FracSeries data = spec.initial_guess;
    if (!spec.source.is_zero()) {
      data = data - rl_integral(spec.source, spec.leading_order, params.gamma);
    }
    inner = inner - scale(data, data_weight);
  }
  return scale(v_prev, static_cast<double>(k)) + scale(inner, params.h);
}

/// Sum of v_m (1/n)^m.
inline FracSeries assemble(std::span<const FracSeries> iterates, int n) {
  if (n < 1) throw ParamError("n must be at least 1");
  if (iterates.empty()) throw Error("assemble: no iterates");
  FracSeries out = iterates.front();
  double weight = 1.0;
  for (std::size_t m = 1; m < iterates.size(); ++m) {
    weight /= static_cast<double>(n);
    out = out + scale(iterates[m], weight);
  }
  return out;
}

struct Solution {
  std::vector<FracSeries> iterates;
  FracSeries assembled;
  QhatmParams params;
};

inline Solution solve(const ProblemSpec& spec, const QhatmParams& params) {
  params.validate(spec);
  Solution sol;
  sol.params = params;
  sol.iterates.reserve(static_cast<std::size_t>(params.order) + 1);
  sol.iterates.push_back(spec.initial_guess);
  for (int m = 1; m <= params.order; ++m) {
    sol.iterates.push_back(deformation_step(sol.iterates.back(), m, spec, params));
  }
  sol.assembled = assemble(sol.iterates, params.n);
  return sol;
}

/// Substitutes v into the equation: D^{leading} v + bracket(v) with source.
inline FracSeries residual_series(const FracSeries& v, const ProblemSpec& spec, const QhatmParams& params) {
  return caputo(v, spec.leading_order, params.gamma) + bracket(v, spec, params, true);
}

}  // namespace qhatm
