#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qhatm/engine.hpp"
#include "qhatm/errors.hpp"
#include "qhatm/frac_series.hpp"
#include "qhatm/problem_library.hpp"
#include "qhatm/problem_spec.hpp"

namespace qhatm {

/// Samples with |value| above this are flagged divergent.
inline constexpr double kDivergenceThreshold = 1e12;

/// Evaluates a series at a point that carries the evolution variable too.
inline double evaluate_at(const FracSeries& s, const ProblemSpec& spec, double gamma_num, const Point& point) {
  return evaluate(s, coordinate(point, spec.evolution_var), gamma_num, point);
}

// ---------------------------------------------------------------------------
// h-curves

struct CurvePoint {
  double h = 0.0;
  double value = 0.0;
  bool divergent = false;
};

inline std::vector<CurvePoint> h_curve(const ProblemSpec& spec, double gamma_num, int n, int order,
                                       const Point& point, double h_min, double h_max, int steps) {
  if (steps < 2) throw ParamError("h-curve needs at least 2 steps");
  if (!(h_min < h_max)) throw ParamError("h-curve needs h_min < h_max");
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double h = (i == steps - 1) ? h_max : h_min + (h_max - h_min) * i / (steps - 1);
    const Solution sol = solve(spec, {gamma_num, h, n, order});
    const double value = evaluate_at(sol.assembled, spec, gamma_num, point);
    const bool divergent = !std::isfinite(value) || std::abs(value) > kDivergenceThreshold;
    curve.push_back({h, divergent ? 0.0 : value, divergent});
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Grids

/// Uniform closed range start:stop:step along one named variable.
struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const {
    if (!(step > 0.0) || stop < start) {
      throw ParamError("axis '" + name + "' needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
};

using GridSpec = std::vector<Axis>;

/// Variables a problem's points carry, coordinates first, evolution last.
inline std::vector<std::string> point_variables(const ProblemSpec& spec) {
  std::vector<std::string> vars = spec.coordinates;
  vars.push_back(spec.evolution_var);
  return vars;
}

/// Cartesian product of the grid ordered by point_variables, last varying fastest.
inline std::vector<Point> grid_points(const ProblemSpec& spec, const GridSpec& grid) {
  const auto vars = point_variables(spec);
  std::vector<std::vector<double>> axes;
  for (const auto& var : vars) {
    auto it = std::find_if(grid.begin(), grid.end(), [&](const Axis& a) { return a.name == var; });
    if (it == grid.end()) throw ParamError("grid is missing variable '" + var + "'");
    axes.push_back(it->values());
  }
  for (const auto& axis : grid) {
    if (std::find(vars.begin(), vars.end(), axis.name) == vars.end()) {
      throw ParamError("grid variable '" + axis.name + "' is not used by problem '" + spec.name + "'");
    }
  }
  std::vector<Point> points;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Point p;
    for (std::size_t k = 0; k < vars.size(); ++k) p[vars[k]] = axes[k][idx[k]];
    points.push_back(std::move(p));
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
      if (k == 0) return points;
    }
  }
}

// ---------------------------------------------------------------------------
// Error grids

struct ErrorRecord {
  Point point;
  double approx = 0.0;
  double exact = 0.0;
  double abs_err = 0.0;
};

inline void require_exact_valid(const ProblemSpec& spec, double gamma_num) {
  if (!spec.exact) throw SpecError("problem '" + spec.name + "' has no exact solution");
  const auto& info = exact_info(*spec.exact);
  if (std::abs(gamma_num - info.classical_gamma) > 1e-12) {
    throw ParamError("exact solution " + std::string(info.description) + " holds only at order " +
                     std::to_string(info.classical_gamma));
  }
}

inline std::vector<ErrorRecord> error_grid(const ProblemSpec& spec, const QhatmParams& params, const GridSpec& grid) {
  require_exact_valid(spec, params.gamma);
  const Solution sol = solve(spec, params);
  std::vector<ErrorRecord> records;
  for (auto& p : grid_points(spec, grid)) {
    const double approx = evaluate_at(sol.assembled, spec, params.gamma, p);
    const double exact = evaluate_exact(*spec.exact, p);
    records.push_back({std::move(p), approx, exact, std::abs(approx - exact)});
  }
  return records;
}

// ---------------------------------------------------------------------------
// Residuals

struct ResidualRecord {
  Point point;
  double residual = 0.0;
};

inline std::vector<ResidualRecord> residual_sweep(const ProblemSpec& spec, const QhatmParams& params,
                                                  const std::vector<Point>& points) {
  const Solution sol = solve(spec, params);
  const FracSeries res = residual_series(sol.assembled, spec, params);
  std::vector<ResidualRecord> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p, std::abs(evaluate_at(res, spec, params.gamma, p))});
  return out;
}

// ---------------------------------------------------------------------------
// Taylor references

/// First K+1 Taylor coefficients, in the evolution variable, of the exact
/// solution's evolution factor. Only separable exponential forms qualify.
inline std::vector<double> taylor_coeffs(const ProblemSpec& spec, int K) {
  if (!spec.exact) throw SpecError("problem '" + spec.name + "' has no exact solution");
  if (K < 0) throw ParamError("Taylor degree must be non-negative");
  const auto& info = exact_info(*spec.exact);
  if (!info.exp_rate) {
    throw SpecError("exact solution " + std::string(info.description) + " is not a separable exponential");
  }
  std::vector<double> coeffs;
  double c = 1.0;
  for (int k = 0; k <= K; ++k) {
    coeffs.push_back(c);
    c *= *info.exp_rate / static_cast<double>(k + 1);
  }
  return coeffs;
}

/// Taylor polynomial of the exact solution through evolution degree K, as a
/// series over the problem's catalog with integer exponents.
inline FracSeries taylor_series(const ProblemSpec& spec, int K) {
  if (!spec.exact) throw SpecError("problem '" + spec.name + "' has no exact solution");
  const auto& info = exact_info(*spec.exact);
  std::vector<Term> terms;
  if (info.exp_rate) {
    auto idx = spec.catalog->index_of(factor_info(info.factor).id);
    if (!idx) throw SpecError("exact solution factor is not in the problem's catalog");
    const auto coeffs = taylor_coeffs(spec, K);
    for (int k = 0; k <= K; ++k) terms.push_back({coeffs[static_cast<std::size_t>(k)], {k, 0}, *idx});
  } else {
    // t + x^2 expanded in x: x^0 carries the factor t, x^2 the constant 1.
    auto one = spec.catalog->index_of("one");
    auto t = spec.catalog->index_of("t");
    if (!one || !t || spec.evolution_var != "x") throw SpecError("t + x^2 needs evolution x over {one, t}");
    if (K >= 0) terms.push_back({1.0, {0, 0}, *t});
    if (K >= 2) terms.push_back({1.0, {2, 0}, *one});
  }
  return FracSeries(spec.catalog, std::move(terms));
}

// ---------------------------------------------------------------------------
// Comparison table for the 3D problem

struct TableRow {
  double xyz = 0.0;
  double t = 0.0;
  double qhatm = 0.0;
  double exact = 0.0;
  double abs_err = 0.0;
  double paper_qhatm = 0.0;
  double paper_exact = 0.0;
};

struct PublishedRow {
  double xyz, t, qhatm, exact;
};

/// Published reference values at alpha = 1, h = -1, n = 1, third order.
inline const std::array<PublishedRow, 16>& published_table_ex45() {
  static const std::array<PublishedRow, 16> rows = {{
      {0.25, 0.25, 0.0097769, 0.0097772},
      {0.50, 0.25, 0.0858202, 0.0858231},
      {0.75, 0.25, 0.3372527, 0.3372641},
      {1.00, 0.25, 0.9844075, 0.9844404},
      {0.25, 0.50, 0.00591, 0.00593},
      {0.50, 0.50, 0.05188, 0.05205},
      {0.75, 0.50, 0.20388, 0.20456},
      {1.00, 0.50, 0.59512, 0.59709},
      {0.25, 0.75, 0.00338, 0.00359},
      {0.50, 0.75, 0.02973, 0.03157},
      {0.75, 0.75, 0.11685, 0.12407},
      {1.00, 0.75, 0.34109, 0.36215},
      {0.25, 1.00, 0.00217, 0.002181},
      {0.50, 1.00, 0.01912, 0.019149},
      {0.75, 1.00, 0.07512, 0.07525},
      {1.00, 1.00, 0.21927, 0.21965},
  }};
  return rows;
}

inline std::vector<TableRow> table_ex45(int order) {
  if (order < 3) throw ParamError("table order must be at least 3");
  const ProblemSpec spec = builtin("ex45");
  const QhatmParams params{1.0, -1.0, 1, order};
  const Solution sol = solve(spec, params);
  std::vector<TableRow> rows;
  for (const auto& pub : published_table_ex45()) {
    const Point p{{"x", pub.xyz}, {"y", pub.xyz}, {"z", pub.xyz}, {"t", pub.t}};
    const double approx = evaluate_at(sol.assembled, spec, params.gamma, p);
    const double exact = evaluate_exact(*spec.exact, p);
    rows.push_back({pub.xyz, pub.t, approx, exact, std::abs(approx - exact), pub.qhatm, pub.exact});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV emission

/// Round-trip decimal with 17 significant digits.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_hcurve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "h,value,divergent\n";
  for (const auto& c : curve) {
    os << format_number(c.h) << ',' << (c.divergent ? std::string("nan") : format_number(c.value)) << ','
       << (c.divergent ? 1 : 0) << '\n';
  }
}

inline void write_error_grid_csv(std::ostream& os, const ProblemSpec& spec, const std::vector<ErrorRecord>& records) {
  const auto vars = point_variables(spec);
  for (const auto& v : vars) os << v << ',';
  os << "approx,exact,abs_err\n";
  for (const auto& r : records) {
    for (const auto& v : vars) os << format_number(coordinate(r.point, v)) << ',';
    os << format_number(r.approx) << ',' << format_number(r.exact) << ',' << format_number(r.abs_err) << '\n';
  }
}

inline void write_residual_csv(std::ostream& os, const ProblemSpec& spec, const std::vector<ResidualRecord>& records) {
  const auto vars = point_variables(spec);
  for (const auto& v : vars) os << v << ',';
  os << "residual\n";
  for (const auto& r : records) {
    for (const auto& v : vars) os << format_number(coordinate(r.point, v)) << ',';
    os << format_number(r.residual) << '\n';
  }
}

inline void write_table45_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "xyz,t,qhatm,exact,abs_err,paper_qhatm,paper_exact\n";
  for (const auto& r : rows) {
    os << format_number(r.xyz) << ',' << format_number(r.t) << ',' << format_number(r.qhatm) << ','
       << format_number(r.exact) << ',' << format_number(r.abs_err) << ',' << format_number(r.paper_qhatm) << ','
       << format_number(r.paper_exact) << '\n';
  }
}

}  // namespace qhatm
