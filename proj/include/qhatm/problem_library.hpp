#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhatm/engine.hpp"
#include "qhatm/errors.hpp"
#include "qhatm/factors.hpp"
#include "qhatm/frac_series.hpp"
#include "qhatm/problem_spec.hpp"

namespace qhatm {

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"ex41", "ex42", "ex43", "ex44", "ex45"};
  return names;
}

namespace detail {

inline std::shared_ptr<const FactorCatalog> make_catalog(std::vector<FactorKind> kinds) {
  return std::make_shared<const FactorCatalog>(std::move(kinds));
}

// Time-fractional problems D^{2a} v + c D^a v + b^2 v = Laplacian v whose data
// live on one eigenfunction of the Laplacian with eigenvalue b^2, so the
// matrix part of the bracket vanishes.
inline ProblemSpec time_fractional(std::string name, FactorKind factor, std::vector<std::string> coords,
                                   double damping, double potential, double eigenvalue, double initial_rate,
                                   ExactKind exact) {
  ProblemSpec spec;
  spec.name = std::move(name);
  spec.evolution_var = "t";
  spec.order_range = {0.0, 1.0};
  spec.leading_order = {0, 2};
  spec.lower_terms = {{damping, {0, 1}}};
  spec.catalog = make_catalog({factor});
  spec.bracket_matrix = FactorMatrix(1, potential - eigenvalue);
  if (!spec.bracket_matrix.is_zero()) {
    throw SpecError(spec.name + ": potential does not match the factor's Laplacian eigenvalue");
  }
  spec.source = FracSeries::zero(spec.catalog);
  spec.initial_guess = FracSeries(spec.catalog, {{1.0, {0, 0}, 0}, {initial_rate, {1, 0}, 0}});
  spec.coordinates = std::move(coords);
  spec.exact = exact;
  return spec;
}

}  // namespace detail

/// The five reference problems ex41..ex45.
inline ProblemSpec builtin(std::string_view name) {
  using detail::make_catalog;
  ProblemSpec spec;
  if (name == "ex41") {
    // D^{2a} v + 2 D^a v + v = v_xx, v(x,0) = e^x, v_t(x,0) = -2 e^x.
    spec = detail::time_fractional("ex41", FactorKind::exp_x, {"x"}, 2.0, 1.0, 1.0, -2.0,
                                   ExactKind::exp_x_minus_2t);
  } else if (name == "ex42") {
    // D_x^b v = v_tt + v_t + v with v(0,t) = v_x(0,t) = e^-t, 1 < b <= 2.
    // (d_t^2 + d_t + 1) e^-t = e^-t, moved to the left: matrix [-1].
    spec.name = "ex42";
    spec.evolution_var = "x";
    spec.order_range = {1.0, 2.0};
    spec.leading_order = {0, 1};
    spec.catalog = make_catalog({FactorKind::exp_neg_t});
    spec.bracket_matrix = FactorMatrix(1, -1.0);
    spec.source = FracSeries::zero(spec.catalog);
    spec.initial_guess = FracSeries(spec.catalog, {{1.0, {0, 0}, 0}, {1.0, {1, 0}, 0}});
    spec.coordinates = {"t"};
    spec.exact = ExactKind::exp_x_minus_t;
  } else if (name == "ex43") {
    // D_x^{2b} v = v_tt + v_t + v - x^2 - t + 1 with v(0,t) = t, v_x(0,t) = 0.
    // Basis {1, t}; the temporal operator T maps 1 -> 1 and t -> 1 + t.
    spec.name = "ex43";
    spec.evolution_var = "x";
    spec.order_range = {0.0, 1.0};
    spec.leading_order = {0, 2};
    spec.catalog = make_catalog({FactorKind::one, FactorKind::t});
    spec.bracket_matrix = FactorMatrix::from_rows({{-1.0, -1.0}, {0.0, -1.0}});
    spec.source = FracSeries(spec.catalog, {{1.0, {2, 0}, 0}, {1.0, {0, 0}, 1}, {-1.0, {0, 0}, 0}});
    spec.initial_guess = FracSeries(spec.catalog, {{1.0, {0, 0}, 1}});
    spec.coordinates = {"t"};
    spec.exact = ExactKind::t_plus_x2;
  } else if (name == "ex44") {
    // D^{2a} v + 3 D^a v + 2 v = v_xx + v_yy, data e^{x+y}(1 - 3t).
    spec = detail::time_fractional("ex44", FactorKind::exp_x_plus_y, {"x", "y"}, 3.0, 2.0, 2.0, -3.0,
                                   ExactKind::exp_x_plus_y_minus_3t);
  } else if (name == "ex45") {
    // D^{2a} v + 2 D^a v + 3 v = Laplacian v, data sinh(x)sinh(y)sinh(z)(1 - 2t).
    spec = detail::time_fractional("ex45", FactorKind::sinh_xyz, {"x", "y", "z"}, 2.0, 3.0, 3.0, -2.0,
                                   ExactKind::exp_neg_2t_sinh_xyz);
  } else {
    throw SpecError("unknown built-in problem '" + std::string(name) + "' (expected ex41..ex45)");
  }
  spec.validate();
  return spec;
}

/// Closed-form solution value at coords plus evolution value z.
inline double exact_eval(const ProblemSpec& spec, const Point& coords, double z) {
  if (!spec.exact) throw SpecError("problem '" + spec.name + "' has no exact solution");
  return evaluate_exact(*spec.exact, spec.full_point(coords, z));
}

// ---------------------------------------------------------------------------
// Custom-problem JSON documents.

using json = nlohmann::json;

inline json series_to_json(const FracSeries& s) {
  json out = json::array();
  for (const auto& term : s.terms()) {
    out.push_back({{"coeff", term.coeff},
                   {"p", term.exponent.p},
                   {"q", term.exponent.q},
                   {"factor", std::string(s.catalog()->id(term.factor))}});
  }
  return out;
}

inline json to_json(const ProblemSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["evolution_var"] = spec.evolution_var;
  doc["order_range"] = {spec.order_range.low, spec.order_range.high};
  doc["leading_order"] = {{"p", spec.leading_order.p}, {"q", spec.leading_order.q}};
  doc["lower_terms"] = json::array();
  for (const auto& lt : spec.lower_terms) {
    doc["lower_terms"].push_back({{"coeff", lt.coeff}, {"order", {{"p", lt.order.p}, {"q", lt.order.q}}}});
  }
  doc["factors"] = json::array();
  for (std::size_t i = 0; i < spec.catalog->size(); ++i) doc["factors"].push_back(std::string(spec.catalog->id(i)));
  doc["bracket_matrix"] = spec.bracket_matrix.rows();
  doc["source"] = series_to_json(spec.source);
  doc["initial_guess"] = series_to_json(spec.initial_guess);
  doc["coordinates"] = spec.coordinates;
  if (spec.exact) doc["exact"] = std::string(exact_info(*spec.exact).id);
  return doc;
}

namespace detail {

inline const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(std::string("missing field '") + key + "'");
  return *it;
}

inline int require_int(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) throw SpecError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline AffineExponent parse_exponent(const json& obj) {
  if (!obj.is_object()) throw SpecError("order must be an object {p, q}");
  return {require_int(obj, "p"), require_int(obj, "q")};
}

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const char* what) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SpecError(std::string("unexpected field '") + key + "' in " + what);
    }
  }
}

}  // namespace detail

/// Parses a series written as a term list against a catalog.
inline FracSeries series_from_json(const json& arr, const std::shared_ptr<const FactorCatalog>& catalog) {
  if (!arr.is_array()) throw SpecError("series must be an array of terms");
  std::vector<Term> terms;
  for (const auto& t : arr) {
    if (!t.is_object()) throw SpecError("series term must be an object");
    detail::check_keys(t, {"coeff", "p", "q", "factor"}, "term");
    const json& f = detail::require(t, "factor");
    if (!f.is_string()) throw SpecError("term factor must be a string id");
    auto idx = catalog->index_of(f.get<std::string>());
    if (!idx) throw SpecError("unknown factor id '" + f.get<std::string>() + "'");
    terms.push_back({detail::require_number(t, "coeff"),
                     {detail::require_int(t, "p"), detail::require_int(t, "q")},
                     *idx});
  }
  return FracSeries(catalog, std::move(terms));
}

inline ProblemSpec from_json(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw SpecError("problem document must be a JSON object");
  check_keys(doc,
             {"name", "evolution_var", "order_range", "leading_order", "lower_terms", "factors",
              "bracket_matrix", "source", "initial_guess", "coordinates", "exact"},
             "problem");

  ProblemSpec spec;
  const json& name = require(doc, "name");
  if (!name.is_string()) throw SpecError("'name' must be a string");
  spec.name = name.get<std::string>();

  const json& ev = require(doc, "evolution_var");
  if (!ev.is_string()) throw SpecError("'evolution_var' must be a string");
  spec.evolution_var = ev.get<std::string>();

  const json& range = require(doc, "order_range");
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
    throw SpecError("'order_range' must be [low, high]");
  }
  spec.order_range = {range[0].get<double>(), range[1].get<double>()};
  if (!(spec.order_range.low < spec.order_range.high)) {
    throw SpecError("order range " + spec.order_range.to_string() + " is empty");
  }

  spec.leading_order = parse_exponent(require(doc, "leading_order"));

  const json& lower = require(doc, "lower_terms");
  if (!lower.is_array()) throw SpecError("'lower_terms' must be an array");
  for (const auto& lt : lower) {
    if (!lt.is_object()) throw SpecError("lower term must be an object");
    check_keys(lt, {"coeff", "order"}, "lower term");
    spec.lower_terms.push_back({require_number(lt, "coeff"), parse_exponent(require(lt, "order"))});
  }

  const json& factors = require(doc, "factors");
  if (!factors.is_array() || factors.empty()) throw SpecError("'factors' must be a non-empty array");
  std::vector<FactorKind> kinds;
  for (const auto& f : factors) {
    if (!f.is_string()) throw SpecError("factor ids must be strings");
    auto kind = factor_from_id(f.get<std::string>());
    if (!kind) throw SpecError("unknown factor id '" + f.get<std::string>() + "'");
    kinds.push_back(*kind);
  }
  spec.catalog = std::make_shared<const FactorCatalog>(std::move(kinds));

  const json& matrix = require(doc, "bracket_matrix");
  if (!matrix.is_array()) throw SpecError("'bracket_matrix' must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : matrix) {
    if (!row.is_array()) throw SpecError("'bracket_matrix' rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw SpecError("'bracket_matrix' entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  spec.bracket_matrix = FactorMatrix::from_rows(rows);

  spec.source = series_from_json(require(doc, "source"), spec.catalog);
  spec.initial_guess = series_from_json(require(doc, "initial_guess"), spec.catalog);

  const json& coords = require(doc, "coordinates");
  if (!coords.is_array()) throw SpecError("'coordinates' must be an array");
  for (const auto& c : coords) {
    if (!c.is_string()) throw SpecError("coordinate names must be strings");
    spec.coordinates.push_back(c.get<std::string>());
  }

  if (auto it = doc.find("exact"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw SpecError("'exact' must be a string id");
    auto kind = exact_from_id(it->get<std::string>());
    if (!kind) throw SpecError("unknown exact solution id '" + it->get<std::string>() + "'");
    spec.exact = *kind;
  }

  spec.validate();
  return spec;
}

/// Loads a custom problem from its JSON text.
inline ProblemSpec load_custom(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

}  // namespace qhatm
