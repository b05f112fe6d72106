#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qhatm/engine.hpp"
#include "qhatm/problem_library.hpp"
#include "support/oracles.hpp"

using namespace qhatm;

namespace {

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(QHATM_SOURCE_DIR) + "/samples/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Value and first evolution derivative of u0 at z = 0 for each built-in,
// written directly from the problem's initial or boundary data.
struct InitialData {
  const char* name;
  double (*value)(const Point&);
  double (*slope)(const Point&);
};

double sinh3(const Point& p) { return std::sinh(p.at("x")) * std::sinh(p.at("y")) * std::sinh(p.at("z")); }

const InitialData kInitialData[] = {
    {"ex41", [](const Point& p) { return std::exp(p.at("x")); }, [](const Point& p) { return -2.0 * std::exp(p.at("x")); }},
    {"ex42", [](const Point& p) { return std::exp(-p.at("t")); }, [](const Point& p) { return std::exp(-p.at("t")); }},
    {"ex43", [](const Point& p) { return p.at("t"); }, [](const Point&) { return 0.0; }},
    {"ex44", [](const Point& p) { return std::exp(p.at("x") + p.at("y")); },
     [](const Point& p) { return -3.0 * std::exp(p.at("x") + p.at("y")); }},
    {"ex45", sinh3, [](const Point& p) { return -2.0 * sinh3(p); }},
};

}  // namespace

TEST(Builtins, AllConstructAndValidate) {
  for (const auto& name : builtin_names()) {
    const ProblemSpec spec = builtin(name);
    EXPECT_EQ(spec.name, name);
    EXPECT_NO_THROW(spec.validate());
  }
  EXPECT_THROW(builtin("ex46"), SpecError);
}

TEST(Builtins, OrderRanges) {
  EXPECT_EQ(builtin("ex42").order_range.to_string(), "(1, 2]");
  EXPECT_EQ(builtin("ex41").order_range.to_string(), "(0, 1]");
  EXPECT_TRUE(builtin("ex42").order_range.contains(2.0));
  EXPECT_FALSE(builtin("ex42").order_range.contains(1.0));
}

TEST(Builtins, InitialAndBoundaryData) {
  for (const auto& d : kInitialData) {
    const ProblemSpec spec = builtin(d.name);
    const double g = spec.order_range.high;
    const FracSeries slope = caputo(spec.initial_guess, {1, 0}, g);
    for (double a = -1.0; a <= 1.0; a += 0.25) {
      for (double b = -0.5; b <= 0.5; b += 0.5) {
        Point p;
        for (std::size_t i = 0; i < spec.coordinates.size(); ++i) p[spec.coordinates[i]] = i == 0 ? a : b + 0.1 * i;
        p[spec.evolution_var] = 0.0;
        const double v = evaluate(spec.initial_guess, 0.0, g, p);
        const double s = evaluate(slope, 0.0, g, p);
        EXPECT_NEAR(v, d.value(p), 1e-12 * std::max(1.0, std::abs(v))) << d.name;
        EXPECT_NEAR(s, d.slope(p), 1e-12 * std::max(1.0, std::abs(s))) << d.name;
      }
    }
  }
}

TEST(Builtins, Ex43InitialGuessHasNoZeroTerm) {
  const ProblemSpec spec = builtin("ex43");
  ASSERT_EQ(spec.initial_guess.size(), 1u);
  EXPECT_EQ(spec.catalog->id(spec.initial_guess.terms()[0].factor), "t");
}

TEST(Builtins, EigenConsistency) {
  for (const char* name : {"ex41", "ex44", "ex45"}) EXPECT_TRUE(builtin(name).bracket_matrix.is_zero()) << name;
  EXPECT_THROW(detail::time_fractional("bad", FactorKind::exp_x, {"x"}, 2.0, 2.0, 1.0, -2.0,
                                       ExactKind::exp_x_minus_2t),
               SpecError);
}

TEST(ExactEval, Examples) {
  EXPECT_NEAR(exact_eval(builtin("ex41"), {{"x", 1.5}}, 0.5), 1.6487212707001282, 1e-15);
  EXPECT_NEAR(exact_eval(builtin("ex41"), {{"x", 1.5}}, 0.5), std::exp(0.5), 1e-15);
  const double e45 = exact_eval(builtin("ex45"), {{"x", 0.25}, {"y", 0.25}, {"z", 0.25}}, 0.25);
  EXPECT_NEAR(e45, 0.0097772, 5e-8);
  EXPECT_NEAR(e45, 0.00977724110454761, 1e-15);
  EXPECT_THROW(exact_eval(builtin("ex41"), {{"y", 1.0}}, 0.5), MissingCoordinate);
}

TEST(Json, RoundTripAllBuiltins) {
  for (const auto& name : builtin_names()) {
    const ProblemSpec spec = builtin(name);
    const ProblemSpec back = load_custom(to_json(spec).dump());
    EXPECT_TRUE(back == spec) << name;
  }
}

TEST(Json, ErrorCases) {
  const auto base = to_json(builtin("ex41"));
  auto with = [&](auto mutate) {
    auto doc = base;
    mutate(doc);
    return doc.dump();
  };
  EXPECT_THROW(load_custom("{not json"), SpecError);
  EXPECT_THROW(load_custom("[]"), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d.erase("name"); })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["extra"] = 1; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["factors"] = {"exp_z"}; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["bracket_matrix"] = {{0.0, 0.0}, {0.0, 0.0}}; })), DimensionError);
  EXPECT_THROW(load_custom(with([](json& d) { d["order_range"] = {1.0, 0.0}; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["leading_order"]["p"] = 0.5; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["lower_terms"][0]["order"] = {{"p", 0}, {"q", 3}}; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["coordinates"] = json::array(); })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["coordinates"] = {"x", "t"}; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["exact"] = "nope"; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["evolution_var"] = "y"; })), SpecError);
  EXPECT_THROW(load_custom(with([](json& d) { d["initial_guess"][0]["factor"] = "sinh_xyz"; })), SpecError);
}

TEST(Json, DampedWaveSample) {
  const ProblemSpec spec = load_custom(read_sample("damped_wave.json"));
  EXPECT_EQ(spec.name, "damped_wave");
  EXPECT_FALSE(spec.exact.has_value());
  // bracket(u0) = 2 D(e^x(1 - t)) + e^x(1 - t) = -e^x (1 + t) at integer order.
  const double h = -0.7;
  const Solution sol = solve(spec, {1.0, h, 1, 2});
  const FracSeries v1_expected(spec.catalog, {{-h / 2.0, {2, 0}, 0}, {-h / 6.0, {3, 0}, 0}});
  EXPECT_TRUE(terms_match(collapse_to_integer_powers(sol.iterates[1], 1.0), v1_expected, 1e-13));
}
