#pragma once

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qhatm/analysis.hpp"
#include "qhatm/engine.hpp"
#include "qhatm/errors.hpp"
#include "qhatm/problem_library.hpp"
#include "qhatm/version.hpp"

namespace qhatm::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kIo = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { solve, eval, hcurve, errgrid, residual, table45 };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::solve;
  std::string problem;      // built-in name, or empty
  std::string custom_path;  // custom JSON path, or empty
  std::optional<ProblemSpec> spec;
  QhatmParams params;
  std::optional<Point> point;
  std::optional<GridSpec> grid;
  double h_min = -2.0;
  double h_max = 0.0;
  int steps = 201;
  std::string output;  // empty means standard output
  Format format = Format::csv;
  std::string help;  // set when --help was requested
};

inline double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw UsageError("malformed number '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

/// "x=1.5,t=0" -> {x: 1.5, t: 0}.
inline Point parse_point(std::string_view text) {
  Point p;
  for (auto item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("--point: expected name=value, got '" + std::string(item) + "'");
    }
    const std::string name(item.substr(0, eq));
    if (p.count(name)) throw UsageError("--point: duplicate variable '" + name + "'");
    p[name] = parse_number(item.substr(eq + 1), "--point");
  }
  return p;
}

/// "x=0:1:0.25,t=0:0.5:0.1" -> axes.
inline GridSpec parse_grid(std::string_view text) {
  GridSpec grid;
  for (auto item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("--grid: expected name=start:stop:step, got '" + std::string(item) + "'");
    }
    const auto parts = split(item.substr(eq + 1), ':');
    if (parts.size() != 3) {
      throw UsageError("--grid: expected name=start:stop:step, got '" + std::string(item) + "'");
    }
    Axis axis{std::string(item.substr(0, eq)), parse_number(parts[0], "--grid"), parse_number(parts[1], "--grid"),
              parse_number(parts[2], "--grid")};
    if (!(axis.step > 0.0) || axis.stop < axis.start) {
      throw UsageError("--grid: axis '" + axis.name + "' needs step > 0 and stop >= start");
    }
    grid.push_back(std::move(axis));
  }
  return grid;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

inline void check_point_vars(const ProblemSpec& spec, const Point& p) {
  const auto vars = point_variables(spec);
  for (const auto& v : vars) {
    if (!p.count(v)) throw UsageError("--point: missing variable '" + v + "' for problem '" + spec.name + "'");
  }
  for (const auto& [name, _] : p) {
    if (std::find(vars.begin(), vars.end(), name) == vars.end()) {
      throw UsageError("--point: variable '" + name + "' is not used by problem '" + spec.name + "'");
    }
  }
  if (p.at(spec.evolution_var) < 0.0) {
    throw UsageError("--point: evolution variable '" + spec.evolution_var + "' must be non-negative");
  }
}

/// Parses argv (without the program name) into a validated configuration.
/// Throws UsageError, IoError, or qhatm::Error for an invalid custom document.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Series solutions of linear fractional telegraph equations", "qhatm"};
  app.set_help_flag("--help", "show usage");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string point_text, grid_text, format_text = "csv";
  std::optional<double> gamma, h, h_min, h_max;
  std::optional<int> n, order, steps;

  auto add_problem = [&](CLI::App* sub) {
    auto* p = sub->add_option("--problem", cfg.problem, "built-in problem (ex41..ex45)");
    auto* c = sub->add_option("--custom", cfg.custom_path, "custom problem JSON file");
    p->excludes(c);
  };
  auto add_params = [&](CLI::App* sub, bool with_h) {
    sub->add_option("--gamma", gamma, "fractional order (alpha or beta)");
    if (with_h) sub->add_option("--h", h, "auxiliary parameter h");
    sub->add_option("--n", n, "asymptotic parameter n >= 1");
    sub->add_option("--order", order, "truncation order M");
  };
  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "csv or json");
    sub->add_option("--output", cfg.output, "output file (default: standard output)");
  };

  auto* solve_cmd = app.add_subcommand("solve", "compute iterates and the assembled series");
  add_problem(solve_cmd);
  add_params(solve_cmd, true);
  add_io(solve_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate the assembled series at a point");
  add_problem(eval_cmd);
  add_params(eval_cmd, true);
  eval_cmd->add_option("--point", point_text, "name=value,...");
  add_io(eval_cmd);

  auto* hcurve_cmd = app.add_subcommand("hcurve", "series value at a point against h");
  add_problem(hcurve_cmd);
  add_params(hcurve_cmd, false);
  hcurve_cmd->add_option("--point", point_text, "name=value,...");
  hcurve_cmd->add_option("--h-min", h_min, "lower end of the h grid");
  hcurve_cmd->add_option("--h-max", h_max, "upper end of the h grid");
  hcurve_cmd->add_option("--steps", steps, "number of h samples (>= 2)");
  add_io(hcurve_cmd);

  auto* errgrid_cmd = app.add_subcommand("errgrid", "absolute error against the exact solution on a grid");
  add_problem(errgrid_cmd);
  add_params(errgrid_cmd, true);
  errgrid_cmd->add_option("--grid", grid_text, "name=start:stop:step,...");
  add_io(errgrid_cmd);

  auto* residual_cmd = app.add_subcommand("residual", "pointwise |residual| of the assembled series");
  add_problem(residual_cmd);
  add_params(residual_cmd, true);
  residual_cmd->add_option("--point", point_text, "name=value,...");
  residual_cmd->add_option("--grid", grid_text, "name=start:stop:step,...");
  add_io(residual_cmd);

  auto* table_cmd = app.add_subcommand("table45", "comparison table for the 3D problem");
  table_cmd->add_option("--order", order, "truncation order M (>= 3)");
  add_io(table_cmd);

  // CLI11 wants arguments in reverse order when given a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    cfg.help = app.help();
    for (auto* sub : app.get_subcommands()) cfg.help = sub->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (solve_cmd->parsed()) cfg.command = Command::solve;
  else if (eval_cmd->parsed()) cfg.command = Command::eval;
  else if (hcurve_cmd->parsed()) cfg.command = Command::hcurve;
  else if (errgrid_cmd->parsed()) cfg.command = Command::errgrid;
  else if (residual_cmd->parsed()) cfg.command = Command::residual;
  else cfg.command = Command::table45;

  if (format_text == "csv") cfg.format = Format::csv;
  else if (format_text == "json") cfg.format = Format::json;
  else throw UsageError("--format: expected csv or json, got '" + format_text + "'");

  if (cfg.command == Command::table45) {
    cfg.params = {1.0, -1.0, 1, order.value_or(3)};
    if (cfg.params.order < 3) throw UsageError("--order: table45 needs order >= 3");
    return cfg;
  }

  if (cfg.problem.empty() == cfg.custom_path.empty()) {
    throw UsageError("exactly one of --problem or --custom is required");
  }
  if (!gamma) throw UsageError("--gamma is required");
  if (cfg.command != Command::hcurve && !h) throw UsageError("--h is required");
  if (!n) throw UsageError("--n is required");
  if (!order) throw UsageError("--order is required");
  if (*n < 1) throw UsageError("--n: must be at least 1");
  if (*order < 0) throw UsageError("--order: must be non-negative");

  if (!cfg.problem.empty()) {
    try {
      cfg.spec = builtin(cfg.problem);
    } catch (const SpecError& e) {
      throw UsageError(std::string("--problem: ") + e.what());
    }
  } else {
    cfg.spec = load_custom(read_file(cfg.custom_path));
  }
  if (!cfg.spec->order_range.contains(*gamma)) {
    throw UsageError("--gamma: " + format_number(*gamma) + " is outside the admissible range " +
                     cfg.spec->order_range.to_string() + " of problem '" + cfg.spec->name + "'");
  }
  cfg.params = {*gamma, h.value_or(0.0), *n, *order};

  switch (cfg.command) {
    case Command::eval:
      if (point_text.empty()) throw UsageError("--point is required for eval");
      break;
    case Command::hcurve:
      if (point_text.empty()) throw UsageError("--point is required for hcurve");
      if (!h_min || !h_max || !steps) throw UsageError("--h-min, --h-max and --steps are required for hcurve");
      if (!(*h_min < *h_max)) throw UsageError("--h-min must be below --h-max");
      if (*steps < 2) throw UsageError("--steps: must be at least 2");
      cfg.h_min = *h_min;
      cfg.h_max = *h_max;
      cfg.steps = *steps;
      break;
    case Command::errgrid:
      if (grid_text.empty()) throw UsageError("--grid is required for errgrid");
      break;
    case Command::residual:
      if (point_text.empty() == grid_text.empty()) {
        throw UsageError("residual needs exactly one of --point or --grid");
      }
      break;
    default:
      break;
  }
  if (!point_text.empty()) {
    cfg.point = parse_point(point_text);
    check_point_vars(*cfg.spec, *cfg.point);
  }
  if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
  return cfg;
}

// ---------------------------------------------------------------------------

using nlohmann::json;

inline json point_json(const Point& p) {
  json out = json::object();
  for (const auto& [k, v] : p) out[k] = v;
  return out;
}

inline json params_json(const QhatmParams& p) {
  return {{"gamma", p.gamma}, {"h", p.h}, {"n", p.n}, {"order", p.order}};
}

inline void emit_solve(std::ostream& os, const RunConfig& cfg) {
  const ProblemSpec& spec = *cfg.spec;
  const Solution sol = solve(spec, cfg.params);
  if (cfg.format == Format::json) {
    json doc;
    doc["tool"] = "qhatm";
    doc["version"] = kVersion;
    doc["problem"] = spec.name;
    doc["evolution_var"] = spec.evolution_var;
    doc["params"] = params_json(cfg.params);
    doc["iterates"] = json::array();
    for (const auto& v : sol.iterates) doc["iterates"].push_back(series_to_json(v));
    doc["assembled"] = series_to_json(sol.assembled);
    os << doc.dump(2) << '\n';
    return;
  }
  os << "series,coeff,p,q,factor\n";
  auto rows = [&](const std::string& label, const FracSeries& s) {
    for (const auto& t : s.terms()) {
      os << label << ',' << format_number(t.coeff) << ',' << t.exponent.p << ',' << t.exponent.q << ','
         << s.catalog()->id(t.factor) << '\n';
    }
  };
  for (std::size_t m = 0; m < sol.iterates.size(); ++m) rows("v" + std::to_string(m), sol.iterates[m]);
  rows("S", sol.assembled);
}

inline void emit_eval(std::ostream& os, const RunConfig& cfg) {
  const ProblemSpec& spec = *cfg.spec;
  const Solution sol = solve(spec, cfg.params);
  const double value = evaluate_at(sol.assembled, spec, cfg.params.gamma, *cfg.point);
  if (cfg.format == Format::json) {
    os << json{{"point", point_json(*cfg.point)}, {"value", value}}.dump(2) << '\n';
    return;
  }
  const auto vars = point_variables(spec);
  for (const auto& v : vars) os << v << ',';
  os << "value\n";
  for (const auto& v : vars) os << format_number(cfg.point->at(v)) << ',';
  os << format_number(value) << '\n';
}

inline void emit_hcurve(std::ostream& os, const RunConfig& cfg) {
  const auto curve = h_curve(*cfg.spec, cfg.params.gamma, cfg.params.n, cfg.params.order, *cfg.point, cfg.h_min,
                             cfg.h_max, cfg.steps);
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& c : curve) {
      arr.push_back({{"h", c.h}, {"value", c.divergent ? json(nullptr) : json(c.value)}, {"divergent", c.divergent}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  write_hcurve_csv(os, curve);
}

inline void emit_errgrid(std::ostream& os, const RunConfig& cfg) {
  const auto records = error_grid(*cfg.spec, cfg.params, *cfg.grid);
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : records) {
      arr.push_back({{"point", point_json(r.point)}, {"approx", r.approx}, {"exact", r.exact}, {"abs_err", r.abs_err}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  write_error_grid_csv(os, *cfg.spec, records);
}

inline void emit_residual(std::ostream& os, const RunConfig& cfg) {
  std::vector<Point> points = cfg.grid ? grid_points(*cfg.spec, *cfg.grid) : std::vector<Point>{*cfg.point};
  const auto records = residual_sweep(*cfg.spec, cfg.params, points);
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back({{"point", point_json(r.point)}, {"residual", r.residual}});
    os << arr.dump(2) << '\n';
    return;
  }
  write_residual_csv(os, *cfg.spec, records);
}

inline void emit_table45(std::ostream& os, const RunConfig& cfg) {
  const auto rows = table_ex45(cfg.params.order);
  if (cfg.format == Format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"xyz", r.xyz},
                     {"t", r.t},
                     {"qhatm", r.qhatm},
                     {"exact", r.exact},
                     {"abs_err", r.abs_err},
                     {"paper_qhatm", r.paper_qhatm},
                     {"paper_exact", r.paper_exact}});
    }
    os << arr.dump(2) << '\n';
    return;
  }
  write_table45_csv(os, rows);
}

inline void emit(std::ostream& os, const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::solve: emit_solve(os, cfg); break;
    case Command::eval: emit_eval(os, cfg); break;
    case Command::hcurve: emit_hcurve(os, cfg); break;
    case Command::errgrid: emit_errgrid(os, cfg); break;
    case Command::residual: emit_residual(os, cfg); break;
    case Command::table45: emit_table45(os, cfg); break;
  }
}

/// Executes a parsed configuration. Writes to cfg.output, or to `out` when
/// no output path is set.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (!cfg.help.empty()) {
    out << cfg.help;
    return kOk;
  }
  try {
    if (cfg.output.empty()) {
      emit(out, cfg);
      out.flush();
      return kOk;
    }
    std::ostringstream buffer;
    emit(buffer, cfg);
    std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + cfg.output + "' for writing");
    file << buffer.str();
    file.close();
    if (!file) throw IoError("failed writing '" + cfg.output + "'");
    return kOk;
  } catch (const IoError& e) {
    err << "qhatm: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "qhatm: " << e.what() << '\n';
    return kDomain;
  }
}

/// Full command-line entry: parse, run, map failures to exit codes.
inline int main(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    err << "qhatm: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "qhatm: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "qhatm: " << e.what() << '\n';
    return kDomain;
  }
  return run(cfg, out, err);
}

}  // namespace qhatm::cli
