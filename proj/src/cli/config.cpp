#include <algorithm>
#include <charconv>
#include <fstream>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tfe/cli.hpp"
#include "tfe/error.hpp"

namespace tfe::cli {

namespace {

using nlohmann::json;

double parse_number(std::string_view s, const std::string& key) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": '" + std::string(s) + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& key, size_t expected) {
  std::vector<double> out;
  for (const std::string& p : split(s, ',')) out.push_back(parse_number(p, key));
  if (out.size() != expected) {
    throw ConfigError(key + ": expected " + std::to_string(expected) + " comma-separated numbers, got " +
                      std::to_string(out.size()));
  }
  return out;
}

GridAxis parse_axis(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("--grid: axis '" + s + "' must be min:max:step");
  return GridAxis{parse_number(parts[0], "--grid"), parse_number(parts[1], "--grid"),
                  parse_number(parts[2], "--grid")};
}

std::array<GridAxis, 3> parse_grid(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() == 1) {
    GridAxis a = parse_axis(parts[0]);
    return {a, a, a};
  }
  if (parts.size() != 3) throw ConfigError("--grid: give one axis spec or three comma-separated specs");
  return {parse_axis(parts[0]), parse_axis(parts[1]), parse_axis(parts[2])};
}

void parse_tolerances(const std::string& s, RunConfig& cfg) {
  for (const std::string& item : split(s, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      cfg.tol = parse_number(item, "--tol");
    } else {
      std::string key = item.substr(0, eq);
      const auto& names = check_names();
      if (std::find(names.begin(), names.end(), key) == names.end()) {
        throw ConfigError("--tol: unknown check '" + key + "'");
      }
      cfg.tolerances[key] = parse_number(item.substr(eq + 1), "--tol");
    }
  }
}

void add_common(CLI::App* app, std::map<std::string, std::string>& opts, std::vector<std::string>& seeds) {
  static const std::vector<std::pair<std::string, std::string>> flags = {
      {"--surface", "built-in surface or pseudo-model, name[:param]"},
      {"--surface-file", "JSON surface file"},
      {"--t", "slice time"},
      {"--a0", "first translation component as re,im (or a real)"},
      {"--a", "translation as 8 reals re0,im0,...,re3,im3"},
      {"--grid", "min:max:step, one spec or three comma-separated"},
      {"--branch", "+, - or a root index"},
      {"--checks", "comma-separated checks"},
      {"--tol", "tolerance, or CHECK=value list"},
      {"--h", "finite-difference step"},
      {"--points", "number of sample points"},
      {"--x0", "x0 offset of the R4 sample points"},
      {"--rng-seed", "sampling seed"},
      {"--step", "leaf step length"},
      {"--max-len", "leaf length cap"},
      {"--plane", "SVG projection plane: x1x2, x1x3 or x2x3"},
      {"--out", "output directory"},
      {"--manifest", "start from a manifest written by an earlier run"},
  };
  app->set_help_flag("--help", "print this help");
  for (const auto& [name, help] : flags) app->add_option(name, opts[name], help);
  app->add_option("--seed", seeds, "seed point x,y,z (repeatable)")->allow_extra_args(false);
  app->add_flag("--sampled", "trace through the interpolated grid field");
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"ER",   "EM",       "CONF",     "HC0", "LAPLACE",
                                                 "HWC_EUCL", "WAVE", "HWC_MINK", "HYP", "ORTHOG"};
  return names;
}

double RunConfig::tolerance_for(const std::string& check) const {
  auto it = tolerances.find(check);
  return it == tolerances.end() ? tol : it->second;
}

void RunConfig::validate() const {
  static const char* axis_names[3] = {"x1", "x2", "x3"};
  for (int i = 0; i < 3; ++i) {
    if (!(grid[i].step > 0.0)) throw ConfigError(std::string("--grid: step of axis ") + axis_names[i] + " must be positive");
    if (!(grid[i].min < grid[i].max)) throw ConfigError(std::string("--grid: min must be below max on axis ") + axis_names[i]);
  }
  if (!(tol > 0.0)) throw ConfigError("--tol: tolerance must be positive");
  for (const auto& [k, v] : tolerances) {
    if (!(v > 0.0)) throw ConfigError("--tol: tolerance for " + k + " must be positive");
  }
  if (!(h > 0.0)) throw ConfigError("--h: step must be positive");
  if (points < 1) throw ConfigError("--points: must be at least 1");
  if (!(step > 0.0)) throw ConfigError("--step: must be positive");
  if (!(max_len > 0.0)) throw ConfigError("--max-len: must be positive");
  if (plane != "x1x2" && plane != "x1x3" && plane != "x2x3") throw ConfigError("--plane: expected x1x2, x1x3 or x2x3");
  for (const std::string& c : checks) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), c) == names.end()) throw ConfigError("--checks: unknown check '" + c + "'");
  }
  parse_branch(branch);
}

int parse_branch(const std::string& s) {
  if (s == "+") return 0;
  if (s == "-") return 1;
  int v = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw ConfigError("--branch: expected +, - or a non-negative index");
  }
  return v;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"twistor surfaces to foliations and harmonic morphisms"};
  app.require_subcommand(1);
  std::map<std::string, std::string> opts;
  std::vector<std::string> seeds;
  const std::vector<std::string> commands = {"solve", "trace", "verify"};
  for (const std::string& c : commands) {
    CLI::App* sub = app.add_subcommand(c, c == "solve"    ? "solve the direction field on a grid"
                                          : c == "trace" ? "trace leaves of the foliation"
                                                         : "run residual checks");
    add_common(sub, opts, seeds);
  }
  app.add_subcommand("list-examples", "list built-in surfaces and pseudo-models");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  auto given = [&](const std::string& name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--manifest")) {
    std::ifstream in(opts["--manifest"]);
    if (!in) throw ConfigError("--manifest: cannot open '" + opts["--manifest"] + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = config_from_manifest(ss.str());
  }
  cfg.command = sub->get_name();
  if (given("--surface")) cfg.surface = opts["--surface"];
  if (given("--surface-file")) cfg.surface_file = opts["--surface-file"];
  if (given("--t")) cfg.t = parse_number(opts["--t"], "--t");
  if (given("--a")) {
    auto v = parse_list(opts["--a"], "--a", 8);
    for (int i = 0; i < 4; ++i) cfg.a[i] = cplx(v[2 * i], v[2 * i + 1]);
  }
  if (given("--a0")) {
    // a lone number is the real part
    const std::string& text = opts["--a0"];
    if (text.find(',') == std::string::npos) {
      cfg.a[0] = cplx(parse_number(text, "--a0"), 0.0);
    } else {
      auto v = parse_list(text, "--a0", 2);
      cfg.a[0] = cplx(v[0], v[1]);
    }
  }
  if (given("--grid")) cfg.grid = parse_grid(opts["--grid"]);
  if (given("--seed")) {
    cfg.seeds.clear();
    for (const std::string& s : seeds) {
      auto v = parse_list(s, "--seed", 3);
      cfg.seeds.emplace_back(v[0], v[1], v[2]);
    }
  }
  if (given("--branch")) cfg.branch = opts["--branch"];
  if (given("--checks")) {
    cfg.checks.clear();
    for (const std::string& c : split(opts["--checks"], ',')) cfg.checks.push_back(c);
  }
  if (given("--tol")) parse_tolerances(opts["--tol"], cfg);
  if (given("--h")) cfg.h = parse_number(opts["--h"], "--h");
  if (given("--points")) {
    double p = parse_number(opts["--points"], "--points");
    if (p != std::floor(p) || p < 1 || p > 1e7) throw ConfigError("--points: expected a positive integer");
    cfg.points = static_cast<int>(p);
  }
  if (given("--x0")) cfg.x0 = parse_number(opts["--x0"], "--x0");
  if (given("--rng-seed")) {
    const std::string& s = opts["--rng-seed"];
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("--rng-seed: expected an unsigned integer");
    cfg.rng_seed = v;
  }
  if (given("--step")) cfg.step = parse_number(opts["--step"], "--step");
  if (given("--max-len")) cfg.max_len = parse_number(opts["--max-len"], "--max-len");
  if (given("--plane")) cfg.plane = opts["--plane"];
  if (sub->get_option_no_throw("--sampled") && sub->count("--sampled") > 0) cfg.sampled = true;
  if (given("--out")) cfg.out = opts["--out"];
  cfg.validate();
  return cfg;
}

std::string manifest_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["surface"] = cfg.surface;
  j["surface_file"] = cfg.surface_file;
  j["t"] = cfg.t;
  json a = json::array();
  for (const cplx& c : cfg.a) {
    a.push_back(c.real());
    a.push_back(c.imag());
  }
  j["a"] = a;
  json g = json::array();
  for (const GridAxis& ax : cfg.grid) g.push_back({ax.min, ax.max, ax.step});
  j["grid"] = g;
  json s = json::array();
  for (const Vec3& v : cfg.seeds) s.push_back({v[0], v[1], v[2]});
  j["seeds"] = s;
  j["branch"] = cfg.branch;
  j["checks"] = cfg.checks;
  j["tol"] = cfg.tol;
  j["tolerances"] = cfg.tolerances;
  j["h"] = cfg.h;
  j["points"] = cfg.points;
  j["x0"] = cfg.x0;
  j["rng_seed"] = cfg.rng_seed;
  j["step"] = cfg.step;
  j["max_len"] = cfg.max_len;
  j["plane"] = cfg.plane;
  j["sampled"] = cfg.sampled;
  j["out"] = cfg.out;
  return j.dump(2) + "\n";
}

RunConfig config_from_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("--manifest: ") + e.what());
  }
  RunConfig cfg;
  std::string key;
  try {
    key = "command";
    if (j.contains(key)) cfg.command = j[key].get<std::string>();
    key = "surface";
    if (j.contains(key)) cfg.surface = j[key].get<std::string>();
    key = "surface_file";
    if (j.contains(key)) cfg.surface_file = j[key].get<std::string>();
    key = "t";
    if (j.contains(key)) cfg.t = j[key].get<double>();
    key = "a";
    if (j.contains(key)) {
      auto v = j[key].get<std::vector<double>>();
      if (v.size() != 8) throw ConfigError("manifest key 'a': expected 8 numbers");
      for (int i = 0; i < 4; ++i) cfg.a[i] = cplx(v[2 * i], v[2 * i + 1]);
    }
    key = "grid";
    if (j.contains(key)) {
      auto v = j[key].get<std::vector<std::vector<double>>>();
      if (v.size() != 3) throw ConfigError("manifest key 'grid': expected 3 axes");
      for (int i = 0; i < 3; ++i) {
        if (v[i].size() != 3) throw ConfigError("manifest key 'grid': each axis needs min, max, step");
        cfg.grid[i] = GridAxis{v[i][0], v[i][1], v[i][2]};
      }
    }
    key = "seeds";
    if (j.contains(key)) {
      for (const auto& s : j[key].get<std::vector<std::vector<double>>>()) {
        if (s.size() != 3) throw ConfigError("manifest key 'seeds': each seed needs 3 numbers");
        cfg.seeds.emplace_back(s[0], s[1], s[2]);
      }
    }
    key = "branch";
    if (j.contains(key)) cfg.branch = j[key].get<std::string>();
    key = "checks";
    if (j.contains(key)) cfg.checks = j[key].get<std::vector<std::string>>();
    key = "tol";
    if (j.contains(key)) cfg.tol = j[key].get<double>();
    key = "tolerances";
    if (j.contains(key)) cfg.tolerances = j[key].get<std::map<std::string, double>>();
    key = "h";
    if (j.contains(key)) cfg.h = j[key].get<double>();
    key = "points";
    if (j.contains(key)) cfg.points = j[key].get<int>();
    key = "x0";
    if (j.contains(key)) cfg.x0 = j[key].get<double>();
    key = "rng_seed";
    if (j.contains(key)) cfg.rng_seed = j[key].get<uint64_t>();
    key = "step";
    if (j.contains(key)) cfg.step = j[key].get<double>();
    key = "max_len";
    if (j.contains(key)) cfg.max_len = j[key].get<double>();
    key = "plane";
    if (j.contains(key)) cfg.plane = j[key].get<std::string>();
    key = "sampled";
    if (j.contains(key)) cfg.sampled = j[key].get<bool>();
    key = "out";
    if (j.contains(key)) cfg.out = j[key].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError("manifest key '" + key + "': " + e.what());
  }
  return cfg;
}

}  // namespace tfe::cli
