#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfe/cli.hpp"
#include "tfe/error.hpp"

namespace tfe::cli {

namespace {

std::pair<std::string, std::optional<double>> split_name(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, std::nullopt};
  std::string p = spec.substr(colon + 1);
  char* end = nullptr;
  double v = std::strtod(p.c_str(), &end);
  if (p.empty() || end != p.c_str() + p.size() || !std::isfinite(v)) {
    throw ConfigError("--surface: parameter '" + p + "' is not a finite number");
  }
  return {spec.substr(0, colon), v};
}

Model from_builtin(Builtin b, int branch) {
  if (branch >= b.branches) {
    throw ConfigError("--branch: surface '" + b.name + "' has " + std::to_string(b.branches) + " branches");
  }
  Model m;
  m.name = b.name;
  m.builtin = b;
  m.surface = b.surface;
  m.branch = branch;
  m.mu = [b, branch](const NullCoords& p, std::optional<ExtendedComplex> anchor) {
    return select_root(b, p, branch, anchor);
  };
  m.phi = [b, branch](cplx a0, const NullCoords& p, std::optional<ExtendedComplex> anchor) {
    return eval_phi_a(b, C4{a0, 0.0, 0.0, 0.0}, p, branch, anchor);
  };
  return m;
}

}  // namespace

std::vector<std::string> Model::supported_checks() const {
  std::vector<std::string> out;
  for (const std::string& c : check_names()) {
    bool needs_phi = c == "HC0" || c == "HYP" || c == "ORTHOG";
    if (c == "CONF" && (has_mu() || direction)) out.push_back(c);
    else if (needs_phi && has_phi()) out.push_back(c);
    else if (!needs_phi && c != "CONF" && has_mu()) out.push_back(c);
  }
  return out;
}

Model resolve_model(const RunConfig& cfg) {
  int branch = parse_branch(cfg.branch);
  if (!cfg.surface_file.empty()) {
    Builtin b;
    b.name = "file";
    b.surface = load_surface_file(cfg.surface_file);
    b.branches = b.surface.degree;
    Model m = from_builtin(b, branch);
    m.phi = nullptr;
    return m;
  }
  auto [name, param] = split_name(cfg.surface);
  if (name == "perturbed-radial") {
    Builtin radial = builtin_surface("radial");
    if (branch >= radial.branches) throw ConfigError("--branch: perturbed-radial has 2 branches");
    Model m;
    m.name = name;
    m.branch = branch;
    m.mu = [radial, branch](const NullCoords& p, std::optional<ExtendedComplex>) -> ExtendedComplex {
      ExtendedComplex v = radial.mu(p, branch);
      if (v.is_inf()) return v;
      return v.value() + 0.1 * p.zt1();
    };
    return m;
  }
  if (name == "sheared") {
    Model m;
    m.name = name;
    m.direction = [](const Vec3& x) { return Direction3(1.0, x[1], 0.0).vec(); };
    return m;
  }
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("--surface: unknown surface '" + name + "'");
  }
  try {
    return from_builtin(builtin_surface(name, param.value_or(1.0)), branch);
  } catch (const FormatError& e) {
    throw ConfigError(std::string("--surface: ") + e.what());
  }
}

}  // namespace tfe::cli
