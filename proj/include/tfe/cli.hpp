#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfe/foliation.hpp"
#include "tfe/morphism.hpp"
#include "tfe/surface.hpp"

namespace tfe::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitVerify = 2, kExitRuntime = 3 };

// Invalid command line or manifest; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string surface = "radial";  // built-in or pseudo-model, optionally "name:param"
  std::string surface_file;        // overrides surface when set
  double t = 0.0;
  C4 a{};
  std::array<GridAxis, 3> grid{GridAxis{-2.0, 2.0, 0.25}, GridAxis{-2.0, 2.0, 0.25}, GridAxis{-2.0, 2.0, 0.25}};
  std::vector<Vec3> seeds;
  std::string branch = "+";
  std::vector<std::string> checks;  // empty: every check the model supports
  double tol = 1e-5;
  std::map<std::string, double> tolerances;  // per check, overrides tol
  double h = 1e-3;
  int points = 50;
  double x0 = 0.5;
  uint64_t rng_seed = 1;
  double step = 0.01;
  double max_len = 20.0;
  std::string plane = "x2x3";
  bool sampled = false;  // trace through the interpolated grid field
  std::string out = ".";

  // Throws ConfigError.
  void validate() const;
  double tolerance_for(const std::string& check) const;
};

// Parses argv (subcommand first). Throws ConfigError; returns nullopt after --help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

std::string manifest_json(const RunConfig& cfg);
RunConfig config_from_manifest(const std::string& text);

// Checks understood by verify, in report order.
const std::vector<std::string>& check_names();

/*!
 * What a --surface argument resolves to: a direction parameter mu on C^4
 * (optionally anchored to a nearby root) and, where a chart exists, phi_a.
 */
struct Model {
  std::string name;
  std::optional<Builtin> builtin;
  std::optional<TwistorSurface> surface;
  int branch = 0;
  // mu at p; anchor picks the nearest root for surfaces without closed forms.
  std::function<ExtendedComplex(const NullCoords&, std::optional<ExtendedComplex>)> mu;
  std::function<cplx(cplx a0, const NullCoords&, std::optional<ExtendedComplex>)> phi;
  // Direction field given directly on R3 (no mu).
  std::function<Vec3(const Vec3&)> direction;

  bool has_mu() const { return static_cast<bool>(mu); }
  bool has_phi() const { return static_cast<bool>(phi); }
  bool closed_form_mu() const { return builtin && builtin->mu; }
  std::vector<std::string> supported_checks() const;
};

// Throws ConfigError on unknown names or unreadable surface files.
Model resolve_model(const RunConfig& cfg);
int parse_branch(const std::string& s);

// Fixed 17-significant-digit, locale-independent formatting.
std::string fmt(double v);

struct ReportRow {
  std::string equation;
  RealPoint point;
  double h = 0.0;
  double value = 0.0;
  double order = 0.0;
};

struct VerifyResult {
  std::vector<ReportRow> rows;
  std::vector<std::string> failures;
  int points = 0;
  long long draws = 0;  // candidates examined, admissible or not
};

// Samples admissible points and evaluates every requested check at h and h/2.
VerifyResult run_verification(const RunConfig& cfg, const Model& model);

// Worker count from TFE_THREADS (default: hardware concurrency).
int thread_count();

void write_mu_csv(const std::filesystem::path& path, const DirectionField& field);
void write_leaves_csv(const std::filesystem::path& path, const std::vector<Leaf>& leaves);
void write_leaves_svg(const std::filesystem::path& path, const std::vector<Leaf>& leaves, const std::string& plane);
void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_list_examples(std::ostream& out);

// Full entry point: parses, dispatches and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tfe::cli
