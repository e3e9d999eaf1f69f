#include <algorithm>
#include <atomic>
#include <thread>

#include "tfe/cli.hpp"
#include "tfe/error.hpp"

namespace tfe::cli {

namespace {

namespace fs = std::filesystem;

Grid3 grid_of(const RunConfig& cfg) {
  Grid3 g{cfg.grid};
  try {
    g.validate();
  } catch (const FormatError& e) {
    throw ConfigError(std::string("--grid: ") + e.what());
  }
  return g;
}

std::vector<Vec3> seeds_or_default(const RunConfig& cfg, const Grid3& g) {
  if (!cfg.seeds.empty()) return cfg.seeds;
  Vec3 preferred(0.0, 1.0, 0.0);
  if (g.contains(preferred)) return {preferred};
  auto s = g.shape();
  return {g.node(s[0] / 2, s[1] / 2, s[2] / 2)};
}

DirectionField solve_field(const RunConfig& cfg, const Model& model, const std::vector<Vec3>& points) {
  if (!model.surface) throw ConfigError("--surface: '" + model.name + "' has no twistor surface to solve");
  Grid3 grid = grid_of(cfg);
  SliceSpec slice = SliceSpec::r3_at_time(cfg.t, cfg.a);
  std::vector<FieldSeed> seeds;
  for (const Vec3& p : points) {
    ExtendedComplex mu = model.mu(slice.spatial_point(p), std::nullopt);
    seeds.push_back({p, mu, model.branch});
  }
  return field_over_grid(*model.surface, slice, grid, seeds);
}

void write_manifest(const RunConfig& cfg) { write_text(fs::path(cfg.out) / "manifest.json", manifest_json(cfg)); }

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Model model = resolve_model(cfg);
  Grid3 grid = grid_of(cfg);
  DirectionField field = solve_field(cfg, model, seeds_or_default(cfg, grid));
  size_t assigned = 0, singular = 0;
  for (uint8_t s : field.state) {
    assigned += s == kAssigned;
    singular += s == kSingular;
  }
  write_mu_csv(fs::path(cfg.out) / "mu.csv", field);
  write_manifest(cfg);
  out << "solve: " << field.grid.size() << " nodes, " << assigned << " assigned, " << singular << " singular, "
      << field.grid.size() - assigned - singular << " unreached\n";
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.seeds.empty()) {
    err << "trace: no seed points given\n";
    return kExitRuntime;
  }
  Model model = resolve_model(cfg);
  Grid3 grid = grid_of(cfg);
  VectorField U;
  std::optional<SampledDirectionField> sampled;
  if (model.direction) {
    auto dir = model.direction;
    U = [dir, grid](const Vec3& x) {
      if (!grid.contains(x)) return FieldSample{FieldSample::kOutside, Vec3::Zero()};
      return as_vector_field(dir)(x);
    };
  } else if (cfg.sampled || !model.closed_form_mu()) {
    sampled.emplace(solve_field(cfg, model, cfg.seeds));
    U = [&sampled](const Vec3& x) { return (*sampled)(x); };
  } else {
    SliceSpec slice = SliceSpec::r3_at_time(cfg.t, cfg.a);
    auto mu = model.mu;
    DirectionFn f = [mu, slice](const Vec3& x) { return mu_to_direction(mu(slice.spatial_point(x), std::nullopt)).vec(); };
    VectorField vf = as_vector_field(f);
    U = [vf, grid](const Vec3& x) {
      if (!grid.contains(x)) return FieldSample{FieldSample::kOutside, Vec3::Zero()};
      return vf(x);
    };
  }
  TraceOptions opt;
  opt.step = cfg.step;
  opt.max_len = cfg.max_len;

  const size_t n = cfg.seeds.size();
  std::vector<std::optional<Leaf>> traced(n);
  std::vector<std::string> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        traced[i] = trace_leaf(U, cfg.seeds[i], opt);
      } catch (const DomainError& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(thread_count(), static_cast<int>(n)); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<Leaf> leaves;
  for (size_t i = 0; i < n; ++i) {
    if (!traced[i]) {
      err << "trace: seed " << i << " skipped: " << errors[i] << "\n";
      continue;
    }
    const Leaf& l = *traced[i];
    out << "leaf " << leaves.size() << ": " << l.points.size() << " points, length " << fmt(l.arclength.back())
        << ", " << to_string(l.stop_reason) << (l.closed ? ", closed" : "") << "\n";
    leaves.push_back(l);
  }
  if (leaves.empty()) {
    err << "trace: every seed was invalid\n";
    return kExitRuntime;
  }
  write_leaves_csv(fs::path(cfg.out) / "leaves.csv", leaves);
  write_leaves_svg(fs::path(cfg.out) / "leaves.svg", leaves, cfg.plane);
  write_manifest(cfg);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Model model = resolve_model(cfg);
  grid_of(cfg);
  VerifyResult r = run_verification(cfg, model);
  write_report_csv(fs::path(cfg.out) / "report.csv", r.rows);
  write_manifest(cfg);
  out << "verify: " << r.points << " points (" << r.draws << " drawn), " << r.rows.size() << " residual rows, " << r.failures.size()
      << " failures\n";
  if (r.failures.empty()) return kExitOk;
  const size_t shown = std::min<size_t>(r.failures.size(), 20);
  for (size_t i = 0; i < shown; ++i) err << "FAIL " << r.failures[i] << "\n";
  if (shown < r.failures.size()) err << "... " << r.failures.size() - shown << " more\n";
  return kExitVerify;
}

int cmd_list_examples(std::ostream& out) {
  out << "villarceau[:s]    linear surface s w1 + w3, circles of Villarceau (default s = 1)\n"
         "radial            w0 w3 - w1 w2, radial lines\n"
         "circles           w0 w3 + w1 w2, circles round the x1-axis and their involute family\n"
         "rotsym            w0 w1 + w2 w3, rotationally symmetric foliation\n"
         "cubic             w1 w2^2 + i w0^2 w3\n"
         "perturbed-radial  radial mu plus 0.1 z1~ (fails the first-order system)\n"
         "sheared           U = normalize(1, x2, 0) (fails the shear-free check)\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    std::optional<RunConfig> cfg = parse_args(argc, argv, out);
    if (!cfg) return kExitOk;
    if (cfg->command == "list-examples") return cmd_list_examples(out);
    if (cfg->command == "solve") return cmd_solve(*cfg, out, err);
    if (cfg->command == "trace") return cmd_trace(*cfg, out, err);
    if (cfg->command == "verify") return cmd_verify(*cfg, out, err);
    err << "error: unknown command\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace tfe::cli
