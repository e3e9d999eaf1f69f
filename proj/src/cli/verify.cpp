#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "tfe/cli.hpp"
#include "tfe/error.hpp"

namespace tfe::cli {

namespace {

constexpr double kProbeSpacing = 0.05;
constexpr double kRootSeparation = 0.2;
constexpr double kBudgetFraction = 0.05;
constexpr double kMinOrder = 1.8;
constexpr double kNoiseFactor = 50.0;
constexpr double kMaxValue = 1e3;
constexpr int kDrawsPerPoint = 2000;

double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// One scalar quantity a check differentiates, with the data needed to
// judge whether central differences resolve it at this point.
struct Probe {
  ScalarField f;
  RealPoint y;
  std::vector<int> axes;
  int order = 1;  // highest derivative taken by the check
  double tol = 0.0;
};

// Finite-difference budget: estimated truncation of the check's derivatives
// from third and fourth differences at a coarse spacing.
bool probe_ok(const Probe& p, double h) {
  cplx c = evaluate_at(p.f, p.y);
  double mag = std::abs(c);
  if (!std::isfinite(mag) || mag > kMaxValue) return false;
  const double d = kProbeSpacing;
  for (int ax : p.axes) {
    std::array<cplx, 5> v;
    RealPoint x = p.y;
    for (int k = -2; k <= 2; ++k) {
      x[ax] = p.y[ax] + k * d;
      v[k + 2] = evaluate_at(p.f, x);
      if (!std::isfinite(std::abs(v[k + 2]))) return false;
    }
    double d3 = std::abs(v[4] - 2.0 * v[3] + 2.0 * v[1] - v[0]) / (2.0 * d * d * d);
    double d4 = std::abs(v[4] - 4.0 * v[3] + 6.0 * v[2] - 4.0 * v[1] + v[0]) / (d * d * d * d);
    double budget = kBudgetFraction * p.tol;
    if (h * h / 6.0 * d3 * (1.0 + mag) > budget) return false;
    if (p.order >= 2 && h * h / 12.0 * d4 * (1.0 + mag) > budget) return false;
  }
  return true;
}

bool roots_separated(const TwistorSurface& s, const NullCoords& p) {
  std::vector<ExtendedComplex> roots;
  try {
    roots = solve_mu(kerr_polynomial(s, p));
  } catch (const FiberContainedError&) {
    return false;
  }
  for (size_t i = 0; i < roots.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (chordal_distance(roots[i], roots[j]) < kRootSeparation) return false;
    }
  }
  return true;
}

struct Check {
  std::string name;
  std::function<std::vector<ResidualSample>(double h)> eval;
  Probe probe;
  double scale = 1.0;  // magnitude entering the roundoff estimate
};

struct PointResult {
  bool admissible = false;
  std::vector<ReportRow> rows;
  std::vector<std::string> failures;
};

std::string point_text(const RealPoint& y) {
  std::string s = "(";
  for (size_t i = 0; i < y.size(); ++i) s += (i ? "," : "") + fmt(y[i]);
  return s + ")";
}

class PointEvaluator {
 public:
  PointEvaluator(const RunConfig& cfg, const Model& model, std::vector<std::string> checks)
      : cfg_(cfg), model_(model), checks_(std::move(checks)) {}

  PointResult evaluate(const Vec3& x) const {
    PointResult out;
    try {
      std::vector<Check> list = build(x);
      for (const Check& c : list) {
        if (!probe_ok(c.probe, cfg_.h)) return out;
      }
      out.admissible = true;
      for (const Check& c : list) run_check(c, out);
    } catch (const std::exception&) {
      out = PointResult{};
    }
    return out;
  }

 private:
  // mu at a slice point, in the chart where it is bounded by 1 at the center.
  struct MuSetup {
    std::function<ExtendedComplex(std::span<const double>)> mu;
    ScalarField chart;
    double scale = 1.0;
  };

  MuSetup mu_on(const SliceSpec& slice, const RealPoint& y) const {
    NullCoords p0 = slice.point(y[0], y[1], y[2], y[3]);
    if (model_.surface && !roots_separated(*model_.surface, p0)) throw DomainError("roots too close");
    std::optional<ExtendedComplex> anchor;
    if (!model_.closed_form_mu()) anchor = model_.mu(p0, std::nullopt);
    auto mu = [m = model_.mu, slice, anchor](std::span<const double> v) {
      return m(slice.point(v[0], v[1], v[2], v[3]), anchor);
    };
    ExtendedComplex c = mu(y);
    bool inverted = c.is_inf() || std::abs(c.value()) > 1.0;
    ScalarField chart = [mu, inverted](std::span<const double> v) {
      ExtendedComplex e = mu(v);
      if (inverted) e = e.reciprocal();
      if (e.is_inf()) throw DomainError("pole");
      return e.value();
    };
    ExtendedComplex cc = inverted ? c.reciprocal() : c;
    return {mu, chart, cc.is_inf() ? 1.0 : std::abs(cc.value())};
  }

  ScalarField phi_on(const SliceSpec& slice, cplx a0, const RealPoint& y) const {
    NullCoords p0 = slice.point(y[0], y[1], y[2], y[3]);
    if (model_.surface && !roots_separated(*model_.surface, p0)) throw DomainError("roots too close");
    std::optional<ExtendedComplex> anchor;
    if (!model_.closed_form_mu()) anchor = model_.mu(p0, std::nullopt);
    return [phi = model_.phi, slice, a0, anchor](std::span<const double> v) {
      return phi(a0, slice.point(v[0], v[1], v[2], v[3]), anchor);
    };
  }

  std::vector<Check> build(const Vec3& x) const {
    std::vector<Check> list;
    const SliceSpec r4 = SliceSpec::real_r4(cfg_.a);
    const SliceSpec mk = SliceSpec::minkowski(cfg_.a);
    const SliceSpec r3 = SliceSpec::r3_at_time(cfg_.t, cfg_.a);
    const RealPoint y_r4{cfg_.x0, x[0], x[1], x[2]};
    const RealPoint y_mk{cfg_.t, x[0], x[1], x[2]};
    const RealPoint y_0{0.0, x[0], x[1], x[2]};
    const std::vector<int> all{0, 1, 2, 3}, spatial{1, 2, 3};
    for (const std::string& name : checks_) {
      double tol = cfg_.tolerance_for(name);
      Check c;
      c.name = name;
      if (name == "ER" || name == "EM") {
        bool euclid = name == "ER";
        MuSetup s = mu_on(euclid ? r4 : mk, euclid ? y_r4 : y_mk);
        RealPoint y = euclid ? y_r4 : y_mk;
        SliceKind kind = euclid ? SliceKind::RealR4 : SliceKind::Minkowski;
        c.eval = [mu = s.mu, kind, y](double hh) {
          auto pr = mu_residuals(mu, kind, y, hh);
          return std::vector<ResidualSample>{pr.first, pr.second};
        };
        c.probe = Probe{s.chart, y, all, 1, tol};
        c.scale = (1.0 + s.scale) * (1.0 + s.scale);
      } else if (name == "LAPLACE" || name == "HWC_EUCL" || name == "WAVE" || name == "HWC_MINK") {
        bool euclid = name == "LAPLACE" || name == "HWC_EUCL";
        bool second = name == "LAPLACE" || name == "WAVE";
        RealPoint y = euclid ? y_r4 : y_mk;
        MuSetup s = mu_on(euclid ? r4 : mk, y);
        EquationId id = *equation_from_string(name);
        c.eval = [f = s.chart, id, y](double hh) { return std::vector<ResidualSample>{pde_residual(f, id, y, hh)}; };
        c.probe = Probe{s.chart, y, all, second ? 2 : 1, tol};
        c.scale = (1.0 + s.scale) * (1.0 + s.scale);
      } else if (name == "CONF") {
        DirectionFn U;
        ScalarField probe_f;
        if (model_.direction) {
          U = model_.direction;
          probe_f = [U](std::span<const double> v) {
            Vec3 u = U(Vec3(v[1], v[2], v[3]));
            return cplx(u[1], u[2]);
          };
        } else {
          MuSetup s = mu_on(r3, y_0);
          auto mu = s.mu;
          U = [mu](const Vec3& p) {
            double v[4] = {0.0, p[0], p[1], p[2]};
            return mu_to_direction(mu(std::span<const double>(v, 4))).vec();
          };
          probe_f = s.chart;
        }
        Vec3 p = x;
        c.eval = [U, p](double hh) { return std::vector<ResidualSample>{shear_residual(U, p, hh)}; };
        c.probe = Probe{probe_f, y_0, spatial, 1, tol};
        c.scale = 1.0;
      } else {
        EquationId id = *equation_from_string(name);
        ScalarField f;
        RealPoint y;
        if (name == "HC0") {
          y = y_0;
          f = phi_on(r3, r3.base()[0], y);
        } else if (name == "HYP") {
          y = y_r4;
          f = phi_on(r4, cfg_.a[0], y);
        } else {
          y = y_0;
          f = phi_on(r4, cfg_.a[0], y);
        }
        c.eval = [f, id, y](double hh) { return std::vector<ResidualSample>{pde_residual(f, id, y, hh)}; };
        c.probe = Probe{f, y, name == "HC0" ? spatial : all, name == "HYP" ? 2 : 1, tol};
        double m = std::abs(evaluate_at(f, y));
        c.scale = (1.0 + m) * (1.0 + m) * (1.0 + std::abs(y[0]));
      }
      list.push_back(std::move(c));
    }
    return list;
  }

  void run_check(const Check& c, PointResult& out) const {
    const double h = cfg_.h;
    const double tol = cfg_.tolerance_for(c.name);
    std::vector<ResidualSample> full = c.eval(h);
    std::vector<ResidualSample> half = c.eval(h / 2.0);
    const int k = c.probe.order;
    const double noise = kNoiseFactor * 4.0 * std::numeric_limits<double>::epsilon() * c.scale /
                         std::pow(h / 2.0, k);
    for (size_t i = 0; i < full.size(); ++i) {
      double order = std::numeric_limits<double>::quiet_NaN();
      if (half[i].value > noise) order = order_estimate(full[i].value, half[i].value);
      std::string eq(to_string(full[i].id));
      out.rows.push_back({eq, full[i].point, full[i].h, full[i].value, order});
      out.rows.push_back({eq, half[i].point, half[i].h, half[i].value, order});
      for (const ResidualSample* r : {&full[i], &half[i]}) {
        if (!(r->value < tol)) {
          out.failures.push_back(eq + " at " + point_text(r->point) + " h=" + fmt(r->h) + ": residual " +
                                 fmt(r->value) + " exceeds " + fmt(tol));
        }
      }
      if (std::isfinite(order) && order < kMinOrder) {
        out.failures.push_back(eq + " at " + point_text(full[i].point) + ": order estimate " + fmt(order) +
                               " below " + fmt(kMinOrder));
      }
    }
  }

  const RunConfig& cfg_;
  const Model& model_;
  std::vector<std::string> checks_;
};

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("TFE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

VerifyResult run_verification(const RunConfig& cfg, const Model& model) {
  std::vector<std::string> supported = model.supported_checks();
  std::vector<std::string> checks;
  if (cfg.checks.empty()) {
    checks = supported;
  } else {
    for (const std::string& c : check_names()) {
      if (std::find(cfg.checks.begin(), cfg.checks.end(), c) == cfg.checks.end()) continue;
      if (std::find(supported.begin(), supported.end(), c) == supported.end()) {
        throw ConfigError("--checks: " + c + " is not available for surface '" + model.name + "'");
      }
      checks.push_back(c);
    }
  }
  if (checks.empty()) throw ConfigError("--checks: nothing to verify for surface '" + model.name + "'");

  PointEvaluator evaluator(cfg, model, checks);
  std::mt19937_64 rng(cfg.rng_seed);
  const int threads = thread_count();
  const size_t batch = static_cast<size_t>(std::max(16, 4 * threads));
  const long long max_draws = static_cast<long long>(cfg.points) * kDrawsPerPoint;
  VerifyResult result;
  long long drawn = 0;
  while (result.points < cfg.points && drawn < max_draws) {
    std::vector<Vec3> cand(batch);
    for (Vec3& v : cand) {
      for (int a = 0; a < 3; ++a) v[a] = cfg.grid[a].min + uniform53(rng) * (cfg.grid[a].max - cfg.grid[a].min);
    }
    drawn += static_cast<long long>(batch);
    std::vector<PointResult> res(batch);
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next++; i < batch; i = next++) res[i] = evaluator.evaluate(cand[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (PointResult& r : res) {
      if (result.points >= cfg.points) break;
      ++result.draws;
      if (!r.admissible) continue;
      ++result.points;
      for (auto& row : r.rows) result.rows.push_back(std::move(row));
      for (auto& f : r.failures) result.failures.push_back(std::move(f));
    }
  }
  if (result.points < cfg.points) {
    throw DomainError("found only " + std::to_string(result.points) + " admissible sample points out of " +
                      std::to_string(cfg.points) + " requested");
  }
  return result;
}

}  // namespace tfe::cli
