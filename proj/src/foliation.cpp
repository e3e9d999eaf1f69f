#include "tfe/foliation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tfe/error.hpp"

namespace tfe {

namespace {

constexpr std::array<std::pair<EquationId, std::string_view>, 12> kEquationNames = {{
    {EquationId::HC0, "HC0"},
    {EquationId::CONF, "CONF"},
    {EquationId::ER1, "ER1"},
    {EquationId::ER2, "ER2"},
    {EquationId::EM1, "EM1"},
    {EquationId::EM2, "EM2"},
    {EquationId::WAVE, "WAVE"},
    {EquationId::HWC_MINK, "HWC_MINK"},
    {EquationId::LAPLACE, "LAPLACE"},
    {EquationId::HWC_EUCL, "HWC_EUCL"},
    {EquationId::HYP, "HYP"},
    {EquationId::ORTHOG, "ORTHOG"},
}};

}  // namespace

std::string_view to_string(EquationId id) {
  for (const auto& [k, v] : kEquationNames) {
    if (k == id) return v;
  }
  return "?";
}

std::optional<EquationId> equation_from_string(std::string_view s) {
  for (const auto& [k, v] : kEquationNames) {
    if (v == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::kBoundary: return "boundary";
    case StopReason::kSingularMask: return "singular_mask";
    case StopReason::kClosure: return "closure";
    case StopReason::kStepLimit: return "step_limit";
  }
  return "?";
}

DirectionFn as_direction_fn(const VectorField& f) {
  return [f](const Vec3& x) {
    FieldSample s = f(x);
    if (s.status == FieldSample::kOutside) throw DomainError("point lies outside the field domain");
    if (s.status == FieldSample::kMasked) throw DomainError("point lies in a masked cell");
    return s.U;
  };
}

VectorField as_vector_field(const DirectionFn& f) {
  return [f](const Vec3& x) {
    try {
      Vec3 u = f(x);
      if (!u.allFinite()) return FieldSample{FieldSample::kMasked, Vec3::Zero()};
      return FieldSample{FieldSample::kOk, u};
    } catch (const DomainError&) {
      return FieldSample{FieldSample::kMasked, Vec3::Zero()};
    }
  };
}

SampledDirectionField::SampledDirectionField(DirectionField field) : field_(std::move(field)) {
  if (field_.slice.kind == SliceKind::Minkowski) throw DomainError("direction field needs an R3 slice");
  bool any = std::any_of(field_.state.begin(), field_.state.end(), [](uint8_t s) { return s == kAssigned; });
  if (!any) throw DomainError("direction field has no usable nodes");
}

SampledDirectionField direction_field_r3(const DirectionField& field) { return SampledDirectionField(field); }

Direction3 SampledDirectionField::node_direction(size_t n) const {
  if (!field_.usable(n)) throw DomainError("node is not assigned");
  return mu_to_direction(field_.mu[n]);
}

std::optional<ExtendedComplex> SampledDirectionField::mu_at(const Vec3& x) const {
  const Grid3& g = field_.grid;
  if (!g.contains(x)) return std::nullopt;
  auto shape = g.shape();
  std::array<int, 3> c;
  std::array<double, 3> fr;
  for (int a = 0; a < 3; ++a) {
    if (shape[a] < 2) return std::nullopt;
    double u = (x[a] - g.axes[a].min) / g.axes[a].step;
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, shape[a] - 2);
    c[a] = i;
    fr[a] = u - i;
  }
  std::array<ExtendedComplex, 8> v;
  bool big = false, has_zero = false;
  for (int m = 0; m < 8; ++m) {
    size_t n = g.index(c[0] + (m >> 2 & 1), c[1] + (m >> 1 & 1), c[2] + (m & 1));
    if (!field_.usable(n)) return std::nullopt;
    v[m] = field_.mu[n];
    if (v[m].is_inf()) {
      big = true;
    } else {
      double a = std::abs(v[m].value());
      big = big || a > 1.0;
      has_zero = has_zero || a == 0.0;
    }
  }
  bool inverted = big;
  if (inverted && has_zero) return std::nullopt;
  cplx acc = 0.0;
  for (int m = 0; m < 8; ++m) {
    double w = ((m >> 2 & 1) ? fr[0] : 1.0 - fr[0]) * ((m >> 1 & 1) ? fr[1] : 1.0 - fr[1]) *
               ((m & 1) ? fr[2] : 1.0 - fr[2]);
    ExtendedComplex e = inverted ? v[m].reciprocal() : v[m];
    acc += w * e.value();
  }
  ExtendedComplex r(acc);
  return inverted ? r.reciprocal() : r;
}

FieldSample SampledDirectionField::operator()(const Vec3& x) const {
  if (!field_.grid.contains(x)) return {FieldSample::kOutside, Vec3::Zero()};
  std::optional<ExtendedComplex> mu = mu_at(x);
  if (!mu) return {FieldSample::kMasked, Vec3::Zero()};
  return {FieldSample::kOk, mu_to_direction(*mu).vec()};
}

namespace {

struct StepResult {
  FieldSample::Status status = FieldSample::kOk;
  Vec3 x = Vec3::Zero();
  Vec3 u = Vec3::Zero();
};

StepResult rk4_step(const VectorField& U, const Vec3& x, const Vec3& k1, double h) {
  FieldSample s2 = U(x + 0.5 * h * k1);
  if (s2.status != FieldSample::kOk) return {s2.status};
  FieldSample s3 = U(x + 0.5 * h * s2.U);
  if (s3.status != FieldSample::kOk) return {s3.status};
  FieldSample s4 = U(x + h * s3.U);
  if (s4.status != FieldSample::kOk) return {s4.status};
  Vec3 xn = x + h / 6.0 * (k1 + 2.0 * s2.U + 2.0 * s3.U + s4.U);
  FieldSample sn = U(xn);
  if (sn.status != FieldSample::kOk) return {sn.status};
  return {FieldSample::kOk, xn, sn.U};
}

StopReason reason_for(FieldSample::Status s) {
  return s == FieldSample::kOutside ? StopReason::kBoundary : StopReason::kSingularMask;
}

}  // namespace

Leaf trace_leaf(const VectorField& U, const Vec3& seed, const TraceOptions& opt) {
  if (!(opt.step > 0.0) || !(opt.max_len > 0.0)) throw DomainError("step and length must be positive");
  FieldSample s0 = U(seed);
  if (s0.status != FieldSample::kOk) throw DomainError("seed is outside the field domain or masked");

  Leaf leaf;
  leaf.points.push_back(seed);
  leaf.arclength.push_back(0.0);
  const Vec3 u_start = s0.U;
  const double s_min = std::max(10.0 * opt.step, 20.0 * opt.closure_tol);
  Vec3 x = seed;
  Vec3 ux = s0.U;
  double s = 0.0;

  while (true) {
    double rem = opt.max_len - s;
    if (rem <= 1e-12 * opt.max_len) {
      leaf.stop_reason = StopReason::kStepLimit;
      return leaf;
    }
    double h = opt.step;
    int halvings = 0;
    StepResult r;
    double hh = 0.0;
    bool final_step = false;
    while (true) {
      hh = h;
      final_step = false;
      if (rem < hh + 0.25 * opt.step) {
        hh = rem;
        final_step = true;
      }
      r = rk4_step(U, x, ux, hh);
      if (r.status != FieldSample::kOk) {
        if (halvings < opt.max_halvings) {
          h *= 0.5;
          ++halvings;
          continue;
        }
        leaf.stop_reason = reason_for(r.status);
        return leaf;
      }
      double angle = std::acos(std::clamp(ux.dot(r.u), -1.0, 1.0));
      if (angle > opt.angle_cap && halvings < opt.max_halvings) {
        h *= 0.5;
        ++halvings;
        continue;
      }
      break;
    }

    if (s + hh > s_min) {
      Vec3 seg = r.x - x;
      double len2 = seg.squaredNorm();
      double tau = len2 > 0.0 ? std::clamp((seed - x).dot(seg) / len2, 0.0, 1.0) : 0.0;
      double dist = (x + tau * seg - seed).norm();
      if (tau > 0.0 && dist < opt.closure_tol && r.u.dot(u_start) > opt.closure_dot) {
        double l = tau * hh;
        Vec3 from = x;
        Vec3 ufrom = ux;
        double sfrom = s;
        if (l < 0.25 * opt.step && leaf.points.size() >= 2) {
          // merge with the previous step to keep point spacing regular
          leaf.points.pop_back();
          leaf.arclength.pop_back();
          from = leaf.points.back();
          sfrom = leaf.arclength.back();
          ufrom = U(from).U;
          l += s - sfrom;
        }
        StepResult c = rk4_step(U, from, ufrom, l);
        if (c.status == FieldSample::kOk) {
          leaf.points.push_back(c.x);
          leaf.arclength.push_back(sfrom + l);
          leaf.closed = (c.x - seed).norm() < opt.closure_tol;
          leaf.stop_reason = StopReason::kClosure;
          return leaf;
        }
      }
    }

    leaf.points.push_back(r.x);
    s += hh;
    leaf.arclength.push_back(s);
    x = r.x;
    ux = r.u;
    if (final_step) {
      leaf.stop_reason = StopReason::kStepLimit;
      return leaf;
    }
  }
}

Direction3 associated_field(const DirectionFn& U0, double t, const Vec3& p, const AssociatedOptions& opt) {
  if (t == 0.0) return Direction3(U0(p));
  Vec3 W = U0(p);
  auto residual = [&](const Vec3& w) { return Vec3(w - U0(p - t * w)); };
  int it = 0;
  for (; it < opt.max_iter && it < opt.newton_after; ++it) {
    Vec3 F = residual(W);
    if (F.norm() < opt.tol) return Direction3(W);
    W -= opt.damping * F;
  }
  for (; it < opt.max_iter; ++it) {
    Vec3 F = residual(W);
    if (F.norm() < opt.tol) return Direction3(W);
    Vec3 q = p - t * W;
    Eigen::Matrix3d D;
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e[j] = opt.jacobian_h;
      D.col(j) = (U0(q + e) - U0(q - e)) / (2.0 * opt.jacobian_h);
    }
    Eigen::Matrix3d J = Eigen::Matrix3d::Identity() + t * D;
    Vec3 dW = J.colPivHouseholderQr().solve(-F);
    if (!dW.allFinite()) break;
    W += dW;
  }
  throw ConvergenceError("associated field did not converge at this point");
}

ResidualSample shear_residual(const DirectionFn& U, const Vec3& p, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  Direction3 u(U(p));
  Frame fr = frame_from_direction(u);
  Vec3 X = fr.e2;
  Vec3 Y = jperp_rotate(u, X);
  Vec3 dX = (U(p + h * X) - U(p - h * X)) / (2.0 * h);
  Vec3 dY = (U(p + h * Y) - U(p - h * Y)) / (2.0 * h);
  Vec3 r = dY - u.vec().cross(dX);
  r -= r.dot(u.vec()) * u.vec();
  return {EquationId::CONF, {p[0], p[1], p[2]}, h, r.norm()};
}

ResidualSample hwc3_residual(const std::function<cplx(const Vec3&)>& f, const Vec3& p, double h) {
  ScalarField g = [&f](std::span<const double> x) { return f(Vec3(x[0], x[1], x[2])); };
  auto grad = fd_gradient(g, Stencil::full({p[0], p[1], p[2]}, h));
  cplx s = grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2];
  return {EquationId::HC0, {p[0], p[1], p[2]}, h, std::abs(s)};
}

}  // namespace tfe
