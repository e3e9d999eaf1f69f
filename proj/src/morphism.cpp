#include "tfe/morphism.hpp"

#include <algorithm>
#include <cmath>

#include "tfe/error.hpp"

namespace tfe {

namespace {

void require_4(const RealPoint& y) {
  if (y.size() != 4) throw std::invalid_argument("slice point needs four coordinates");
}

}  // namespace

std::pair<ResidualSample, ResidualSample> mu_residuals(const MuField& mu, SliceKind kind, const RealPoint& y,
                                                       double h) {
  require_4(y);
  if (kind == SliceKind::R3) throw DomainError("first-order system needs a four-dimensional slice");
  ExtendedComplex c = mu(std::span<const double>(y));
  const bool inverted = c.is_inf() || std::abs(c.value()) > 1.0;
  ScalarField g = [&mu, inverted](std::span<const double> x) {
    ExtendedComplex v = mu(x);
    if (inverted) v = v.reciprocal();
    if (v.is_inf()) throw DomainError("direction parameter has a pole in the chosen chart");
    return v.value();
  };
  cplx m = evaluate_at(g, y);
  std::vector<cplx> d = fd_gradient(g, Stencil::full(y, h));
  const cplx dz2 = 0.5 * (d[2] - kI * d[3]);
  const cplx dzt2 = 0.5 * (d[2] + kI * d[3]);
  cplx r1, r2;
  EquationId id1, id2;
  if (kind == SliceKind::RealR4) {
    const cplx dz1 = 0.5 * (d[0] - kI * d[1]);
    const cplx dzt1 = 0.5 * (d[0] + kI * d[1]);
    id1 = EquationId::ER1;
    id2 = EquationId::ER2;
    if (!inverted) {
      r1 = dzt1 - m * dz2;
      r2 = dzt2 + m * dz1;
    } else {
      r1 = m * dzt1 - dz2;
      r2 = m * dzt2 + dz1;
    }
  } else {
    const cplx dv = 0.5 * (d[1] - d[0]);
    const cplx dvp = 0.5 * (d[1] + d[0]);
    id1 = EquationId::EM1;
    id2 = EquationId::EM2;
    if (!inverted) {
      r1 = kI * dvp - m * dz2;
      r2 = dzt2 - kI * m * dv;
    } else {
      r1 = kI * m * dvp - dz2;
      r2 = m * dzt2 - kI * dv;
    }
  }
  return {ResidualSample{id1, y, h, std::abs(r1)}, ResidualSample{id2, y, h, std::abs(r2)}};
}

ResidualSample pde_residual(const ScalarField& phi, EquationId which, const RealPoint& y, double h) {
  require_4(y);
  Stencil s = Stencil::full(y, h);
  cplx r = 0.0;
  switch (which) {
    case EquationId::LAPLACE: {
      for (const cplx& v : fd_second(phi, s)) r += v;
      break;
    }
    case EquationId::WAVE: {
      auto d2 = fd_second(phi, s);
      r = -d2[0] + d2[1] + d2[2] + d2[3];
      break;
    }
    case EquationId::HWC_EUCL: {
      for (const cplx& v : fd_gradient(phi, s)) r += v * v;
      break;
    }
    case EquationId::HWC_MINK: {
      auto d = fd_gradient(phi, s);
      r = -d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
      break;
    }
    case EquationId::HYP: {
      auto d2 = fd_second(phi, s);
      Stencil s0{y, h, {0}};
      cplx d0 = fd_gradient(phi, s0)[0];
      r = y[0] * (d2[0] + d2[1] + d2[2] + d2[3]) - 2.0 * d0;
      break;
    }
    case EquationId::ORTHOG: {
      r = fd_gradient(phi, Stencil{y, h, {0}})[0];
      break;
    }
    case EquationId::HC0: {
      for (const cplx& v : fd_gradient(phi, Stencil{y, h, {1, 2, 3}})) r += v * v;
      break;
    }
    default:
      throw std::invalid_argument("equation " + std::string(to_string(which)) + " is not a scalar check");
  }
  return {which, y, h, std::abs(r)};
}

ExtendedComplex select_root(const Builtin& b, const NullCoords& p, int branch,
                            std::optional<ExtendedComplex> anchor) {
  if (b.mu) return b.mu(p, branch);
  std::vector<ExtendedComplex> roots;
  try {
    roots = solve_mu(kerr_polynomial(b.surface, p));
  } catch (const FiberContainedError&) {
    throw DomainError("point lies on the branch locus: surface contains the fiber");
  }
  if (anchor) {
    auto best = std::min_element(roots.begin(), roots.end(), [&](const auto& u, const auto& v) {
      return chordal_distance(u, *anchor) < chordal_distance(v, *anchor);
    });
    return *best;
  }
  std::sort(roots.begin(), roots.end(), [](const ExtendedComplex& u, const ExtendedComplex& v) {
    if (u.is_inf() != v.is_inf()) return v.is_inf();
    if (u.is_inf()) return false;
    cplx a = u.value(), c = v.value();
    return a.real() != c.real() ? a.real() < c.real() : a.imag() < c.imag();
  });
  if (branch < 0 || branch >= static_cast<int>(roots.size())) throw DomainError("branch index out of range");
  return roots[branch];
}

cplx eval_phi_a(const Builtin& b, const C4& a, const NullCoords& p, int branch,
                std::optional<ExtendedComplex> anchor) {
  ExtendedComplex mu = select_root(b, p, branch, anchor);
  if (mu.is_inf()) throw DomainError("point lies on the branch locus: fiber point outside the chart");
  TwistorPoint w = fundamental_map(p, 1.0, mu.value());
  ChartParam chart = chart_for(b);
  auto [zeta, eta] = chart.coords(w.w());
  cplx v = solve_superminimal(chart, a[0]).eval(zeta, eta);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("point lies on the branch locus");
  return v;
}

cplx involute_foliation(double t, const Vec3& p) {
  double rho2 = p[1] * p[1] + p[2] * p[2];
  if (!(rho2 > t * t)) throw DomainError("point lies inside the cone x2^2 + x3^2 <= t^2");
  double r = std::sqrt(rho2 - t * t);
  cplx ratio = cplx(r, -t) / cplx(p[1], -p[2]);
  return cplx(r - t * std::arg(ratio), -p[0]);
}

Vec3 involute_direction(double t, const Vec3& p) {
  double rho2 = p[1] * p[1] + p[2] * p[2];
  if (!(rho2 > t * t)) throw DomainError("point lies inside the cone x2^2 + x3^2 <= t^2");
  double r = std::sqrt(rho2 - t * t);
  return Vec3(0.0, -r * p[2] + t * p[1], r * p[1] + t * p[2]) / rho2;
}

}  // namespace tfe
