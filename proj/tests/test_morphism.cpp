#include <doctest.h>

#include "oracles.hpp"
#include "tfe/error.hpp"
#include "tfe/morphism.hpp"

using namespace tfe;

namespace {

using oracle::I;

ScalarField on_y(std::function<cplx(double, double, double, double)> f) {
  return [f](std::span<const double> y) { return f(y[0], y[1], y[2], y[3]); };
}

MuField builtin_mu_r4(const Builtin& b, int branch) {
  return [b, branch](std::span<const double> y) { return b.mu(NullCoords::real(y[0], y[1], y[2], y[3]), branch); };
}

// chart points away from the zero sets of zeta, eta and the log cuts
std::pair<cplx, cplx> chart_point(oracle::Rng& rng) {
  cplx z(rng.uniform(0.3, 1.5), rng.uniform(-1.0, 1.0));
  cplx e(rng.uniform(0.3, 1.5), rng.uniform(-1.0, 1.0));
  if (rng.uniform(0, 1) < 0.5) z = -z;
  return {z, e};
}

}  // namespace

TEST_CASE("mu residuals vanish for constants") {
  MuField c = [](std::span<const double>) { return ExtendedComplex(cplx(0.2, 0.7)); };
  for (SliceKind k : {SliceKind::RealR4, SliceKind::Minkowski}) {
    auto [a, b] = mu_residuals(c, k, {0.1, 0.2, 0.3, 0.4}, 1e-3);
    CHECK(a.value == 0.0);
    CHECK(b.value == 0.0);
  }
  MuField big = [](std::span<const double>) { return ExtendedComplex(cplx(5.0, -3.0)); };
  auto [a, b] = mu_residuals(big, SliceKind::RealR4, {0.1, 0.2, 0.3, 0.4}, 1e-3);
  CHECK(a.value == 0.0);
  CHECK(b.value == 0.0);
}

TEST_CASE("radial mu satisfies the Euclidean system") {
  Builtin b = builtin_surface("radial");
  auto [a, c] = mu_residuals(builtin_mu_r4(b, 0), SliceKind::RealR4, {0.3, 0, 2, 0}, 1e-3);
  CHECK(a.id == EquationId::ER1);
  CHECK(c.id == EquationId::ER2);
  CHECK(a.value < 1e-6);
  CHECK(c.value < 1e-6);
  auto [d, e] = mu_residuals(builtin_mu_r4(b, 1), SliceKind::RealR4, {0.3, 0.4, -0.5, 1.0}, 1e-3);
  CHECK(d.value < 1e-6);
  CHECK(e.value < 1e-6);
}

TEST_CASE("shear-free ray on Minkowski space") {
  MuField mu = [](std::span<const double> y) { return ExtendedComplex((y[2] + I * y[3]) / (I * (y[1] + y[0]))); };
  auto [a, b] = mu_residuals(mu, SliceKind::Minkowski, {0, 1, 1, 0}, 5e-4);
  CHECK(a.id == EquationId::EM1);
  CHECK(a.value < 1e-6);
  CHECK(b.value < 1e-6);
  // circles quadric on Minkowski space: (-i t + r)/(x2 - i x3)
  MuField circ = [](std::span<const double> y) {
    double r = std::sqrt(y[2] * y[2] + y[3] * y[3] - y[0] * y[0]);
    return ExtendedComplex((-I * y[0] + r) / (y[2] - I * y[3]));
  };
  auto [c, d] = mu_residuals(circ, SliceKind::Minkowski, {0.4, 0.2, 1.0, 0.7}, 1e-3);
  CHECK(c.value < 1e-6);
  CHECK(d.value < 1e-6);
}

TEST_CASE("perturbed mu fails the system") {
  Builtin b = builtin_surface("radial");
  MuField mu = [b](std::span<const double> y) {
    NullCoords p = NullCoords::real(y[0], y[1], y[2], y[3]);
    return ExtendedComplex(b.mu(p, 0).value() + 0.1 * p.zt1());
  };
  auto [a, c] = mu_residuals(mu, SliceKind::RealR4, {0.5, 0.3, 1.0, 0.2}, 1e-3);
  CHECK(std::max(a.value, c.value) > 1e-2);
}

TEST_CASE("PDE residual examples") {
  RealPoint y{0.3, -0.4, 0.8, 1.2};
  for (auto f : {on_y([](double, double, double x2, double x3) { return x2 + I * x3; }),
                 on_y([](double t, double x1, double, double) { return cplx(x1 - t); })}) {
    CHECK(pde_residual(f, EquationId::WAVE, y, 1e-3).value < 1e-9);
    CHECK(pde_residual(f, EquationId::HWC_MINK, y, 1e-3).value < 1e-12);
  }
  auto circ = on_y([](double x0, double x1, double x2, double x3) {
    return -I * x1 + std::sqrt(x0 * x0 + x2 * x2 + x3 * x3);
  });
  CHECK(pde_residual(circ, EquationId::HYP, {0.5, 0, 1, 1}, 1e-3).value < 1e-6);
  CHECK(pde_residual(circ, EquationId::ORTHOG, {0.0, 0, 1, 1}, 1e-3).value < 1e-12);
  CHECK(pde_residual(circ, EquationId::HC0, {0.0, 0.2, 1, 1}, 1e-3).value < 1e-6);
  // a harmonic, non-conformal function
  auto xy = on_y([](double x0, double x1, double, double) { return cplx(x0 * x1); });
  CHECK(pde_residual(xy, EquationId::LAPLACE, y, 1e-3).value < 1e-9);
  CHECK(pde_residual(xy, EquationId::HWC_EUCL, y, 1e-3).value == doctest::Approx(y[0] * y[0] + y[1] * y[1]).epsilon(1e-6));
  // x0^2 + x1^2: Laplacian 4, wave operator 0
  auto q = on_y([](double x0, double x1, double, double) { return cplx(x0 * x0 + x1 * x1); });
  CHECK(pde_residual(q, EquationId::LAPLACE, y, 1e-3).value == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(pde_residual(q, EquationId::WAVE, y, 1e-3).value < 1e-6);
  CHECK_THROWS(pde_residual(q, EquationId::ER1, y, 1e-3));
}

TEST_CASE("built-in mu fields are complex-harmonic morphisms") {
  oracle::Rng rng(83);
  for (const char* name : {"radial", "circles", "villarceau"}) {
    Builtin b = builtin_surface(name);
    for (int n = 0; n < 10; ++n) {
      RealPoint y{rng.uniform(0.3, 1), rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(-1, 1)};
      // the chart where mu is bounded by 1 at y
      ExtendedComplex m0 = b.mu(NullCoords::real(y[0], y[1], y[2], y[3]), 0);
      const bool inverted = m0.is_inf() || std::abs(m0.value()) > 1.0;
      ScalarField f = [b, inverted](std::span<const double> v) {
        ExtendedComplex m = b.mu(NullCoords::real(v[0], v[1], v[2], v[3]), 0);
        return (inverted ? m.reciprocal() : m).value();
      };
      CHECK(pde_residual(f, EquationId::LAPLACE, y, 1e-3).value < 1e-5);
      CHECK(pde_residual(f, EquationId::HWC_EUCL, y, 1e-3).value < 1e-5);
    }
  }
}

TEST_CASE("charts lie on their surfaces and match numeric contact forms") {
  oracle::Rng rng(89);
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    ChartParam c = chart_for(builtin_surface(name));
    for (int n = 0; n < 50; ++n) {
      auto [z, e] = chart_point(rng);
      cplx a0 = rng.complex(1);
      C4 w = c.eval_w(z, e);
      CHECK(std::abs(c.surface.evaluate(w)) < 1e-10 * (1.0 + c.surface.magnitude(w)));
      auto [tz, te] = c.eval_theta(a0, z, e);
      auto [nz, ne] = theta_numeric(c, a0, z, e);
      CHECK(std::abs(tz - nz) < 1e-8);
      CHECK(std::abs(te - ne) < 1e-8);
      auto [dz, de] = c.eval_dw(z, e);
      CHECK(std::abs(tz - oracle::theta(a0, w, dz)) < 1e-12);
      CHECK(std::abs(te - oracle::theta(a0, w, de)) < 1e-12);
      auto [cz, ce] = c.coords(w);
      CHECK(std::abs(cz - z) < 1e-12);
      CHECK(std::abs(ce - e) < 1e-12);
    }
  }
}

TEST_CASE("closed-form superminimal solutions") {
  oracle::Rng rng(97);
  for (int n = 0; n < 20; ++n) {
    auto [z, e] = chart_point(rng);
    cplx a0 = rng.complex(0.5);
    double s = 1.0;
    auto v = solve_superminimal(chart_for(builtin_surface("villarceau", s)), a0);
    CHECK(v.closed_form);
    CHECK(std::abs(v.eval(z, e) - (-(-2.0 * a0 + e - s) / z)) < 1e-12);
    auto c = solve_superminimal(chart_for(builtin_surface("circles")), a0);
    CHECK(std::abs(c.eval(z, e) - (z - a0 * std::log(e))) < 1e-12);
    auto r = solve_superminimal(chart_for(builtin_surface("rotsym")), 0.0);
    CHECK(std::abs(r.eval(z, e) - z) < 1e-14);
    cplx q = std::sqrt(a0 * a0 + 1.0);
    cplx expect = z * std::pow((e + a0 + q) / (e + a0 - q), -a0 / q);
    CHECK(std::abs(solve_superminimal(chart_for(builtin_surface("rotsym")), a0).eval(z, e) - expect) < 1e-10);
    auto k = solve_superminimal(chart_for(builtin_surface("cubic")), 0.0);
    CHECK(std::abs(k.eval(z, e) - z * std::pow(e - 1.0, 3) / e) < 1e-12);
  }
}

TEST_CASE("superminimal solutions satisfy the characteristic equation") {
  oracle::Rng rng(101);
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    ChartParam c = chart_for(builtin_surface(name));
    for (cplx a0 : {cplx(0.0), cplx(0.3, -0.2)}) {
      auto sol = solve_superminimal(c, a0);
      for (int n = 0; n < 20; ++n) {
        auto [z, e] = chart_point(rng);
        CHECK(superminimal_residual(c, a0, sol.eval, z, e) < 1e-7);
      }
    }
  }
}

TEST_CASE("traced superminimal solutions") {
  oracle::Rng rng(103);
  ChartParam c = chart_for(builtin_surface("circles"));
  cplx a0(0.2, 0.1);
  ZetaTilde f = trace_superminimal(c, a0, 1.0);
  for (int n = 0; n < 10; ++n) {
    auto [z, e] = chart_point(rng);
    CHECK(superminimal_residual(c, a0, f, z, e) < 1e-6);
    // the traced solution is a function of the closed form
    CHECK(std::abs(f(z, e) - (z - a0 * std::log(e))) < 1e-8);
  }
  // on the radial chart Theta(d/d zeta) = -2 eta, so a path through eta = 0 is refused
  ChartParam r = chart_for(builtin_surface("radial"));
  CHECK_THROWS_AS(trace_superminimal(r, 0.0, 1.0)(1.0, -1.0), DomainError);
}

TEST_CASE("phi examples") {
  Builtin c = builtin_surface("circles");
  CHECK(std::abs(eval_phi_a(c, C4{}, NullCoords::real(0, 0, 1, 0)) - 1.0) < 1e-14);
  oracle::Rng rng(107);
  for (int n = 0; n < 50; ++n) {
    Vec3 x = rng.vec(2);
    if (std::hypot(x[1], x[2]) < 0.2) continue;
    NullCoords p = NullCoords::real(0, x[0], x[1], x[2]);
    CHECK(std::abs(eval_phi_a(c, C4{}, p) - (-I * x[0] + std::hypot(x[1], x[2]))) < 1e-12);
    Builtin v = builtin_surface("villarceau", 1.0);
    CHECK(std::abs(eval_phi_a(v, C4{}, p) - oracle::villarceau_phi(1.0, x)) < 1e-10 * (1.0 + std::abs(oracle::villarceau_phi(1.0, x))));
  }
  CHECK(std::abs(eval_phi_a(builtin_surface("villarceau", 1.0), C4{}, NullCoords::real(0, 0, 1, 0))) < 1e-14);
}

TEST_CASE("phi of the circles surface for complex translations") {
  Builtin c = builtin_surface("circles");
  oracle::Rng rng(109);
  for (int n = 0; n < 30; ++n) {
    cplx a0 = rng.complex(0.5);
    double x0 = rng.uniform(0.2, 1), x1 = rng.uniform(-1, 1), x2 = rng.uniform(0.5, 1.5), x3 = rng.uniform(-1, 1);
    cplx s = std::sqrt(x0 * x0 + x2 * x2 + x3 * x3);
    cplx expect = -I * x1 + s - a0 * std::log((x0 + s) / (x2 - I * x3));
    CHECK(std::abs(eval_phi_a(c, C4{a0, 0.0, 0.0, 0.0}, NullCoords::real(x0, x1, x2, x3)) - expect) < 1e-11);
  }
}

TEST_CASE("phi of the rotational quadric") {
  Builtin b = builtin_surface("rotsym");
  oracle::Rng rng(113);
  for (int n = 0; n < 50; ++n) {
    Vec3 x = rng.vec(1.5);
    // zeta from the incidence relations in the chart [1, zeta eta, -eta, zeta]:
    // conj(z2) zeta^2 - (1 + |x|^2) zeta + z2 = 0 at x0 = 0
    double r2 = x.squaredNorm(), rho2 = x[1] * x[1] + x[2] * x[2];
    double disc = (1.0 + r2) * (1.0 + r2) - 4.0 * rho2;
    if (disc < 0.05 || rho2 < 0.05) continue;
    double s = std::sqrt(disc);
    cplx plus = (1.0 + r2 + s) / (2.0 * (x[1] - I * x[2]));
    cplx minus = (1.0 + r2 - s) / (2.0 * (x[1] - I * x[2]));
    NullCoords p = NullCoords::real(0, x[0], x[1], x[2]);
    cplx v0 = eval_phi_a(b, C4{}, p, 0), v1 = eval_phi_a(b, C4{}, p, 1);
    bool matched = (std::abs(v0 - plus) < 1e-10 && std::abs(v1 - minus) < 1e-10) ||
                   (std::abs(v0 - minus) < 1e-10 && std::abs(v1 - plus) < 1e-10);
    CHECK(matched);
  }
}

TEST_CASE("cubic roots and phi") {
  Builtin b = builtin_surface("cubic");
  oracle::Rng rng(127);
  for (int n = 0; n < 30; ++n) {
    Vec3 x = rng.vec(1.5);
    NullCoords p = NullCoords::real(0, x[0], x[1], x[2]);
    KerrPoly k = kerr_polynomial(b.surface, p);
    for (int br = 0; br < 3; ++br) {
      ExtendedComplex mu = select_root(b, p, br);
      CHECK(k.normalized_residual(mu) < 1e-8);
      // anchoring at a root reproduces it
      CHECK(chordal_distance(select_root(b, p, 0, mu), mu) < 1e-12);
    }
    // at a0 = 0 the chart solution is zeta (eta - 1)^3 / eta with (zeta, eta) from the fundamental map
    ExtendedComplex mu = select_root(b, p, 0);
    if (mu.is_inf()) continue;
    TwistorPoint w = fundamental_map(p, 1.0, mu.value());
    auto [z, e] = chart_for(b).coords(w.w());
    try {
      CHECK(std::abs(eval_phi_a(b, C4{}, p, 0) - z * std::pow(e - 1.0, 3) / e) < 1e-9 * (1.0 + std::abs(z)));
    } catch (const DomainError&) {
    }
  }
  CHECK_THROWS_AS(select_root(b, NullCoords::real(0, 0, 0, 0), 0), DomainError);
}

TEST_CASE("involutes") {
  oracle::Rng rng(131);
  for (int n = 0; n < 20; ++n) {
    Vec3 x = rng.vec(2);
    if (std::hypot(x[1], x[2]) < 0.2) continue;
    CHECK(std::abs(involute_foliation(0.0, x) - (-I * x[0] + std::hypot(x[1], x[2]))) < 1e-13);
  }
  cplx v = involute_foliation(1.0, Vec3(0, 2, 0));
  CHECK(std::abs(v - (std::sqrt(3.0) + M_PI / 6.0)) < 1e-13);
  auto f = [](const Vec3& x) { return involute_foliation(1.0, x); };
  CHECK(hwc3_residual(f, Vec3(0, 2, 0), 1e-3).value < 1e-6);
  CHECK(hwc3_residual(f, Vec3(0.4, -1.2, 1.5), 1e-3).value < 1e-6);
  CHECK_THROWS_AS(involute_foliation(1.0, Vec3(0, 0.5, 0.5)), DomainError);
  CHECK_THROWS_AS(involute_direction(1.0, Vec3(0, 0.5, 0.5)), DomainError);
  for (int n = 0; n < 20; ++n) {
    Vec3 x = rng.vec(2);
    if (x[1] * x[1] + x[2] * x[2] < 1.2) continue;
    CHECK((involute_direction(1.0, x) - oracle::circles_Ut(1.0, x)).norm() < 1e-13);
    // the direction is tangent to the level sets of the foliation function
    Vec3 U = involute_direction(1.0, x);
    double h = 1e-5;
    cplx d = (f(x + h * U) - f(x - h * U)) / (2 * h);
    CHECK(std::abs(d) < 1e-8);
  }
}
