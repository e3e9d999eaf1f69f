#include <cmath>
#include <string>

#include "tfe/error.hpp"
#include "tfe/surface.hpp"

namespace tfe {

namespace {

TwistorSurface make_surface(int degree, std::vector<Term> terms) {
  TwistorSurface s{degree, std::move(terms)};
  s.validate();
  return s;
}

// a / b, where b == 0 gives infinity.
ExtendedComplex ratio(cplx a, cplx b) {
  if (b == cplx(0.0)) {
    if (a == cplx(0.0)) throw DomainError("direction is indeterminate here");
    return ExtendedComplex::infinity();
  }
  return ExtendedComplex(a / b);
}

int sign_of(int branch) { return branch == 0 ? 1 : -1; }

void check_branch(int branch, int count) {
  if (branch < 0 || branch >= count) throw DomainError("branch index out of range");
}

Builtin radial() {
  Builtin b;
  b.name = "radial";
  b.surface = make_surface(2, {{{1, 0, 0, 1}, 1.0}, {{0, 1, 1, 0}, -1.0}});
  b.branches = 2;
  // branch 0 gives U = x/|x|, branch 1 gives U = -x/|x|
  b.mu = [](const NullCoords& p, int branch) {
    check_branch(branch, 2);
    const C4& x = p.x;
    cplx r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    double sg = sign_of(branch);
    cplx num = x[1] + sg * r;
    cplx alt = x[1] - sg * r;
    if (std::abs(num) >= std::abs(alt)) return ratio(-kI * p.z2(), num);
    return ratio(kI * alt, p.zt2());
  };
  b.phi = [mu = b.mu](cplx, const NullCoords& p, int branch) -> std::optional<cplx> {
    ExtendedComplex m = mu(p, branch);
    if (m.is_inf()) return std::nullopt;
    return m.value();
  };
  return b;
}

Builtin circles() {
  Builtin b;
  b.name = "circles";
  b.surface = make_surface(2, {{{1, 0, 0, 1}, 1.0}, {{0, 1, 1, 0}, 1.0}});
  b.branches = 2;
  b.mu = [](const NullCoords& p, int branch) {
    check_branch(branch, 2);
    const C4& x = p.x;
    cplx s = std::sqrt(x[0] * x[0] + x[2] * x[2] + x[3] * x[3]);
    double sg = sign_of(branch);
    cplx num = x[0] + sg * s;
    cplx alt = x[0] - sg * s;
    if (std::abs(num) >= std::abs(alt)) return ratio(num, p.zt2());
    return ratio(-p.z2(), alt);
  };
  b.phi = [mu = b.mu](cplx a0, const NullCoords& p, int branch) -> std::optional<cplx> {
    const C4& x = p.x;
    cplx s = std::sqrt(x[0] * x[0] + x[2] * x[2] + x[3] * x[3]);
    cplx base = -kI * x[1] + static_cast<double>(sign_of(branch)) * s;
    if (a0 == cplx(0.0)) return base;
    ExtendedComplex eta = mu(p, branch);
    if (eta.is_inf() || eta.value() == cplx(0.0)) return std::nullopt;
    return base - a0 * std::log(eta.value());
  };
  return b;
}

Builtin villarceau(double s) {
  Builtin b;
  b.name = "villarceau";
  b.param = s;
  std::vector<Term> terms{{{0, 0, 0, 1}, 1.0}};
  if (s != 0.0) terms.insert(terms.begin(), Term{{0, 1, 0, 0}, s});
  b.surface = make_surface(1, terms);
  b.branches = 1;
  b.mu = [s](const NullCoords& p, int branch) {
    check_branch(branch, 1);
    return ratio(-p.z2(), p.zt1() + s);
  };
  b.phi = [s](cplx a0, const NullCoords& p, int branch) -> std::optional<cplx> {
    check_branch(branch, 1);
    if (p.z2() == cplx(0.0)) return std::nullopt;
    cplx num = p.z1() * p.zt1() + p.z2() * p.zt2() - 2.0 * a0 * (p.zt1() + s) + (p.z1() - p.zt1()) * s - s * s;
    return num / p.z2();
  };
  return b;
}

// zeta of the chart [1, zeta eta, -eta, zeta]; root of
// z2~ zeta^2 - (1 + z1 z1~ + z2 z2~) zeta + z2 = 0.
std::optional<cplx> rotsym_zeta(const NullCoords& p, int branch) {
  cplx B = 1.0 + p.z1() * p.zt1() + p.z2() * p.zt2();
  cplx s = std::sqrt(B * B - 4.0 * p.z2() * p.zt2());
  double sg = sign_of(branch);
  cplx num = B + sg * s;
  cplx alt = B - sg * s;
  if (std::abs(num) >= std::abs(alt)) {
    if (p.zt2() == cplx(0.0)) return std::nullopt;
    return num / (2.0 * p.zt2());
  }
  return 2.0 * p.z2() / alt;
}

Builtin rotsym(const TwistorSurface& surf) {
  Builtin b;
  b.name = "rotsym";
  b.surface = surf;
  b.branches = 2;
  b.mu = [surf](const NullCoords& p, int branch) {
    check_branch(branch, 2);
    std::optional<cplx> zeta = rotsym_zeta(p, branch);
    if (!zeta) return ExtendedComplex::infinity();
    cplx z = *zeta;
    // two algebraically equal forms; keep the better conditioned one
    ExtendedComplex a = ratio(p.z1() * z, z * p.zt2() - 1.0);
    ExtendedComplex c = ratio(z - p.z2(), p.zt1());
    KerrPoly poly = kerr_polynomial(surf, p);
    return poly.normalized_residual(a) <= poly.normalized_residual(c) ? a : c;
  };
  b.phi = [](cplx a0, const NullCoords& p, int branch) -> std::optional<cplx> {
    check_branch(branch, 2);
    if (a0 != cplx(0.0)) return std::nullopt;
    return rotsym_zeta(p, branch);
  };
  return b;
}

Builtin cubic() {
  Builtin b;
  b.name = "cubic";
  b.surface = make_surface(3, {{{0, 1, 2, 0}, 1.0}, {{2, 0, 0, 1}, kI}});
  b.branches = 3;
  return b;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"villarceau", "radial", "circles", "rotsym", "cubic"}; }

Builtin builtin_surface(std::string_view name, double param) {
  if (name == "radial") return radial();
  if (name == "circles") return circles();
  if (name == "villarceau") {
    if (!std::isfinite(param)) throw FormatError("villarceau parameter must be a finite real");
    return villarceau(param);
  }
  if (name == "rotsym") return rotsym(make_surface(2, {{{1, 1, 0, 0}, 1.0}, {{0, 0, 1, 1}, 1.0}}));
  if (name == "cubic") return cubic();
  throw FormatError("unknown built-in surface '" + std::string(name) + "'");
}

}  // namespace tfe
