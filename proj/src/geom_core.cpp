#include "tfe/geom_core.hpp"

#include <cmath>

#include "tfe/error.hpp"

namespace tfe {

NullCoords NullCoords::from_cartesian(const C4& x) {
  NullCoords p;
  p.x = x;
  p.z = {x[0] + kI * x[1], x[0] - kI * x[1], x[2] + kI * x[3], x[2] - kI * x[3]};
  return p;
}

NullCoords NullCoords::from_null(const C4& z) {
  NullCoords p;
  p.z = z;
  p.x = {0.5 * (z[0] + z[1]), -0.5 * kI * (z[0] - z[1]), 0.5 * (z[2] + z[3]),
         -0.5 * kI * (z[2] - z[3])};
  return p;
}

NullCoords NullCoords::real(double x0, double x1, double x2, double x3) {
  return from_cartesian({cplx(x0), cplx(x1), cplx(x2), cplx(x3)});
}

bool NullCoords::is_real(double tol) const {
  return std::abs(z[1] - std::conj(z[0])) <= tol && std::abs(z[3] - std::conj(z[2])) <= tol;
}

bool NullCoords::on_minkowski_slice(const NullCoords& base, double tol) const {
  if (std::abs(x[0].real() - base.x[0].real()) > tol) return false;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(x[i].imag() - base.x[i].imag()) > tol) return false;
  }
  return true;
}

ExtendedComplex::ExtendedComplex(cplx v) {
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
    v_ = v;
  } else {
    inf_ = true;
  }
}

ExtendedComplex ExtendedComplex::infinity() {
  ExtendedComplex e;
  e.inf_ = true;
  return e;
}

cplx ExtendedComplex::value() const {
  if (inf_) throw DomainError("value requested at infinity");
  return v_;
}

ExtendedComplex ExtendedComplex::reciprocal() const {
  if (inf_) return ExtendedComplex(cplx(0.0));
  if (v_ == cplx(0.0)) return infinity();
  return ExtendedComplex(1.0 / v_);
}

double chordal_distance(const ExtendedComplex& a, const ExtendedComplex& b) {
  if (a.is_inf() && b.is_inf()) return 0.0;
  if (a.is_inf()) return 1.0 / std::hypot(1.0, std::abs(b.value()));
  if (b.is_inf()) return 1.0 / std::hypot(1.0, std::abs(a.value()));
  cplx av = a.value();
  cplx bv = b.value();
  if (std::abs(av) > 1.0 && std::abs(bv) > 1.0) {
    // inversion is an isometry of the chordal metric
    av = 1.0 / av;
    bv = 1.0 / bv;
  }
  return std::abs(av - bv) / (std::hypot(1.0, std::abs(av)) * std::hypot(1.0, std::abs(bv)));
}

Direction3::Direction3(const Vec3& v) {
  double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("direction needs a nonzero finite vector");
  v_ = v / n;
}

Direction3 stereo_inv(const ExtendedComplex& u) {
  if (u.is_inf()) return Direction3(-1.0, 0.0, 0.0);
  cplx uv = u.value();
  double m = std::abs(uv);
  if (m <= 1.0) {
    double d = 1.0 + m * m;
    return Direction3((1.0 - m * m) / d, 2.0 * uv.real() / d, 2.0 * uv.imag() / d);
  }
  cplx w = 1.0 / uv;
  double n = std::norm(w);
  double d = 1.0 + n;
  return Direction3((n - 1.0) / d, 2.0 * w.real() / d, -2.0 * w.imag() / d);
}

ExtendedComplex stereo(const Direction3& U) {
  const Vec3& v = U.vec();
  if (v[0] >= 0.0) return ExtendedComplex(cplx(v[1], v[2]) / (1.0 + v[0]));
  cplx inv = cplx(v[1], -v[2]) / (1.0 - v[0]);
  if (inv == cplx(0.0)) return ExtendedComplex::infinity();
  return ExtendedComplex(1.0 / inv);
}

Direction3 mu_to_direction(const ExtendedComplex& mu) {
  if (mu.is_inf()) return stereo_inv(mu);
  return stereo_inv(ExtendedComplex(kI * mu.value()));
}

ExtendedComplex direction_to_mu(const Direction3& U) {
  ExtendedComplex u = stereo(U);
  if (u.is_inf()) return u;
  return ExtendedComplex(-kI * u.value());
}

Frame frame_from_direction(const Direction3& U) {
  ExtendedComplex ue = stereo(U);
  if (ue.is_inf()) return {Vec3(0.0, -1.0, 0.0), Vec3(0.0, 0.0, 1.0)};
  cplx u = ue.value();
  std::array<cplx, 3> f;
  if (std::abs(u) <= 1.0) {
    double d = 1.0 + std::norm(u);
    f = {-2.0 * u / d, (1.0 - u * u) / d, kI * (1.0 + u * u) / d};
  } else {
    // same formula rewritten in w = 1/u to stay bounded near the pole
    cplx w = 1.0 / u;
    double n = std::norm(w);
    cplx r = std::conj(w) / w;
    double d = 1.0 + n;
    f = {-2.0 * std::conj(w) / d, (n - r) / d, kI * (n + r) / d};
  }
  return {Vec3(f[0].real(), f[1].real(), f[2].real()), Vec3(f[0].imag(), f[1].imag(), f[2].imag())};
}

Mat4 hermitian_from_direction(const Direction3& U) {
  Frame fr = frame_from_direction(U);
  Vec4 e0(1.0, 0.0, 0.0, 0.0);
  Vec4 u4(0.0, U[0], U[1], U[2]);
  Vec4 f2(0.0, fr.e2[0], fr.e2[1], fr.e2[2]);
  Vec4 f3(0.0, fr.e3[0], fr.e3[1], fr.e3[2]);
  return u4 * e0.transpose() - e0 * u4.transpose() + f3 * f2.transpose() - f2 * f3.transpose();
}

Vec3 jperp_rotate(const Direction3& U, const Vec3& X, double tol) {
  double scale = std::max(1.0, X.norm());
  if (std::abs(X.dot(U.vec())) > tol * scale) {
    throw DomainError("vector is not orthogonal to the direction");
  }
  return U.vec().cross(X);
}

Vec4 null_direction_from_U(const Direction3& U) { return Vec4(1.0, U[0], U[1], U[2]); }

}  // namespace tfe
