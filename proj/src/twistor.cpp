#include "tfe/twistor.hpp"

#include <cmath>

#include "tfe/error.hpp"

namespace tfe {

TwistorPoint::TwistorPoint(const C4& w) : w_(w) {
  bool any = false;
  for (const auto& c : w_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("twistor coordinates must be finite");
    }
    any = any || c != cplx(0.0);
  }
  if (!any) throw DomainError("twistor coordinates are all zero");
}

TwistorPoint TwistorPoint::normalized() const {
  int k = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(w_[i]) > std::abs(w_[k])) k = i;
  }
  cplx s = 1.0 / w_[k];
  C4 out;
  for (int i = 0; i < 4; ++i) out[i] = w_[i] * s;
  out[k] = 1.0;
  return TwistorPoint(out);
}

bool TwistorPoint::equivalent(const TwistorPoint& other, double tol) const {
  // all 2x2 minors vanish, measured on normalized representatives
  C4 a = normalized().w();
  C4 b = other.normalized().w();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (std::abs(a[i] * b[j] - a[j] * b[i]) > tol) return false;
    }
  }
  return true;
}

SliceSpec SliceSpec::real_r4(const C4& a) { return {a, SliceKind::RealR4, 0.0}; }

SliceSpec SliceSpec::r3_at_time(double t, const C4& a) { return {a, SliceKind::R3, t}; }

SliceSpec SliceSpec::minkowski(const C4& a) { return {a, SliceKind::Minkowski, 0.0}; }

C4 SliceSpec::base() const {
  C4 b = a;
  if (kind == SliceKind::R3) b[0] -= kI * t;
  return b;
}

NullCoords SliceSpec::point(double y0, double y1, double y2, double y3) const {
  C4 b = base();
  cplx x0 = kind == SliceKind::Minkowski ? cplx(0.0, -y0) : cplx(kind == SliceKind::R3 ? 0.0 : y0);
  return NullCoords::from_cartesian({b[0] + x0, b[1] + y1, b[2] + y2, b[3] + y3});
}

C4 null_translation(const C4& a) { return NullCoords::from_cartesian(a).z; }

std::pair<cplx, cplx> incidence_residual(const TwistorPoint& w, const NullCoords& p) {
  const C4 v = w.normalized().w();
  return {v[0] * p.z1() - v[1] * p.zt2() - v[2], v[0] * p.z2() + v[1] * p.zt1() - v[3]};
}

C4 translate_raw(const C4& a, const C4& w) {
  C4 n = null_translation(a);
  return {w[0], w[1], w[2] + n[0] * w[0] - n[3] * w[1], w[3] + n[2] * w[0] + n[1] * w[1]};
}

TwistorPoint translate_twistor(const C4& a, const TwistorPoint& w) {
  return TwistorPoint(translate_raw(a, w.w()));
}

namespace {

C4 negate(const C4& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

}  // namespace

ProjectedPoint twistor_project(const TwistorPoint& w, const SliceSpec& s) {
  if (s.kind != SliceKind::RealR4) throw DomainError("projection is defined on R4 slices");
  C4 b = s.base();
  const C4 v = TwistorPoint(translate_raw(negate(b), w.w())).normalized().w();
  double d = std::norm(v[0]) + std::norm(v[1]);
  if (d == 0.0) return {true, {}};
  cplx z1 = (std::conj(v[0]) * v[2] + v[1] * std::conj(v[3])) / d;
  cplx z2 = (std::conj(v[0]) * v[3] - v[1] * std::conj(v[2])) / d;
  NullCoords r = NullCoords::from_null({z1, std::conj(z1), z2, std::conj(z2)});
  // the real part of the result is exact; clear rounding residue
  C4 x{};
  for (int i = 0; i < 4; ++i) x[i] = cplx(r.x[i].real()) + b[i];
  return {false, NullCoords::from_cartesian(x)};
}

double n5_value(const TwistorPoint& w, const SliceSpec& s) {
  const C4 v = TwistorPoint(translate_raw(negate(s.base()), w.w())).normalized().w();
  return 2.0 * (v[0] * std::conj(v[2]) + v[1] * std::conj(v[3])).real();
}

TwistorPoint fundamental_map(const NullCoords& p, cplx w0, cplx w1) {
  if (w0 == cplx(0.0) && w1 == cplx(0.0)) throw DomainError("fiber coordinates [0,0] are not a point of CP1");
  return TwistorPoint(C4{w0, w1, w0 * p.z1() - w1 * p.zt2(), w0 * p.z2() + w1 * p.zt1()});
}

cplx contact_form(cplx a0, const C4& w, const C4& dw) {
  return -2.0 * a0 * (w[1] * dw[0] - w[0] * dw[1]) + w[1] * dw[2] - w[2] * dw[1] - w[0] * dw[3] +
         w[3] * dw[0];
}

}  // namespace tfe
