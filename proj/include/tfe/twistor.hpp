#pragma once

#include <utility>

#include "tfe/geom_core.hpp"

namespace tfe {

// Homogeneous coordinates [w0, w1, w2, w3] on CP^3.
class TwistorPoint {
 public:
  // Throws DomainError when all components vanish.
  explicit TwistorPoint(const C4& w);

  const C4& w() const { return w_; }
  const cplx& operator[](int i) const { return w_[i]; }

  // Representative whose largest-modulus component equals 1.
  TwistorPoint normalized() const;
  bool equivalent(const TwistorPoint& other, double tol = 1e-12) const;

 private:
  C4 w_;
};

enum class SliceKind { RealR4, R3, Minkowski };

/*!
 * A real slice of C^4 through a base point. Slice coordinates y map to
 *   RealR4:    base + (y0, y1, y2, y3)
 *   R3:        base + (0, y1, y2, y3)
 *   Minkowski: base + (-i y0, y1, y2, y3)
 * For R3 slices of a Minkowski family the base carries x0 = a0 - i t.
 */
struct SliceSpec {
  C4 a{};
  SliceKind kind = SliceKind::RealR4;
  double t = 0.0;

  static SliceSpec real_r4(const C4& a = {});
  static SliceSpec r3_at_time(double t, const C4& a = {});
  static SliceSpec minkowski(const C4& a = {});

  C4 base() const;
  NullCoords point(double y0, double y1, double y2, double y3) const;
  NullCoords spatial_point(const Vec3& x) const { return point(0.0, x[0], x[1], x[2]); }
};

// Null coordinates (a1, a1~, a2, a2~) of a Cartesian translation vector.
C4 null_translation(const C4& a);

std::pair<cplx, cplx> incidence_residual(const TwistorPoint& w, const NullCoords& p);

struct ProjectedPoint {
  bool at_infinity = false;
  NullCoords point;
};

// Real point of the slice lying on the alpha-plane of w (RealR4 slices only).
ProjectedPoint twistor_project(const TwistorPoint& w, const SliceSpec& s = {});

// 2 Re(w0 conj(w2) + w1 conj(w3)) on the normalized representative,
// after pulling back by the slice translation.
double n5_value(const TwistorPoint& w, const SliceSpec& s = {});

// [w0, w1, w0 z1 - w1 z2~, w0 z2 + w1 z1~]; rejects [w0, w1] = [0, 0].
TwistorPoint fundamental_map(const NullCoords& p, cplx w0, cplx w1);

// Theta_a(dw) = -2 a0 (w1 dw0 - w0 dw1) + w1 dw2 - w2 dw1 - w0 dw3 + w3 dw0.
cplx contact_form(cplx a0, const C4& w, const C4& dw);
inline cplx contact_form(cplx a0, const TwistorPoint& w, const C4& dw) {
  return contact_form(a0, w.w(), dw);
}

// Action on CP^3 of the translation x -> x + a (a Cartesian).
TwistorPoint translate_twistor(const C4& a, const TwistorPoint& w);
// The same linear map on raw representatives and tangent vectors.
C4 translate_raw(const C4& a, const C4& w);

}  // namespace tfe
