#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace tfe {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using C4 = std::array<cplx, 4>;

inline constexpr cplx kI{0.0, 1.0};

/*!
 * A point of C^4 carried in Cartesian form (x0..x3) and in null form
 * (z1, z1~, z2, z2~) with z1 = x0 + i x1, z1~ = x0 - i x1,
 * z2 = x2 + i x3, z2~ = x2 - i x3.
 */
struct NullCoords {
  C4 x{};
  C4 z{};

  static NullCoords from_cartesian(const C4& x);
  static NullCoords from_null(const C4& z);
  static NullCoords real(double x0, double x1, double x2, double x3);

  const cplx& z1() const { return z[0]; }
  const cplx& zt1() const { return z[1]; }
  const cplx& z2() const { return z[2]; }
  const cplx& zt2() const { return z[3]; }

  // z~ are the complex conjugates of z (a point of the real slice).
  bool is_real(double tol = 1e-12) const;
  // Re x0 matches the base and the spatial parts are real relative to it.
  bool on_minkowski_slice(const NullCoords& base, double tol = 1e-12) const;
};

// A point of the Riemann sphere: a complex number or infinity.
class ExtendedComplex {
 public:
  ExtendedComplex() = default;
  ExtendedComplex(cplx v);  // NOLINT: implicit by design; non-finite maps to infinity
  ExtendedComplex(double v) : ExtendedComplex(cplx(v, 0.0)) {}  // NOLINT

  static ExtendedComplex infinity();

  bool is_inf() const { return inf_; }
  // Throws DomainError at infinity.
  cplx value() const;
  ExtendedComplex reciprocal() const;

  friend bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }

 private:
  cplx v_{};
  bool inf_ = false;
};

// |a-b| / sqrt((1+|a|^2)(1+|b|^2)), extended continuously to infinity.
double chordal_distance(const ExtendedComplex& a, const ExtendedComplex& b);

// Unit vector in R^3 (components along x1, x2, x3).
class Direction3 {
 public:
  // Normalizes; throws DomainError for zero or non-finite input.
  explicit Direction3(const Vec3& v);
  Direction3(double a, double b, double c) : Direction3(Vec3(a, b, c)) {}

  const Vec3& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  Vec3 v_;
};

struct Frame {
  Vec3 e2;
  Vec3 e3;
};

// Inverse stereographic projection from (-1,0,0).
Direction3 stereo_inv(const ExtendedComplex& u);
// Stereographic projection from (-1,0,0); (-1,0,0) maps to infinity.
ExtendedComplex stereo(const Direction3& U);

Direction3 mu_to_direction(const ExtendedComplex& mu);
ExtendedComplex direction_to_mu(const Direction3& U);

// Positive orthonormal completion {U, e2, e3} with U x e2 = e3.
Frame frame_from_direction(const Direction3& U);

// Orthogonal complex structure on R^4 with J(d/dx0) = U and J(e2) = e3.
Mat4 hermitian_from_direction(const Direction3& U);

// Rotation by +pi/2 in the plane orthogonal to U, i.e. U x X.
Vec3 jperp_rotate(const Direction3& U, const Vec3& X, double tol = 1e-10);

// (1, U) in coordinates (t, x1, x2, x3).
Vec4 null_direction_from_U(const Direction3& U);

}  // namespace tfe
