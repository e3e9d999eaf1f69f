#pragma once

// Formulas written out independently of the library, used as test oracles.

#include <cmath>
#include <complex>
#include <random>

#include "tfe/geom_core.hpp"

namespace oracle {

using tfe::C4;
using tfe::cplx;
using tfe::Vec3;

inline constexpr cplx I{0.0, 1.0};

struct Rng {
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  cplx complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  Vec3 vec(double r) { return Vec3(uniform(-r, r), uniform(-r, r), uniform(-r, r)); }
  Vec3 unit() {
    std::normal_distribution<double> n;
    Vec3 v(n(gen), n(gen), n(gen));
    return v.normalized();
  }
  std::mt19937_64 gen;
};

// (z1, z1~, z2, z2~) of Cartesian x.
inline C4 null_of(const C4& x) { return {x[0] + I * x[1], x[0] - I * x[1], x[2] + I * x[3], x[2] - I * x[3]}; }

// Unit vector of u under inverse stereographic projection from (-1,0,0).
inline Vec3 sphere_of(cplx u) {
  double n = std::norm(u);
  return Vec3(1.0 - n, 2.0 * u.real(), 2.0 * u.imag()) / (1.0 + n);
}

inline double chordal(cplx a, cplx b) { return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b))); }

// Both roots of the radial quadric, i mu = (x2 + i x3) / (x1 +- |x|) = (-x1 +- |x|) / (x2 - i x3).
// Infinity is returned as a non-finite value.
inline cplx radial_mu(const Vec3& x, int sign) {
  double r = x.norm();
  if (sign * x[0] >= 0.0) return (x[1] + I * x[2]) / (I * (x[0] + sign * r));
  cplx den = I * (x[1] - I * x[2]);
  if (den == cplx(0.0)) return {INFINITY, 0.0};
  return (-x[0] + sign * r) / den;
}

// Chordal distance where either side may be infinite.
inline double chordal_ext(const tfe::ExtendedComplex& a, cplx b) {
  bool ai = a.is_inf(), bi = !std::isfinite(std::abs(b));
  if (ai && bi) return 0.0;
  if (ai) return 1.0 / std::sqrt(1.0 + std::norm(b));
  if (bi) return 1.0 / std::sqrt(1.0 + std::norm(a.value()));
  return chordal(a.value(), b);
}

// Circles quadric on R3 at time 0.
inline Vec3 circles_U(const Vec3& x, int sign) {
  return sign * Vec3(0.0, -x[2], x[1]) / std::hypot(x[1], x[2]);
}

// Associated field of the circles example at time t, written from the frame
// derivation: U_t = (r/rho) (0, -x3 + t x2/r, x2 + t x3/r) / rho.
inline Vec3 circles_Ut(double t, const Vec3& x) {
  double rho2 = x[1] * x[1] + x[2] * x[2];
  double r = std::sqrt(rho2 - t * t);
  return (r / rho2) * Vec3(0.0, -x[2] + t / r * x[1], x[1] + t / r * x[2]);
}

// Villarceau foliation function on R3 (c = 0).
// zeta~ = (eta - s)/(-zeta) composed with zeta = -z2/(z1~ + s), eta = z1 - zeta z2~ at x0 = 0
inline cplx villarceau_phi(double s, const Vec3& x) {
  return (x.squaredNorm() - s * s + 2.0 * I * x[0] * s) / (x[1] + I * x[2]);
}

// Contact form with every term written out.
inline cplx theta(cplx a0, const C4& w, const C4& d) {
  return -2.0 * a0 * (w[1] * d[0] - w[0] * d[1]) + w[1] * d[2] - w[2] * d[1] - w[0] * d[3] + w[3] * d[0];
}

}  // namespace oracle
