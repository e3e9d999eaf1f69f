#include <doctest.h>

#include "oracles.hpp"
#include "tfe/error.hpp"
#include "tfe/geom_core.hpp"

using namespace tfe;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).norm() < tol; }

C4 cx(double a, double b, double c, double d) { return {cplx(a), cplx(b), cplx(c), cplx(d)}; }

}  // namespace

TEST_CASE("null coordinates of basis vectors") {
  auto z0 = NullCoords::from_cartesian(cx(0, 0, 0, 0)).z;
  for (auto v : z0) CHECK(v == cplx(0.0));
  auto z1 = NullCoords::from_cartesian(cx(1, 0, 0, 0)).z;
  CHECK(z1[0] == cplx(1.0));
  CHECK(z1[1] == cplx(1.0));
  CHECK(z1[2] == cplx(0.0));
  auto z2 = NullCoords::from_cartesian(cx(0, 1, 0, 0)).z;
  CHECK(z2[0] == kI);
  CHECK(z2[1] == -kI);
}

TEST_CASE("null coordinates round trip and match the oracle") {
  oracle::Rng rng(7);
  for (int n = 0; n < 200; ++n) {
    C4 x{rng.complex(3), rng.complex(3), rng.complex(3), rng.complex(3)};
    NullCoords p = NullCoords::from_cartesian(x);
    C4 z = oracle::null_of(x);
    NullCoords q = NullCoords::from_null(p.z);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(p.z[i] - z[i]) < 1e-14);
      CHECK(std::abs(q.x[i] - x[i]) < 1e-13);
    }
  }
  CHECK(NullCoords::real(0.1, 0.2, 0.3, 0.4).is_real());
  C4 x = cx(0.1, 0.2, 0.3, 0.4);
  x[2] += cplx(0.0, 0.5);
  CHECK_FALSE(NullCoords::from_cartesian(x).is_real());
}

TEST_CASE("extended complex and chordal distance") {
  CHECK(ExtendedComplex::infinity() == ExtendedComplex::infinity());
  CHECK(ExtendedComplex(cplx(INFINITY, 0.0)).is_inf());
  CHECK(ExtendedComplex(0.0).reciprocal().is_inf());
  CHECK(ExtendedComplex::infinity().reciprocal() == ExtendedComplex(0.0));
  CHECK_THROWS_AS(ExtendedComplex::infinity().value(), DomainError);
  CHECK(chordal_distance(0.0, ExtendedComplex::infinity()) == doctest::Approx(1.0));
  CHECK(chordal_distance(ExtendedComplex::infinity(), ExtendedComplex::infinity()) == 0.0);
  oracle::Rng rng(3);
  for (int n = 0; n < 100; ++n) {
    cplx a = rng.complex(5), b = rng.complex(5);
    CHECK(chordal_distance(a, b) == doctest::Approx(oracle::chordal(a, b)).epsilon(1e-13));
    // inversion is a chordal isometry
    CHECK(chordal_distance(ExtendedComplex(a).reciprocal(), ExtendedComplex(b).reciprocal()) ==
          doctest::Approx(oracle::chordal(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("stereographic projection examples") {
  CHECK(near(stereo_inv(0.0).vec(), Vec3(1, 0, 0), 1e-15));
  CHECK(near(stereo_inv(ExtendedComplex::infinity()).vec(), Vec3(-1, 0, 0), 1e-15));
  CHECK(near(stereo_inv(1.0).vec(), Vec3(0, 1, 0), 1e-15));
  CHECK(stereo(Direction3(-1, 0, 0)).is_inf());
  CHECK(near(mu_to_direction(0.0).vec(), Vec3(1, 0, 0), 1e-15));
  CHECK(near(mu_to_direction(-kI).vec(), Vec3(0, 1, 0), 1e-15));
  CHECK(near(mu_to_direction(kI).vec(), Vec3(0, -1, 0), 1e-15));
  CHECK(near(mu_to_direction(ExtendedComplex::infinity()).vec(), Vec3(-1, 0, 0), 1e-15));
}

TEST_CASE("stereographic projection round trips") {
  oracle::Rng rng(11);
  for (int n = 0; n < 500; ++n) {
    cplx u = rng.complex(4);
    Direction3 U = stereo_inv(u);
    CHECK(std::abs(U.vec().norm() - 1.0) < 1e-12);
    CHECK(near(U.vec(), oracle::sphere_of(u), 1e-14));
    CHECK(chordal_distance(stereo(U), u) < 1e-14);
    CHECK(chordal_distance(direction_to_mu(mu_to_direction(u)), u) < 1e-14);
  }
  CHECK_THROWS_AS(Direction3(0, 0, 0), DomainError);
  CHECK_THROWS_AS(Direction3(NAN, 0, 0), DomainError);
}

TEST_CASE("frame examples") {
  Frame f = frame_from_direction(Direction3(1, 0, 0));
  CHECK(near(f.e2, Vec3(0, 1, 0), 1e-15));
  CHECK(near(f.e3, Vec3(0, 0, 1), 1e-15));
  Frame g = frame_from_direction(Direction3(0, 1, 0));
  CHECK(near(g.e2, Vec3(-1, 0, 0), 1e-15));
  CHECK(near(g.e3, Vec3(0, 0, 1), 1e-15));
  Frame h = frame_from_direction(Direction3(-1, 0, 0));
  CHECK(near(h.e2, Vec3(0, -1, 0), 1e-15));
  CHECK(near(h.e3, Vec3(0, 0, 1), 1e-15));
  // continuity along real u towards infinity
  Frame k = frame_from_direction(stereo_inv(1e7));
  CHECK(near(k.e2, h.e2, 1e-6));
}

TEST_CASE("random frames are orthonormal and positive") {
  oracle::Rng rng(5);
  for (int n = 0; n < 1000; ++n) {
    Direction3 U(rng.unit());
    Frame f = frame_from_direction(U);
    Eigen::Matrix3d M;
    M << U.vec(), f.e2, f.e3;
    CHECK((M.transpose() * M - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(U.vec().dot(f.e2.cross(f.e3)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hermitian structure examples") {
  Mat4 J = hermitian_from_direction(Direction3(1, 0, 0));
  Mat4 expect;
  expect << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  CHECK((J - expect).norm() < 1e-15);
  Mat4 K = hermitian_from_direction(Direction3(0, 0, 1));
  CHECK((K.col(0) - Vec4(0, 0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("hermitian structure invariants on random directions") {
  oracle::Rng rng(9);
  for (int n = 0; n < 1000; ++n) {
    Direction3 U(rng.unit());
    Mat4 J = hermitian_from_direction(U);
    CHECK((J * J + Mat4::Identity()).norm() < 1e-12);
    CHECK((J.transpose() * J - Mat4::Identity()).norm() < 1e-12);
    CHECK(std::abs(J(0, 0)) < 1e-15);
    // any unit e2 orthogonal to e0 and J e0
    Vec3 r = rng.unit();
    Vec3 t = (r - r.dot(U.vec()) * U.vec()).normalized();
    Vec4 e0(1, 0, 0, 0), e2(0, t[0], t[1], t[2]);
    Mat4 F;
    F << e0, J * e0, e2, J * e2;
    CHECK(F.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rotation in the normal plane") {
  Direction3 U(1, 0, 0);
  CHECK(near(jperp_rotate(U, Vec3(0, 1, 0)), Vec3(0, 0, 1), 1e-15));
  CHECK(near(jperp_rotate(U, Vec3(0, 0, 1)), Vec3(0, -1, 0), 1e-15));
  oracle::Rng rng(13);
  for (int n = 0; n < 100; ++n) {
    Direction3 V(rng.unit());
    Vec3 X = frame_from_direction(V).e2 * 2.5;
    CHECK(near(jperp_rotate(V, jperp_rotate(V, X)), -X, 1e-13));
  }
  CHECK_THROWS_AS(jperp_rotate(U, Vec3(1, 0, 0)), DomainError);
}

TEST_CASE("null direction of U") {
  CHECK((null_direction_from_U(Direction3(1, 0, 0)) - Vec4(1, 1, 0, 0)).norm() < 1e-15);
  CHECK((null_direction_from_U(Direction3(0, 0, 1)) - Vec4(1, 0, 0, 1)).norm() < 1e-15);
  oracle::Rng rng(17);
  for (int n = 0; n < 100; ++n) {
    Vec4 v = null_direction_from_U(Direction3(rng.unit()));
    CHECK(std::abs(-v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) < 1e-14);
  }
}
