#include <doctest.h>

#include <cmath>

#include "tfe/error.hpp"
#include "tfe/numdiff.hpp"

using namespace tfe;

TEST_CASE("gradient is exact on affine functions") {
  ScalarField c = [](std::span<const double>) { return cplx(2.0, -1.0); };
  for (cplx g : fd_gradient(c, Stencil::full({0.3, 0.4, 0.5}, 1e-3))) CHECK(g == cplx(0.0));
  ScalarField f = [](std::span<const double> x) { return cplx(3.0 * x[0]); };
  auto g = fd_gradient(f, Stencil::full({0.25, 0.5}, 0.125));
  CHECK(g[0] == cplx(3.0));
  CHECK(g[1] == cplx(0.0));
}

TEST_CASE("gradient of a square") {
  ScalarField f = [](std::span<const double> x) { return cplx(x[0] * x[0]); };
  auto g = fd_gradient(f, Stencil{{1.0}, 1e-3, {0}});
  CHECK(std::abs(g[0] - 2.0) < 1e-10);
}

TEST_CASE("second differences") {
  ScalarField f = [](std::span<const double> x) { return cplx(x[0] * x[0]); };
  CHECK(std::abs(fd_second(f, Stencil{{1.0}, 1e-3, {0}})[0] - 2.0) < 1e-8);
  ScalarField c = [](std::span<const double>) { return cplx(5.0); };
  CHECK(fd_second(c, Stencil{{1.0}, 1e-3, {0}})[0] == cplx(0.0));
}

TEST_CASE("second difference converges at second order") {
  ScalarField f = [](std::span<const double> x) { return cplx(std::sin(x[0])); };
  double exact = -std::sin(0.7);
  double h = 1e-2;
  double r1 = std::abs(fd_second(f, Stencil{{0.7}, h, {0}})[0] - exact);
  double r2 = std::abs(fd_second(f, Stencil{{0.7}, h / 2, {0}})[0] - exact);
  double p = order_estimate(r1, r2);
  CHECK(p >= 1.8);
  CHECK(p <= 2.2);
}

TEST_CASE("gradient order on smooth functions") {
  ScalarField f = [](std::span<const double> x) { return std::exp(cplx(x[0], x[1])); };
  for (double h : {1e-2, 5e-3}) {
    auto a = fd_gradient(f, Stencil{{0.2, 0.1}, h, {0}})[0];
    auto b = fd_gradient(f, Stencil{{0.2, 0.1}, h / 2, {0}})[0];
    cplx exact = std::exp(cplx(0.2, 0.1));
    double p = order_estimate(std::abs(a - exact), std::abs(b - exact));
    CHECK(p >= 1.8);
    CHECK(p <= 2.2);
  }
}

TEST_CASE("order estimate edge cases") {
  CHECK(order_estimate(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(std::isnan(order_estimate(0.0, 1.0)));
  CHECK(std::isnan(order_estimate(1.0, 0.0)));
}

TEST_CASE("stencil validation") {
  ScalarField f = [](std::span<const double>) { return cplx(0.0); };
  CHECK_THROWS_AS(fd_gradient(f, Stencil{{0.0}, 0.0, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(fd_gradient(f, Stencil{{0.0, 1.0}, 1e-3, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(fd_gradient(f, Stencil{{0.0}, 1e-3, {1}}), std::invalid_argument);
}

TEST_CASE("evaluation failures carry the point") {
  ScalarField f = [](std::span<const double> x) {
    if (x[0] > 1.0) throw DomainError("out");
    return cplx(x[0]);
  };
  try {
    fd_gradient(f, Stencil{{1.0}, 0.5, {0}});
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    CHECK(e.point()[0] == doctest::Approx(1.5));
  }
}
