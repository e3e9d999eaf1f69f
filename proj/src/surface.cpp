#include "tfe/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "tfe/error.hpp"

namespace tfe {

void TwistorSurface::validate() const {
  if (degree < 1) throw FormatError("degree must be a positive integer");
  if (terms.empty()) throw FormatError("surface has no terms");
  bool nonzero = false;
  for (size_t k = 0; k < terms.size(); ++k) {
    int sum = 0;
    for (int e : terms[k].exp) {
      if (e < 0) throw FormatError("term " + std::to_string(k) + ": negative exponent");
      sum += e;
    }
    if (sum != degree) {
      throw FormatError("term " + std::to_string(k) + ": exponents sum to " + std::to_string(sum) +
                        ", expected degree " + std::to_string(degree));
    }
    if (!std::isfinite(terms[k].coef.real()) || !std::isfinite(terms[k].coef.imag())) {
      throw FormatError("term " + std::to_string(k) + ": coefficient is not finite");
    }
    nonzero = nonzero || terms[k].coef != cplx(0.0);
  }
  if (!nonzero) throw FormatError("all coefficients are zero");
}

cplx TwistorSurface::evaluate(const C4& w) const {
  cplx total = 0.0;
  for (const Term& t : terms) {
    cplx m = t.coef;
    for (int i = 0; i < 4; ++i) {
      for (int e = 0; e < t.exp[i]; ++e) m *= w[i];
    }
    total += m;
  }
  return total;
}

double TwistorSurface::magnitude(const C4& w) const {
  double total = 0.0;
  for (const Term& t : terms) {
    double m = std::abs(t.coef);
    for (int i = 0; i < 4; ++i) m *= std::pow(std::abs(w[i]), t.exp[i]);
    total += m;
  }
  return total;
}

namespace {

template <typename T>
std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out(a.size() + b.size() - 1, T(0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double max_abs(const std::vector<cplx>& c) {
  double m = 0.0;
  for (const cplx& v : c) m = std::max(m, std::abs(v));
  return m;
}

cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx r = 0.0;
  for (size_t k = c.size(); k-- > 0;) r = r * x + c[k];
  return r;
}

// Roots of a x^2 + b x + c avoiding cancellation; a == 0 gives infinity.
std::vector<ExtendedComplex> quadratic_roots(cplx a, cplx b, cplx c) {
  if (a == cplx(0.0)) {
    if (b == cplx(0.0)) return {ExtendedComplex::infinity(), ExtendedComplex::infinity()};
    return {ExtendedComplex(-c / b), ExtendedComplex::infinity()};
  }
  cplx sq = std::sqrt(b * b - 4.0 * a * c);
  if ((std::conj(b) * sq).real() < 0.0) sq = -sq;
  cplx q = -0.5 * (b + sq);
  if (q == cplx(0.0)) return {ExtendedComplex(0.0), ExtendedComplex(0.0)};
  return {ExtendedComplex(q / a), ExtendedComplex(c / q)};
}

std::vector<ExtendedComplex> companion_roots(const std::vector<cplx>& c, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) m(0, j) = -c[n - 1 - j] / c[n];
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cplx> d(c.begin(), c.begin() + n + 1);
  std::vector<cplx> dd(n);
  for (int k = 1; k <= n; ++k) dd[k - 1] = static_cast<double>(k) * d[k];
  std::vector<ExtendedComplex> out;
  for (int i = 0; i < n; ++i) {
    cplx r = es.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      cplx fp = horner(dd, r);
      if (fp == cplx(0.0)) break;
      cplx cand = r - horner(d, r) / fp;
      if (!(std::abs(horner(d, cand)) < std::abs(horner(d, r)))) break;
      r = cand;
    }
    out.emplace_back(r);
  }
  return out;
}

}  // namespace

cplx KerrPoly::eval(cplx mu) const { return horner(coeffs, mu); }

double KerrPoly::normalized_residual(const ExtendedComplex& mu) const {
  double m = max_abs(coeffs);
  if (m == 0.0) return 0.0;
  if (mu.is_inf()) return std::abs(coeffs.back()) / m;
  cplx v = mu.value();
  if (std::abs(v) <= 1.0) return std::abs(eval(v)) / m;
  // sum c_k r^(d-k) with r = 1/mu
  cplx r = 1.0 / v;
  cplx acc = 0.0;
  for (const cplx& ck : coeffs) acc = acc * r + ck;
  return std::abs(acc) / m;
}

bool KerrPoly::vanishes(double rel_tol) const { return max_abs(coeffs) <= rel_tol * scale; }

KerrPoly kerr_polynomial(const TwistorSurface& psi, const NullCoords& p) {
  const std::array<std::vector<cplx>, 4> lin = {
      std::vector<cplx>{1.0}, std::vector<cplx>{0.0, 1.0}, std::vector<cplx>{p.z1(), -p.zt2()},
      std::vector<cplx>{p.z2(), p.zt1()}};
  const std::array<std::vector<double>, 4> mag = {
      std::vector<double>{1.0}, std::vector<double>{0.0, 1.0},
      std::vector<double>{std::abs(p.z1()), std::abs(p.zt2())},
      std::vector<double>{std::abs(p.z2()), std::abs(p.zt1())}};
  KerrPoly out;
  out.coeffs.assign(psi.degree + 1, cplx(0.0));
  std::vector<double> bound(psi.degree + 1, 0.0);
  for (const Term& t : psi.terms) {
    std::vector<cplx> prod{t.coef};
    std::vector<double> mprod{std::abs(t.coef)};
    for (int i = 0; i < 4; ++i) {
      for (int e = 0; e < t.exp[i]; ++e) {
        prod = poly_mul(prod, lin[i]);
        mprod = poly_mul(mprod, mag[i]);
      }
    }
    for (size_t k = 0; k < prod.size(); ++k) {
      out.coeffs[k] += prod[k];
      bound[k] += mprod[k];
    }
  }
  for (double b : bound) out.scale += b;
  return out;
}

std::vector<ExtendedComplex> solve_mu(const KerrPoly& poly) {
  if (poly.coeffs.empty()) throw DomainError("empty polynomial");
  double m = max_abs(poly.coeffs);
  if (m == 0.0 || poly.vanishes()) throw FiberContainedError();
  std::vector<cplx> c(poly.coeffs.size());
  for (size_t k = 0; k < c.size(); ++k) c[k] = poly.coeffs[k] / m;
  int d = poly.degree();
  if (d == 1) {
    if (c[1] == cplx(0.0)) return {ExtendedComplex::infinity()};
    return {ExtendedComplex(-c[0] / c[1])};
  }
  if (d == 2) return quadratic_roots(c[2], c[1], c[0]);

  const double tiny = 4.0 * std::numeric_limits<double>::epsilon();
  int eff = d;
  while (eff > 0 && std::abs(c[eff]) <= tiny) --eff;
  std::vector<ExtendedComplex> roots;
  if (eff == 1) {
    roots.emplace_back(-c[0] / c[1]);
  } else if (eff == 2) {
    roots = quadratic_roots(c[2], c[1], c[0]);
  } else if (eff >= 3) {
    roots = companion_roots(c, eff);
  }
  while (static_cast<int>(roots.size()) < d) roots.push_back(ExtendedComplex::infinity());
  return roots;
}

double normalized_discriminant(const KerrPoly& poly) {
  if (poly.degree() != 2) return 0.0;
  double m = max_abs(poly.coeffs);
  if (m == 0.0) return 0.0;
  cplx a = poly.coeffs[2] / m, b = poly.coeffs[1] / m, c = poly.coeffs[0] / m;
  return std::abs(b * b - 4.0 * a * c);
}

}  // namespace tfe
