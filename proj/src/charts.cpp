#include <cmath>
#include <functional>

#include "tfe/error.hpp"
#include "tfe/morphism.hpp"

namespace tfe {

std::pair<cplx, cplx> ChartParam::eval_theta(cplx a0, cplx zeta, cplx eta) const {
  C4 w = eval_w(zeta, eta);
  auto [dz, de] = eval_dw(zeta, eta);
  return {contact_form(a0, w, dz), contact_form(a0, w, de)};
}

std::pair<cplx, cplx> theta_numeric(const ChartParam& chart, cplx a0, cplx zeta, cplx eta, double h) {
  C4 w = chart.eval_w(zeta, eta);
  C4 dz, de;
  C4 zp = chart.eval_w(zeta + h, eta), zm = chart.eval_w(zeta - h, eta);
  C4 ep = chart.eval_w(zeta, eta + h), em = chart.eval_w(zeta, eta - h);
  for (int i = 0; i < 4; ++i) {
    dz[i] = (zp[i] - zm[i]) / (2.0 * h);
    de[i] = (ep[i] - em[i]) / (2.0 * h);
  }
  return {contact_form(a0, w, dz), contact_form(a0, w, de)};
}

ChartParam chart_for(const Builtin& b) {
  ChartParam c;
  c.name = b.name;
  c.param = b.param;
  c.surface = b.surface;
  if (b.name == "radial") {
    c.eval_w = [](cplx z, cplx e) { return C4{1.0, z, e, z * e}; };
    c.eval_dw = [](cplx z, cplx e) { return std::pair{C4{0.0, 1.0, 0.0, e}, C4{0.0, 0.0, 1.0, z}}; };
    c.coords = [](const C4& w) { return std::pair{w[1] / w[0], w[2] / w[0]}; };
  } else if (b.name == "villarceau") {
    double s = b.param;
    c.eval_w = [s](cplx z, cplx e) { return C4{1.0, z, e, -s * z}; };
    c.eval_dw = [s](cplx, cplx) { return std::pair{C4{0.0, 1.0, 0.0, -s}, C4{0.0, 0.0, 1.0, 0.0}}; };
    c.coords = [](const C4& w) { return std::pair{w[1] / w[0], w[2] / w[0]}; };
  } else if (b.name == "circles") {
    c.eval_w = [](cplx z, cplx e) { return C4{1.0, e, -z, z * e}; };
    c.eval_dw = [](cplx z, cplx e) { return std::pair{C4{0.0, 0.0, -1.0, e}, C4{0.0, 1.0, 0.0, z}}; };
    c.coords = [](const C4& w) { return std::pair{-w[2] / w[0], w[1] / w[0]}; };
  } else if (b.name == "rotsym") {
    c.eval_w = [](cplx z, cplx e) { return C4{1.0, z * e, -e, z}; };
    c.eval_dw = [](cplx z, cplx e) { return std::pair{C4{0.0, e, 0.0, 1.0}, C4{0.0, z, -1.0, 0.0}}; };
    c.coords = [](const C4& w) { return std::pair{w[3] / w[0], -w[2] / w[0]}; };
  } else if (b.name == "cubic") {
    c.eval_w = [](cplx z, cplx e) { return C4{1.0, kI * z, kI * e, z * e * e}; };
    c.eval_dw = [](cplx z, cplx e) {
      return std::pair{C4{0.0, kI, 0.0, e * e}, C4{0.0, 0.0, kI, 2.0 * z * e}};
    };
    c.coords = [](const C4& w) { return std::pair{-kI * w[1] / w[0], -kI * w[2] / w[0]}; };
  } else {
    throw DomainError("no chart available for surface '" + b.name + "'");
  }
  return c;
}

SuperminimalSolution solve_superminimal(const ChartParam& chart, cplx a0) {
  SuperminimalSolution out;
  out.closed_form = true;
  if (chart.name == "radial") {
    out.eval = [](cplx z, cplx) { return z; };
  } else if (chart.name == "villarceau") {
    double s = chart.param;
    out.eval = [a0, s](cplx z, cplx e) { return -(-2.0 * a0 + e - s) / z; };
  } else if (chart.name == "circles") {
    out.eval = [a0](cplx z, cplx e) { return a0 == cplx(0.0) ? z : z - a0 * std::log(e); };
  } else if (chart.name == "rotsym") {
    if (a0 == cplx(0.0)) {
      out.eval = [](cplx z, cplx) { return z; };
    } else {
      cplx q = std::sqrt(a0 * a0 + 1.0);
      out.eval = [a0, q](cplx z, cplx e) { return z * std::exp(-a0 / q * std::log((e + a0 + q) / (e + a0 - q))); };
    }
  } else if (chart.name == "cubic") {
    if (a0 == cplx(0.0)) {
      out.eval = [](cplx z, cplx e) { return z * (e - 1.0) * (e - 1.0) * (e - 1.0) / e; };
    } else {
      cplx d = std::sqrt(1.0 + 8.0 * kI * a0);
      cplx al1 = (1.0 + d) / 2.0, al2 = (1.0 - d) / 2.0;
      out.eval = [a0, d, al1, al2](cplx z, cplx e) {
        return -z * (2.0 * kI * a0 - e * e + e) * std::exp(2.0 / d * std::log((e - al1) / (e - al2)));
      };
    }
  } else {
    out.closed_form = false;
    out.eval = trace_superminimal(chart, a0, 1.0);
  }
  return out;
}

ZetaTilde trace_superminimal(const ChartParam& chart, cplx a0, cplx eta0, int steps) {
  if (steps < 1) throw std::invalid_argument("step count must be positive");
  return [chart, a0, eta0, steps](cplx zeta, cplx eta) {
    const cplx span = eta0 - eta;
    auto slope = [&](cplx z, cplx e) {
      auto [tz, te] = chart.eval_theta(a0, z, e);
      if (std::abs(tz) <= 1e-14 * (std::abs(tz) + std::abs(te)) || tz == cplx(0.0)) {
        throw DomainError("characteristic field is tangent to the transversal");
      }
      return -te / tz * span;
    };
    const double ds = 1.0 / steps;
    cplx z = zeta;
    for (int k = 0; k < steps; ++k) {
      cplx e = eta + (k * ds) * span;
      cplx eh = eta + ((k + 0.5) * ds) * span;
      cplx e1 = eta + ((k + 1) * ds) * span;
      cplx k1 = slope(z, e);
      cplx k2 = slope(z + 0.5 * ds * k1, eh);
      cplx k3 = slope(z + 0.5 * ds * k2, eh);
      cplx k4 = slope(z + ds * k3, e1);
      z += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
  };
}

double superminimal_residual(const ChartParam& chart, cplx a0, const ZetaTilde& f, cplx zeta, cplx eta,
                             double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  auto d = [h](const std::function<cplx(double)>& g) {
    return (8.0 * (g(h) - g(-h)) - (g(2.0 * h) - g(-2.0 * h))) / (12.0 * h);
  };
  cplx dz = d([&](double k) { return f(zeta + k, eta); });
  cplx de = d([&](double k) { return f(zeta, eta + k); });
  auto [tz, te] = chart.eval_theta(a0, zeta, eta);
  return std::abs(tz * de - te * dz);
}

}  // namespace tfe
