#include "tfe/numdiff.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tfe {

namespace {

std::string describe(const RealPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

EvaluationError::EvaluationError(const RealPoint& point, const std::string& what)
    : std::runtime_error("evaluation failed at " + describe(point) + ": " + what), point_(point) {}

Stencil Stencil::full(RealPoint center, double h) {
  Stencil s{std::move(center), h, {}};
  for (size_t i = 0; i < s.center.size(); ++i) s.axes.push_back(static_cast<int>(i));
  return s;
}

void Stencil::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("stencil step must be positive");
  for (size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] < 0 || axes[i] >= static_cast<int>(center.size())) {
      throw std::invalid_argument("stencil axis out of range");
    }
    for (size_t j = 0; j < i; ++j) {
      if (axes[i] == axes[j]) throw std::invalid_argument("stencil axes must be distinct");
    }
  }
}

cplx evaluate_at(const ScalarField& f, const RealPoint& x) {
  try {
    return f(std::span<const double>(x));
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(x, e.what());
  }
}

std::vector<cplx> fd_gradient(const ScalarField& f, const Stencil& s) {
  s.validate();
  std::vector<cplx> out;
  out.reserve(s.axes.size());
  RealPoint x = s.center;
  for (int ax : s.axes) {
    x[ax] = s.center[ax] + s.h;
    cplx fp = evaluate_at(f, x);
    x[ax] = s.center[ax] - s.h;
    cplx fm = evaluate_at(f, x);
    x[ax] = s.center[ax];
    out.push_back((fp - fm) / (2.0 * s.h));
  }
  return out;
}

std::vector<cplx> fd_second(const ScalarField& f, const Stencil& s) {
  s.validate();
  std::vector<cplx> out;
  out.reserve(s.axes.size());
  RealPoint x = s.center;
  cplx f0 = evaluate_at(f, x);
  for (int ax : s.axes) {
    x[ax] = s.center[ax] + s.h;
    cplx fp = evaluate_at(f, x);
    x[ax] = s.center[ax] - s.h;
    cplx fm = evaluate_at(f, x);
    x[ax] = s.center[ax];
    out.push_back((fp - 2.0 * f0 + fm) / (s.h * s.h));
  }
  return out;
}

double order_estimate(double r_h, double r_half) {
  if (!(r_h > 0.0) || !(r_half > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(r_h / r_half);
}

}  // namespace tfe
