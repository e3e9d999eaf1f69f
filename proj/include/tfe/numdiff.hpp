#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfe/geom_core.hpp"

namespace tfe {

using RealPoint = std::vector<double>;
using ScalarField = std::function<cplx(std::span<const double>)>;

// Central-difference stencil along the listed axes.
struct Stencil {
  RealPoint center;
  double h = 1e-3;
  std::vector<int> axes;

  // All axes of the center point.
  static Stencil full(RealPoint center, double h);
  // Throws std::invalid_argument on h <= 0, repeated or out-of-range axes.
  void validate() const;
};

// Field evaluation failed at a stencil point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const RealPoint& point, const std::string& what);
  const RealPoint& point() const { return point_; }

 private:
  RealPoint point_;
};

// (f(x + h e_i) - f(x - h e_i)) / (2h), one entry per stencil axis.
std::vector<cplx> fd_gradient(const ScalarField& f, const Stencil& s);

// (f(x + h e_i) - 2 f(x) + f(x - h e_i)) / h^2, one entry per stencil axis.
std::vector<cplx> fd_second(const ScalarField& f, const Stencil& s);

// Evaluates f and wraps any failure with the point.
cplx evaluate_at(const ScalarField& f, const RealPoint& x);

// log2(r(h) / r(h/2)); NaN when either value is not positive.
double order_estimate(double r_h, double r_half);

}  // namespace tfe
