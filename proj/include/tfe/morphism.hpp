#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "tfe/foliation.hpp"
#include "tfe/numdiff.hpp"
#include "tfe/surface.hpp"
#include "tfe/twistor.hpp"

namespace tfe {

// Direction parameter as a function of real slice coordinates (y0..y3).
using MuField = std::function<ExtendedComplex(std::span<const double>)>;

/*!
 * First-order system for mu. On RealR4 slices (Wirtinger derivatives in
 * x0..x3):
 *   |d mu/d z1~ - mu d mu/d z2|,  |d mu/d z2~ + mu d mu/d z1|
 * On Minkowski slices (y0 = t, v = x1 - t, v' = x1 + t):
 *   |i d mu/d v' - mu d mu/d z2|,  |d mu/d z2~ - i mu d mu/d v|
 * When |mu(y)| > 1 the equivalent system for 1/mu is evaluated instead.
 * Throws EvaluationError if mu hits the pole of the chosen chart.
 */
std::pair<ResidualSample, ResidualSample> mu_residuals(const MuField& mu, SliceKind kind, const RealPoint& y,
                                                       double h);

/*!
 * Second-order checks on a complex function of (y0..y3):
 *   LAPLACE   sum_i d2 phi          WAVE      -d0^2 phi + sum_{i>0} d2 phi
 *   HWC_EUCL  sum_i (d phi)^2       HWC_MINK  -(d0 phi)^2 + sum_{i>0} (d phi)^2
 *   HYP       y0 sum_i d2 phi - 2 d0 phi
 *   ORTHOG    d0 phi                HC0       sum_{i>0} (d phi)^2
 */
ResidualSample pde_residual(const ScalarField& phi, EquationId which, const RealPoint& y, double h);

/*!
 * Local parametrization (zeta, eta) -> [1, w1, w2, w3] of a surface away
 * from w0 = 0, with its partial derivatives and the inverse map.
 */
struct ChartParam {
  std::string name;
  double param = 0.0;
  TwistorSurface surface;
  std::function<C4(cplx zeta, cplx eta)> eval_w;
  std::function<std::pair<C4, C4>(cplx zeta, cplx eta)> eval_dw;
  // (zeta, eta) of a representative with w0 = 1.
  std::function<std::pair<cplx, cplx>(const C4& w)> coords;

  // Theta_a on d/d zeta and d/d eta.
  std::pair<cplx, cplx> eval_theta(cplx a0, cplx zeta, cplx eta) const;
};

// The same contraction taken on central-difference partials of eval_w.
std::pair<cplx, cplx> theta_numeric(const ChartParam& chart, cplx a0, cplx zeta, cplx eta, double h = 1e-6);

// Throws DomainError for surfaces without a chart.
ChartParam chart_for(const Builtin& b);

using ZetaTilde = std::function<cplx(cplx zeta, cplx eta)>;

struct SuperminimalSolution {
  ZetaTilde eval;
  bool closed_form = false;
};

/*!
 * Solution of Theta(d_zeta) d_eta f - Theta(d_eta) d_zeta f = 0. Built-in
 * charts return their closed form; other charts fall back to
 * trace_superminimal with the transversal eta = 1.
 */
SuperminimalSolution solve_superminimal(const ChartParam& chart, cplx a0);

/*!
 * f(zeta, eta) = zeta-coordinate where the characteristic through
 * (zeta, eta) meets eta = eta0, integrated by RK4 along the straight eta
 * path. Throws DomainError where Theta(d_zeta) vanishes on the path.
 */
ZetaTilde trace_superminimal(const ChartParam& chart, cplx a0, cplx eta0, int steps = 200);

// |Theta(d_zeta) d_eta f - Theta(d_eta) d_zeta f| by five-point central differences.
double superminimal_residual(const ChartParam& chart, cplx a0, const ZetaTilde& f, cplx zeta, cplx eta,
                             double h = 1e-3);

/*!
 * phi_a(p) = f_a(zeta(p), eta(p)) for a built-in: mu from the closed form
 * (or the root of the Kerr polynomial nearest to anchor, else the branch-th
 * root in sorted order), then the chart coordinates of the fundamental map.
 * Throws DomainError on the branch locus.
 */
cplx eval_phi_a(const Builtin& b, const C4& a, const NullCoords& p, int branch = 0,
                std::optional<ExtendedComplex> anchor = std::nullopt);

// Root of the Kerr polynomial selected as in eval_phi_a.
ExtendedComplex select_root(const Builtin& b, const NullCoords& p, int branch,
                            std::optional<ExtendedComplex> anchor = std::nullopt);

// -i x1 + r - t arg((r - i t)/(x2 - i x3)), r = sqrt(x2^2 + x3^2 - t^2).
cplx involute_foliation(double t, const Vec3& p);

// Closed-form direction field of the circles example carried to time t.
Vec3 involute_direction(double t, const Vec3& p);

}  // namespace tfe
