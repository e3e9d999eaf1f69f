#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfe/geom_core.hpp"
#include "tfe/numdiff.hpp"
#include "tfe/surface.hpp"

namespace tfe {

enum class EquationId { HC0, CONF, ER1, ER2, EM1, EM2, WAVE, HWC_MINK, LAPLACE, HWC_EUCL, HYP, ORTHOG };

std::string_view to_string(EquationId id);
std::optional<EquationId> equation_from_string(std::string_view s);

struct ResidualSample {
  EquationId id = EquationId::HC0;
  RealPoint point;
  double h = 0.0;
  double value = 0.0;
};

// Value of a direction field at a point, or why there is none.
struct FieldSample {
  enum Status { kOk, kOutside, kMasked };
  Status status = kOk;
  Vec3 U = Vec3::Zero();
};

using VectorField = std::function<FieldSample(const Vec3&)>;
// A direction field that throws DomainError where undefined.
using DirectionFn = std::function<Vec3(const Vec3&)>;

DirectionFn as_direction_fn(const VectorField& f);
VectorField as_vector_field(const DirectionFn& f);

/*!
 * Unit vector field U = direction(mu) on an R3 slice, with mu interpolated
 * trilinearly inside each grid cell. Interpolation runs in the chart mu when
 * every corner has |mu| <= 1, otherwise in 1/mu; a cell touching an
 * unassigned node is reported masked.
 */
class SampledDirectionField {
 public:
  explicit SampledDirectionField(DirectionField field);

  FieldSample operator()(const Vec3& x) const;
  // Interpolated mu; empty outside the grid or in a masked cell.
  std::optional<ExtendedComplex> mu_at(const Vec3& x) const;
  const DirectionField& field() const { return field_; }
  // Direction at node n (requires an assigned node).
  Direction3 node_direction(size_t n) const;

 private:
  DirectionField field_;
};

SampledDirectionField direction_field_r3(const DirectionField& field);

enum class StopReason { kBoundary, kSingularMask, kClosure, kStepLimit };
std::string_view to_string(StopReason r);

struct Leaf {
  std::vector<Vec3> points;
  std::vector<double> arclength;
  bool closed = false;
  StopReason stop_reason = StopReason::kStepLimit;

  double closure_gap() const { return points.empty() ? 0.0 : (points.back() - points.front()).norm(); }
};

struct TraceOptions {
  double step = 0.01;
  double max_len = 20.0;
  double closure_tol = 1e-3;
  double closure_dot = 0.999;
  double angle_cap = 0.1;
  int max_halvings = 2;
};

// Integrates dx/ds = U(x) with classical RK4; throws DomainError on an invalid seed.
Leaf trace_leaf(const VectorField& U, const Vec3& seed, const TraceOptions& opt = {});

struct AssociatedOptions {
  double damping = 0.5;
  int newton_after = 50;
  int max_iter = 500;
  double tol = 1e-10;
  double jacobian_h = 1e-6;
};

// Solves W = U0(p - t W); throws ConvergenceError outside the regular region.
Direction3 associated_field(const DirectionFn& U0, double t, const Vec3& p, const AssociatedOptions& opt = {});

// |grad_{U x X} U - U x grad_X U| with X = e2(U(p)), projected to U(p)^perp.
ResidualSample shear_residual(const DirectionFn& U, const Vec3& p, double h);

// |sum_i (df/dx_i)^2| over x1, x2, x3.
ResidualSample hwc3_residual(const std::function<cplx(const Vec3&)>& f, const Vec3& p, double h);

}  // namespace tfe
