#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfe/geom_core.hpp"
#include "tfe/twistor.hpp"

namespace tfe {

struct Term {
  std::array<int, 4> exp{};
  cplx coef;
};

// Homogeneous polynomial psi(w0, w1, w2, w3) defining a hypersurface of CP^3.
struct TwistorSurface {
  int degree = 0;
  std::vector<Term> terms;

  // Throws FormatError naming the first offending term.
  void validate() const;
  cplx evaluate(const C4& w) const;
  // sum over terms of |coef| prod |w_i|^e_i, the magnitude scale of evaluate().
  double magnitude(const C4& w) const;
};

// Parses {"degree": d, "terms": [{"exp": [..], "re": r, "im": i}, ...]}.
TwistorSurface parse_surface_json(std::string_view text);
TwistorSurface load_surface_file(const std::string& path);

// Coefficients c0..cd of psi(1, mu, z1 - mu z2~, z2 + mu z1~) in mu.
struct KerrPoly {
  std::vector<cplx> coeffs;
  // Magnitude bound used to judge vanishing coefficients.
  double scale = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  cplx eval(cplx mu) const;
  // |p(mu)| on coefficients scaled to unit max modulus, measured in the
  // chart mu or 1/mu (whichever has modulus <= 1).
  double normalized_residual(const ExtendedComplex& mu) const;
  // All coefficients negligible against the magnitude scale.
  bool vanishes(double rel_tol = 1e-12) const;
};

KerrPoly kerr_polynomial(const TwistorSurface& psi, const NullCoords& p);

// psi vanishes on the whole fiber CP^1 over the point.
class FiberContainedError : public std::runtime_error {
 public:
  FiberContainedError() : std::runtime_error("surface contains the fiber") {}
};

// All d roots with multiplicity; a degree drop yields roots at infinity.
std::vector<ExtendedComplex> solve_mu(const KerrPoly& poly);

// Quadratic discriminant on unit-normalized coefficients (0 for other degrees).
double normalized_discriminant(const KerrPoly& poly);

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  int count() const;
  double coord(int i) const { return min + i * step; }
};

struct Grid3 {
  std::array<GridAxis, 3> axes;

  // Throws FormatError if any axis has step <= 0 or min >= max.
  void validate() const;
  std::array<int, 3> shape() const;
  size_t size() const;
  size_t index(int i, int j, int k) const;
  std::array<int, 3> unindex(size_t n) const;
  Vec3 node(size_t n) const;
  Vec3 node(int i, int j, int k) const;
  bool contains(const Vec3& x) const;
};

struct FieldSeed {
  Vec3 point;
  ExtendedComplex mu;
  int label = 0;
};

enum NodeState : uint8_t { kUnreached = 0, kAssigned = 1, kSingular = 2 };

/*!
 * Sampled extended-complex direction parameter over a rectilinear grid of
 * slice coordinates (x1, x2, x3). Nodes are reached by breadth-first
 * continuation from seeds; nodes never reached stay kUnreached.
 */
struct DirectionField {
  SliceSpec slice;
  Grid3 grid;
  std::vector<ExtendedComplex> mu;
  std::vector<int> branch;
  std::vector<uint8_t> state;

  bool usable(size_t n) const { return state[n] == kAssigned; }
};

struct ContinuationOptions {
  double collision = 1e-4;      // chordal root separation that marks a branch collision
  double discriminant = 1e-10;  // normalized discriminant magnitude threshold
  double max_jump = 0.3;        // largest chordal change accepted between neighbors
  double ambiguity = 0.5;       // nearest root must be closer than this fraction of the runner-up
  double seed_residual = 1e-8;
  // mask a node when its smallest root separation, extrapolated from the
  // steepest neighbor difference, reaches zero within this many grid steps
  double collision_reach = 1.0;
  // mask a node when the linearized Kerr coefficient vector vanishes within
  // this many grid steps: the fiber-contained locus, where mu has no limit
  double fiber_reach = 0.9;
  // largest relative residual of that linear fit still counted as vanishing
  double fiber_fit = 0.1;
};

// Throws DomainError when a seed is not a root or lies outside the grid.
DirectionField field_over_grid(const TwistorSurface& psi, const SliceSpec& slice, const Grid3& grid,
                               const std::vector<FieldSeed>& seeds,
                               const ContinuationOptions& opt = {});

/*!
 * A surface from the catalogue of worked examples together with any
 * closed forms for its direction parameter mu and for phi_a. Branch 0 is
 * the "+" sign of the closed form, branch 1 the "-" sign.
 */
struct Builtin {
  std::string name;
  double param = 0.0;
  TwistorSurface surface;
  int branches = 1;
  std::function<ExtendedComplex(const NullCoords&, int)> mu;
  std::function<std::optional<cplx>(cplx a0, const NullCoords&, int)> phi;
};

Builtin builtin_surface(std::string_view name, double param = 1.0);
std::vector<std::string> builtin_names();

}  // namespace tfe
