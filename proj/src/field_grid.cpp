#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include <Eigen/QR>

#include "tfe/error.hpp"
#include "tfe/surface.hpp"

namespace tfe {

int GridAxis::count() const {
  if (!(step > 0.0) || !(max > min)) return 0;
  return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

void Grid3::validate() const {
  static const char* names[3] = {"x1", "x2", "x3"};
  for (int a = 0; a < 3; ++a) {
    const GridAxis& ax = axes[a];
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || !std::isfinite(ax.step)) {
      throw FormatError(std::string("grid axis ") + names[a] + ": values must be finite");
    }
    if (!(ax.step > 0.0)) throw FormatError(std::string("grid axis ") + names[a] + ": step must be positive");
    if (!(ax.min < ax.max)) throw FormatError(std::string("grid axis ") + names[a] + ": min must be below max");
  }
}

std::array<int, 3> Grid3::shape() const { return {axes[0].count(), axes[1].count(), axes[2].count()}; }

size_t Grid3::size() const {
  auto s = shape();
  return static_cast<size_t>(s[0]) * s[1] * s[2];
}

size_t Grid3::index(int i, int j, int k) const {
  auto s = shape();
  return (static_cast<size_t>(i) * s[1] + j) * s[2] + k;
}

std::array<int, 3> Grid3::unindex(size_t n) const {
  auto s = shape();
  int k = static_cast<int>(n % s[2]);
  n /= s[2];
  int j = static_cast<int>(n % s[1]);
  int i = static_cast<int>(n / s[1]);
  return {i, j, k};
}

Vec3 Grid3::node(int i, int j, int k) const {
  return Vec3(axes[0].coord(i), axes[1].coord(j), axes[2].coord(k));
}

Vec3 Grid3::node(size_t n) const {
  auto ijk = unindex(n);
  return node(ijk[0], ijk[1], ijk[2]);
}

bool Grid3::contains(const Vec3& x) const {
  auto s = shape();
  for (int a = 0; a < 3; ++a) {
    double hi = axes[a].coord(s[a] - 1);
    if (!(x[a] >= axes[a].min && x[a] <= hi)) return false;
  }
  return true;
}

namespace {

struct NodeRoots {
  bool singular = false;
  std::vector<ExtendedComplex> roots;
  std::vector<cplx> coeffs;
};

NodeRoots classify(const TwistorSurface& psi, const NullCoords& p, const ContinuationOptions& opt) {
  NodeRoots out;
  KerrPoly poly = kerr_polynomial(psi, p);
  out.coeffs = poly.coeffs;
  try {
    out.roots = solve_mu(poly);
  } catch (const FiberContainedError&) {
    out.singular = true;
    return out;
  }
  if (poly.degree() == 2 && normalized_discriminant(poly) < opt.discriminant) out.singular = true;
  for (size_t i = 0; i < out.roots.size() && !out.singular; ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (chordal_distance(out.roots[i], out.roots[j]) < opt.collision) {
        out.singular = true;
        break;
      }
    }
  }
  return out;
}

// Smallest chordal separation between roots; infinite below two roots.
double separation(const NodeRoots& nr) {
  double s = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < nr.roots.size(); ++i) {
    for (size_t j = 0; j < i; ++j) s = std::min(s, chordal_distance(nr.roots[i], nr.roots[j]));
  }
  return s;
}

// Index of the root nearest to ref and the two smallest distances.
struct Nearest {
  size_t index = 0;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
};

Nearest nearest_root(const std::vector<ExtendedComplex>& roots, const ExtendedComplex& ref) {
  Nearest n;
  for (size_t i = 0; i < roots.size(); ++i) {
    double d = chordal_distance(roots[i], ref);
    if (d < n.d1) {
      n.d2 = n.d1;
      n.d1 = d;
      n.index = i;
    } else if (d < n.d2) {
      n.d2 = d;
    }
  }
  return n;
}

}  // namespace

DirectionField field_over_grid(const TwistorSurface& psi, const SliceSpec& slice, const Grid3& grid,
                               const std::vector<FieldSeed>& seeds, const ContinuationOptions& opt) {
  grid.validate();
  if (grid.size() == 0) throw DomainError("grid is empty");
  if (seeds.empty()) throw DomainError("no seed given");

  DirectionField f;
  f.slice = slice;
  f.grid = grid;
  const size_t n = grid.size();
  f.mu.assign(n, ExtendedComplex());
  f.branch.assign(n, -1);
  f.state.assign(n, kUnreached);

  static const int offsets[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
  auto shape = grid.shape();
  auto neighbor = [&](size_t idx, const int* o) -> std::optional<size_t> {
    auto c = grid.unindex(idx);
    int i = c[0] + o[0], j = c[1] + o[1], k = c[2] + o[2];
    if (i < 0 || j < 0 || k < 0 || i >= shape[0] || j >= shape[1] || k >= shape[2]) return std::nullopt;
    return grid.index(i, j, k);
  };

  std::vector<NodeRoots> cache(n);
  std::vector<double> sep(n);
  for (size_t idx = 0; idx < n; ++idx) {
    cache[idx] = classify(psi, slice.spatial_point(grid.node(idx)), opt);
    sep[idx] = cache[idx].roots.empty() ? std::numeric_limits<double>::quiet_NaN() : separation(cache[idx]);
  }
  // Distance, in grid steps, to the zero of the linearized coefficient
  // vector; infinite when the linear model does not reach zero.
  auto fiber_distance = [&](size_t idx) {
    const std::vector<cplx>& c = cache[idx].coeffs;
    const int m = static_cast<int>(c.size());
    Eigen::MatrixXd J(2 * m, 3);
    Eigen::VectorXd rhs(2 * m);
    for (int i = 0; i < m; ++i) {
      rhs(2 * i) = -c[i].real();
      rhs(2 * i + 1) = -c[i].imag();
    }
    for (int a = 0; a < 3; ++a) {
      int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
      lo[a] = -1;
      hi[a] = 1;
      auto nl = neighbor(idx, lo), nh = neighbor(idx, hi);
      size_t l = nl ? *nl : idx, h = nh ? *nh : idx;
      if (l == h || cache[l].coeffs.size() != c.size() || cache[h].coeffs.size() != c.size()) {
        return std::numeric_limits<double>::infinity();
      }
      double span = (nl ? 1.0 : 0.0) + (nh ? 1.0 : 0.0);
      for (int i = 0; i < m; ++i) {
        cplx d = (cache[h].coeffs[i] - cache[l].coeffs[i]) / span;
        J(2 * i, a) = d.real();
        J(2 * i + 1, a) = d.imag();
      }
    }
    Eigen::Vector3d dx = J.completeOrthogonalDecomposition().solve(rhs);
    if ((J * dx - rhs).norm() > opt.fiber_fit * rhs.norm()) return std::numeric_limits<double>::infinity();
    return dx.norm();
  };
  // collisions and fiber-contained points falling between nodes
  std::vector<size_t> near_singular;
  for (size_t idx = 0; idx < n; ++idx) {
    if (cache[idx].singular) continue;
    double sep_slope = 0.0;
    for (const auto& o : offsets) {
      auto nb = neighbor(idx, o);
      if (!nb) continue;
      if (std::isfinite(sep[idx]) && std::isfinite(sep[*nb])) sep_slope = std::max(sep_slope, std::abs(sep[idx] - sep[*nb]));
    }
    bool collide = std::isfinite(sep[idx]) && sep[idx] < opt.collision_reach * sep_slope;
    bool fiber = !cache[idx].coeffs.empty() && fiber_distance(idx) < opt.fiber_reach;
    if (collide || fiber) near_singular.push_back(idx);
  }
  for (size_t idx : near_singular) cache[idx].singular = true;
  auto roots_at = [&](size_t idx) -> const NodeRoots& { return cache[idx]; };

  std::deque<size_t> queue;
  for (const FieldSeed& s : seeds) {
    if (!grid.contains(s.point)) throw DomainError("seed lies outside the grid");
    KerrPoly poly = kerr_polynomial(psi, slice.spatial_point(s.point));
    if (poly.vanishes() || poly.normalized_residual(s.mu) >= opt.seed_residual) {
      throw DomainError("seed value is not a root at the seed point");
    }
    std::array<int, 3> ijk;
    for (int a = 0; a < 3; ++a) {
      ijk[a] = static_cast<int>(std::lround((s.point[a] - grid.axes[a].min) / grid.axes[a].step));
      ijk[a] = std::clamp(ijk[a], 0, shape[a] - 1);
    }
    size_t idx = grid.index(ijk[0], ijk[1], ijk[2]);
    if (f.state[idx] != kUnreached) continue;
    const NodeRoots& nr = roots_at(idx);
    if (nr.singular) {
      f.state[idx] = kSingular;
      continue;
    }
    Nearest near = nearest_root(nr.roots, s.mu);
    f.mu[idx] = nr.roots[near.index];
    f.branch[idx] = s.label;
    f.state[idx] = kAssigned;
    queue.push_back(idx);
  }

  while (!queue.empty()) {
    size_t cur = queue.front();
    queue.pop_front();
    for (const auto& o : offsets) {
      auto next = neighbor(cur, o);
      if (!next) continue;
      size_t nb = *next;
      if (f.state[nb] != kUnreached) continue;
      const NodeRoots& nr = roots_at(nb);
      if (nr.singular) {
        f.state[nb] = kSingular;
        continue;
      }
      Nearest near = nearest_root(nr.roots, f.mu[cur]);
      if (near.d1 > opt.max_jump) continue;
      if (nr.roots.size() > 1 && near.d1 > opt.ambiguity * near.d2) continue;
      f.mu[nb] = nr.roots[near.index];
      f.branch[nb] = f.branch[cur];
      f.state[nb] = kAssigned;
      queue.push_back(nb);
    }
  }
  return f;
}

}  // namespace tfe
