#include "lamebie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lamebie/errors.hpp"

namespace lamebie {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] * b[1] - a[1] * b[0]; }

bool segments_cross(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                    const Eigen::Vector2d& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

CircleShape::CircleShape(double radius) : r_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("circle radius must be positive");
}
Eigen::Vector2d CircleShape::point(double s) const { return r_ * Eigen::Vector2d(std::cos(s), std::sin(s)); }
Eigen::Vector2d CircleShape::d1(double s) const { return r_ * Eigen::Vector2d(-std::sin(s), std::cos(s)); }
Eigen::Vector2d CircleShape::d2(double s) const { return -point(s); }

EllipseShape::EllipseShape(double semi_x, double semi_y) : a_(semi_x), b_(semi_y) {
  if (!(a_ > 0.0) || !(b_ > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
}
Eigen::Vector2d EllipseShape::point(double s) const { return {a_ * std::cos(s), b_ * std::sin(s)}; }
Eigen::Vector2d EllipseShape::d1(double s) const { return {-a_ * std::sin(s), b_ * std::cos(s)}; }
Eigen::Vector2d EllipseShape::d2(double s) const { return -point(s); }

StarShape::StarShape(double r0, double amplitude, int lobes) : r0_(r0), a_(amplitude), k_(lobes) {
  if (!(r0 > 0.0)) throw GeometryError("star radius must be positive");
  if (lobes < 1) throw GeometryError("star needs at least one lobe");
  const double amax = 1.0 / (lobes * lobes + 1.0);
  if (!(amplitude >= 0.0) || !(amplitude < amax)) {
    throw GeometryError("star amplitude must lie in [0, " + std::to_string(amax) + "[");
  }
}

Eigen::Vector2d StarShape::point(double s) const {
  const double r = r0_ * (1.0 + a_ * std::cos(k_ * s));
  return {r * std::cos(s), r * std::sin(s)};
}

Eigen::Vector2d StarShape::d1(double s) const {
  const double r = r0_ * (1.0 + a_ * std::cos(k_ * s));
  const double dr = -r0_ * a_ * k_ * std::sin(k_ * s);
  const double c = std::cos(s), sn = std::sin(s);
  return {dr * c - r * sn, dr * sn + r * c};
}

Eigen::Vector2d StarShape::d2(double s) const {
  const double r = r0_ * (1.0 + a_ * std::cos(k_ * s));
  const double dr = -r0_ * a_ * k_ * std::sin(k_ * s);
  const double ddr = -r0_ * a_ * k_ * k_ * std::cos(k_ * s);
  const double c = std::cos(s), sn = std::sin(s);
  return {ddr * c - 2.0 * dr * sn - r * c, ddr * sn + 2.0 * dr * c - r * sn};
}

FourierShape::FourierShape(std::vector<double> cos_x, std::vector<double> sin_x, std::vector<double> cos_y,
                           std::vector<double> sin_y)
    : cx_(std::move(cos_x)), sx_(std::move(sin_x)), cy_(std::move(cos_y)), sy_(std::move(sin_y)) {
  const std::size_t m = std::max({cx_.size(), sx_.size(), cy_.size(), sy_.size()});
  if (m < 2) throw GeometryError("Fourier shape needs at least the first harmonic");
  cx_.resize(m, 0.0);
  sx_.resize(m, 0.0);
  cy_.resize(m, 0.0);
  sy_.resize(m, 0.0);
}

FourierShape FourierShape::from_samples(const std::vector<Eigen::Vector2d>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 8) throw GeometryError("need at least 8 samples for a Fourier shape");
  const int mmax = (n - 1) / 2;
  std::vector<double> cx(mmax + 1), sx(mmax + 1), cy(mmax + 1), sy(mmax + 1);
  for (int m = 0; m <= mmax; ++m) {
    double ax = 0, bx = 0, ay = 0, by = 0;
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * kPi * j / n;
      const double c = std::cos(m * t), s = std::sin(m * t);
      ax += samples[j][0] * c;
      bx += samples[j][0] * s;
      ay += samples[j][1] * c;
      by += samples[j][1] * s;
    }
    const double f = (m == 0 ? 1.0 : 2.0) / n;
    cx[m] = f * ax;
    sx[m] = f * bx;
    cy[m] = f * ay;
    sy[m] = f * by;
  }
  sx[0] = sy[0] = 0.0;
  return FourierShape(cx, sx, cy, sy);
}

Eigen::Vector2d FourierShape::eval(double s, int order) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  if (order == 0) v = {cx_[0], cy_[0]};
  for (std::size_t m = 1; m < cx_.size(); ++m) {
    const double c = std::cos(m * s), sn = std::sin(m * s);
    const double mm = static_cast<double>(m);
    double fc, fs;  // derivative of cos(ms) and sin(ms)
    switch (order) {
      case 0: fc = c; fs = sn; break;
      case 1: fc = -mm * sn; fs = mm * c; break;
      default: fc = -mm * mm * c; fs = -mm * mm * sn; break;
    }
    v[0] += cx_[m] * fc + sx_[m] * fs;
    v[1] += cy_[m] * fc + sy_[m] * fs;
  }
  return v;
}

Eigen::Vector2d FourierShape::point(double s) const { return eval(s, 0); }
Eigen::Vector2d FourierShape::d1(double s) const { return eval(s, 1); }
Eigen::Vector2d FourierShape::d2(double s) const { return eval(s, 2); }

TransformedShape::TransformedShape(ShapePtr base, Eigen::Vector2d center, double scale)
    : base_(std::move(base)), center_(std::move(center)), scale_(scale) {
  if (!base_) throw GeometryError("transformed shape needs a base shape");
  if (!(scale > 0.0)) throw GeometryError("shape scale must be positive");
}
Eigen::Vector2d TransformedShape::point(double s) const { return center_ + scale_ * base_->point(s); }
Eigen::Vector2d TransformedShape::d1(double s) const { return scale_ * base_->d1(s); }
Eigen::Vector2d TransformedShape::d2(double s) const { return scale_ * base_->d2(s); }
Eigen::Vector2d TransformedShape::interior_point() const { return center_ + scale_ * base_->interior_point(); }

double BoundaryGrid::length() const {
  double l = 0.0;
  for (double w : weights) l += w;
  return l;
}

double BoundaryGrid::circumradius() const {
  const Eigen::Vector2d c = shape->interior_point();
  double r = 0.0;
  for (const auto& x : nodes) r = std::max(r, (x - c).norm());
  return r;
}

BoundaryGrid build_grid(ShapePtr shape, int n, bool check_simple) {
  if (!shape) throw GeometryError("build_grid: null shape");
  if (n < 16 || n % 2 != 0) throw GeometryError("grid size must be even and >= 16, got " + std::to_string(n));
  BoundaryGrid g;
  g.shape = shape;
  g.n = n;
  g.h = 2.0 * kPi / n;
  g.params.resize(n);
  g.nodes.resize(n);
  g.d1.resize(n);
  g.d2.resize(n);
  g.normals.resize(n);
  g.speeds.resize(n);
  g.weights.resize(n);
  g.curvature.resize(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = g.h * i;
    g.params[i] = s;
    g.nodes[i] = shape->point(s);
    g.d1[i] = shape->d1(s);
    g.d2[i] = shape->d2(s);
    g.speeds[i] = g.d1[i].norm();
    scale = std::max(scale, (g.nodes[i] - shape->interior_point()).norm());
  }
  for (int i = 0; i < n; ++i) {
    const double sp = g.speeds[i];
    if (!(sp > 1e-12 * scale)) throw GeometryError("parametrization has zero speed at node " + std::to_string(i));
    g.normals[i] = Eigen::Vector2d(g.d1[i][1], -g.d1[i][0]) / sp;
    g.weights[i] = g.h * sp;
    g.curvature[i] = cross(g.d1[i], g.d2[i]) / (sp * sp * sp);
  }
  for (int i = 0; i < n && check_simple; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(g.nodes[i], g.nodes[(i + 1) % n], g.nodes[j], g.nodes[(j + 1) % n])) {
        throw GeometryError("curve self-intersects at resolution N = " + std::to_string(n));
      }
    }
  }
  if (enclosed_area(g) <= 0.0) throw GeometryError("curve must be positively oriented");
  if (!inside_curve(g, shape->interior_point())) throw GeometryError("interior point is not enclosed by the curve");
  return g;
}

BoundaryGrid placed_grid(const ShapePtr& shape, const Eigen::Vector2d& center, double scale, int n) {
  return build_grid(std::make_shared<TransformedShape>(shape, center, scale), n);
}

double enclosed_area(const BoundaryGrid& grid) {
  double a = 0.0;
  for (int i = 0; i < grid.n; ++i) a += grid.nodes[i].dot(grid.normals[i]) * grid.weights[i];
  return 0.5 * a;
}

bool inside_curve(const BoundaryGrid& grid, const Eigen::Vector2d& x) {
  double wind = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const Eigen::Vector2d a = grid.nodes[i] - x;
    const Eigen::Vector2d b = grid.nodes[(i + 1) % grid.n] - x;
    wind += std::atan2(cross(a, b), a.dot(b));
  }
  return std::abs(wind) > kPi;
}

double distance_to_curve(const BoundaryGrid& grid, const Eigen::Vector2d& x) {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.n; ++i) {
    const Eigen::Vector2d a = grid.nodes[i];
    const Eigen::Vector2d e = grid.nodes[(i + 1) % grid.n] - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    d = std::min(d, (a + t * e - x).norm());
  }
  return d;
}

namespace {

// max over s of +/- gamma_j(s): dense sampling plus Newton on gamma_j' = 0
double coordinate_extremum(const HoleShape& shape, int j, double sign) {
  const int m = 4096;
  double best = -std::numeric_limits<double>::infinity(), best_s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double s = 2.0 * kPi * i / m;
    const double v = sign * shape.point(s)[j];
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  double s = best_s;
  for (int it = 0; it < 30; ++it) {
    const double f1 = sign * shape.d1(s)[j];
    const double f2 = sign * shape.d2(s)[j];
    if (f2 >= 0.0) break;
    const double step = -f1 / f2;
    if (std::abs(step) > 2.0 * kPi / m) break;
    s += step;
    if (std::abs(step) < 1e-15) break;
  }
  return std::max(best, sign * shape.point(s)[j]);
}

}  // namespace

double compute_eps0(const HoleShape& shape, const LatticeCell& cell, const Eigen::Vector2d& p) {
  if (cell.dim() != 2) throw GeometryError("compute_eps0: only n = 2 is supported");
  double eps0 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 2; ++j) {
    const double q = cell.q(j);
    if (!(p[j] > 0.0 && p[j] < q)) {
      throw GeometryError("placement point must lie in the open cell (coordinate " + std::to_string(j + 1) + ")");
    }
    const double hi = coordinate_extremum(shape, j, 1.0);
    const double lo = -coordinate_extremum(shape, j, -1.0);
    // positive eps pushes the curve by eps*[lo, hi], negative eps by |eps|*[-hi, -lo]
    if (hi > 0.0) eps0 = std::min({eps0, (q - p[j]) / hi, p[j] / hi});
    if (lo < 0.0) eps0 = std::min({eps0, p[j] / (-lo), (q - p[j]) / (-lo)});
  }
  return eps0;
}

void check_placement(const HoleShape& shape, const LatticeCell& cell, const Placement& placement) {
  const double eps0 = compute_eps0(shape, cell, placement.p);
  if (!(std::abs(placement.epsilon) < eps0)) {
    throw GeometryError("|eps| = " + std::to_string(std::abs(placement.epsilon)) + " is not below eps0 = " +
                        std::to_string(eps0));
  }
}

}  // namespace lamebie
