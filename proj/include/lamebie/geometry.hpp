#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/lattice.hpp"

namespace lamebie {

/// Smooth closed curve given by a 2pi-periodic parametrization, positively
/// oriented, enclosing interior_point().
class HoleShape {
 public:
  virtual ~HoleShape() = default;
  virtual Eigen::Vector2d point(double s) const = 0;
  virtual Eigen::Vector2d d1(double s) const = 0;
  virtual Eigen::Vector2d d2(double s) const = 0;
  virtual Eigen::Vector2d interior_point() const { return Eigen::Vector2d::Zero(); }
};

using ShapePtr = std::shared_ptr<const HoleShape>;

class CircleShape : public HoleShape {
 public:
  explicit CircleShape(double radius);
  Eigen::Vector2d point(double s) const override;
  Eigen::Vector2d d1(double s) const override;
  Eigen::Vector2d d2(double s) const override;
  double radius() const { return r_; }

 private:
  double r_;
};

class EllipseShape : public HoleShape {
 public:
  EllipseShape(double semi_x, double semi_y);
  Eigen::Vector2d point(double s) const override;
  Eigen::Vector2d d1(double s) const override;
  Eigen::Vector2d d2(double s) const override;

 private:
  double a_, b_;
};

/// r(phi) = r0 (1 + a cos(k phi)), 0 <= a < 1/(k^2 + 1).
class StarShape : public HoleShape {
 public:
  StarShape(double r0, double amplitude, int lobes);
  Eigen::Vector2d point(double s) const override;
  Eigen::Vector2d d1(double s) const override;
  Eigen::Vector2d d2(double s) const override;

 private:
  double r0_, a_;
  int k_;
};

/// gamma(s) = sum_m cx_m cos(ms) + sx_m sin(ms) (and likewise for y); index 0
/// of the cosine tables is the mean.
class FourierShape : public HoleShape {
 public:
  FourierShape(std::vector<double> cos_x, std::vector<double> sin_x, std::vector<double> cos_y,
               std::vector<double> sin_y);
  /// Coefficients from N equispaced samples gamma(2 pi j / N), truncated below
  /// the Nyquist mode.
  static FourierShape from_samples(const std::vector<Eigen::Vector2d>& samples);

  Eigen::Vector2d point(double s) const override;
  Eigen::Vector2d d1(double s) const override;
  Eigen::Vector2d d2(double s) const override;

  const std::vector<double>& cos_x() const { return cx_; }
  const std::vector<double>& sin_x() const { return sx_; }
  const std::vector<double>& cos_y() const { return cy_; }
  const std::vector<double>& sin_y() const { return sy_; }

 private:
  Eigen::Vector2d eval(double s, int order) const;
  std::vector<double> cx_, sx_, cy_, sy_;
};

/// center + scale * base(s), scale > 0.
class TransformedShape : public HoleShape {
 public:
  TransformedShape(ShapePtr base, Eigen::Vector2d center, double scale);
  Eigen::Vector2d point(double s) const override;
  Eigen::Vector2d d1(double s) const override;
  Eigen::Vector2d d2(double s) const override;
  Eigen::Vector2d interior_point() const override;

 private:
  ShapePtr base_;
  Eigen::Vector2d center_;
  double scale_;
};

/// Equispaced Nystrom grid on a hole boundary.
struct BoundaryGrid {
  ShapePtr shape;
  int n = 0;
  double h = 0.0;  // parameter step 2 pi / N
  std::vector<double> params;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<Eigen::Vector2d> d1;
  std::vector<Eigen::Vector2d> d2;
  std::vector<Eigen::Vector2d> normals;
  std::vector<double> speeds;
  std::vector<double> weights;
  std::vector<double> curvature;

  int size() const { return n; }
  double length() const;
  /// Largest node distance from the interior point.
  double circumradius() const;
};

/// The simplicity test is O(N^2); fine auxiliary grids may skip it.
BoundaryGrid build_grid(ShapePtr shape, int n, bool check_simple = true);

/// Grid of center + scale * shape built from the same parametrization.
BoundaryGrid placed_grid(const ShapePtr& shape, const Eigen::Vector2d& center, double scale, int n);

double enclosed_area(const BoundaryGrid& grid);

/// Winding number test against the grid polygon.
bool inside_curve(const BoundaryGrid& grid, const Eigen::Vector2d& x);

/// Distance from x to the grid polygon (resolution-limited).
double distance_to_curve(const BoundaryGrid& grid, const Eigen::Vector2d& x);

struct Placement {
  Eigen::Vector2d p;
  double epsilon = 0.0;
};

/// Largest eps0 with cl(p + eps Omega) inside the cell for all |eps| < eps0.
double compute_eps0(const HoleShape& shape, const LatticeCell& cell, const Eigen::Vector2d& p);

/// Throws GeometryError unless |placement.epsilon| < compute_eps0.
void check_placement(const HoleShape& shape, const LatticeCell& cell, const Placement& placement);

}  // namespace lamebie
