#pragma once

#include <Eigen/Dense>

namespace lamebie {

/// Rectangular periodicity cell Q = ]0,q_11[ x ... x ]0,q_nn[.
///
/// Only diagonal period matrices are supported. The cell is immutable after
/// construction.
class LatticeCell {
 public:
  explicit LatticeCell(Eigen::VectorXd q_diag);

  int dim() const { return static_cast<int>(q_.size()); }
  const Eigen::VectorXd& q_diag() const { return q_; }
  double q(int j) const { return q_[j]; }
  double volume() const { return volume_; }
  double min_period() const { return q_.minCoeff(); }

  /// q^{-1} x, componentwise division.
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& x) const;

  /// q z.
  Eigen::VectorXd lattice_point(const Eigen::VectorXi& z) const;

  bool operator==(const LatticeCell& other) const { return q_ == other.q_; }

 private:
  Eigen::VectorXd q_;
  double volume_;
};

double cell_volume(const LatticeCell& cell);

/// Reciprocal vector q^{-1} z.
Eigen::VectorXd dual_vector(const LatticeCell& cell, const Eigen::VectorXi& z);

/// Representative of x modulo q Z^n in [0,q_11[ x ... x [0,q_nn[.
Eigen::VectorXd wrap_to_cell(const LatticeCell& cell, const Eigen::VectorXd& x);

/// Representative of x modulo q Z^n in [-q_jj/2, q_jj/2[, i.e. the offset
/// from the nearest lattice point.
Eigen::VectorXd wrap_centered(const LatticeCell& cell, const Eigen::VectorXd& x);

/// Euclidean distance from x to the lattice q Z^n.
double distance_to_lattice(const LatticeCell& cell, const Eigen::VectorXd& x);

}  // namespace lamebie
