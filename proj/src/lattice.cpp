#include "lamebie/lattice.hpp"

#include <cmath>
#include <string>

#include "lamebie/errors.hpp"

namespace lamebie {

LatticeCell::LatticeCell(Eigen::VectorXd q_diag) : q_(std::move(q_diag)), volume_(1.0) {
  if (q_.size() < 2) {
    throw DomainError("lattice cell needs dimension >= 2, got " + std::to_string(q_.size()));
  }
  for (Eigen::Index j = 0; j < q_.size(); ++j) {
    if (!(q_[j] > 0.0) || !std::isfinite(q_[j])) {
      throw DomainError("lattice period q_" + std::to_string(j + 1) + " must be positive and finite");
    }
    volume_ *= q_[j];
  }
}

Eigen::VectorXd LatticeCell::apply_inverse(const Eigen::VectorXd& x) const {
  return x.cwiseQuotient(q_);
}

Eigen::VectorXd LatticeCell::lattice_point(const Eigen::VectorXi& z) const {
  return z.cast<double>().cwiseProduct(q_);
}

double cell_volume(const LatticeCell& cell) { return cell.volume(); }

Eigen::VectorXd dual_vector(const LatticeCell& cell, const Eigen::VectorXi& z) {
  return cell.apply_inverse(z.cast<double>());
}

Eigen::VectorXd wrap_to_cell(const LatticeCell& cell, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double q = cell.q(static_cast<int>(j));
    double r = x[j] - q * std::floor(x[j] / q);
    // floor can leave r == q after rounding for tiny negative inputs
    if (r >= q) r -= q;
    if (r < 0.0) r = 0.0;
    y[j] = r;
  }
  return y;
}

Eigen::VectorXd wrap_centered(const LatticeCell& cell, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double q = cell.q(static_cast<int>(j));
    y[j] = x[j] - q * std::round(x[j] / q);
  }
  return y;
}

double distance_to_lattice(const LatticeCell& cell, const Eigen::VectorXd& x) {
  return wrap_centered(cell, x).norm();
}

}  // namespace lamebie
