#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lamebie {

/// Dimension n and the Lame ratio parameter omega; (omega - 1) is the ratio
/// of the first to the second Lame constant. Requires omega > 1 - 2/n.
class LameParams {
 public:
  LameParams(int n, double omega);

  int dim() const { return n_; }
  double omega() const { return omega_; }

  bool operator==(const LameParams& o) const { return n_ == o.n_ && omega_ == o.omega_; }

 private:
  int n_;
  double omega_;
};

/// (n-1)-dimensional measure of the unit sphere in R^n.
double unit_sphere_measure(int n);

/// Fundamental solution of the Laplacian: log|x|/(2 pi) for n = 2,
/// |x|^{2-n}/((2-n) s_n) otherwise. Throws DomainError at x = 0.
double laplace_fundamental(const LameParams& params, const Eigen::VectorXd& x);

/// Fundamental solution Gamma of L[omega] = Delta + omega grad div.
Eigen::MatrixXd kelvin_matrix(const LameParams& params, const Eigen::VectorXd& x);

/// First derivatives of the Kelvin matrix, laid out as
/// result[m](i, j) = d Gamma_{ij} / d x_m.
std::vector<Eigen::MatrixXd> kelvin_gradient(const LameParams& params, const Eigen::VectorXd& x);

/// Stress map T(omega, A) = (omega - 1) tr(A) I + A + A^t.
Eigen::MatrixXd stress(const LameParams& params, const Eigen::MatrixXd& A);

/// Traction T(omega, A) nu without forming the full stress matrix.
Eigen::VectorXd traction(const LameParams& params, const Eigen::MatrixXd& A, const Eigen::VectorXd& nu);

/// Column j is T(omega, D Gamma^j(x)) nu, where Gamma^j is column j of the
/// Kelvin matrix and D denotes its Jacobian.
Eigen::MatrixXd kelvin_traction_kernel(const LameParams& params, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& nu);

/// Builds the Jacobian of column l from a gradient tensor laid out as in
/// kelvin_gradient: J(i, m) = d Gamma_{il} / d x_m.
Eigen::MatrixXd column_jacobian(const std::vector<Eigen::MatrixXd>& grad, int l);

}  // namespace lamebie
