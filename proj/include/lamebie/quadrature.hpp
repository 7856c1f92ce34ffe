#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lamebie {

// Spectral rules on N = 2n equispaced nodes s_j = 2 pi j / N of [0, 2 pi[.

/// Weights R_j(t) with
///   int_0^{2pi} log(4 sin^2((t - s)/2)) f(s) ds ~= sum_j R_j(t) f(s_j).
std::vector<double> log_weights(int n_nodes, double t);

/// Nodal log weights: entry k is R_j(s_i) for |i - j| = k mod N.
std::vector<double> log_weights_nodal(int n_nodes);

/// Weights H_j(t) with
///   p.v. int_0^{2pi} cot((s - t)/2) f(s) ds ~= sum_j H_j(t) f(s_j).
std::vector<double> hilbert_weights(int n_nodes, double t);

/// Nodal Hilbert weights: entry k is H_j(s_i) for i - j = k mod N.
std::vector<double> hilbert_weights_nodal(int n_nodes);

/// Cardinal trigonometric basis L_j(t) of the interpolant through the nodes.
std::vector<double> trig_basis(int n_nodes, double t);

/// Evaluates the trigonometric interpolant of the rows of `values` (one row
/// per node) at parameter t.
Eigen::RowVectorXd trig_interpolate(const Eigen::MatrixXd& values, double t);

/// Trigonometric interpolant stored by its Fourier coefficients; cheap to
/// evaluate at many parameters.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Eigen::MatrixXd& values);
  Eigen::RowVectorXd operator()(double t) const;
  int size() const { return n_nodes_; }

 private:
  int n_nodes_;
  Eigen::MatrixXd a_;  // cosine coefficients, rows 0..n
  Eigen::MatrixXd b_;  // sine coefficients, rows 0..n
};

}  // namespace lamebie
