#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/nonlinear_system.hpp"

namespace lamebie {

/// u(eps, x) = eps int Gamma^q(x - p - eps s) theta(s) dsigma_s + B q^{-1}(x - p) + xi,
/// for eps > 0 and x outside every hole.
Eigen::Vector2d displacement(const TractionSystem& sys, double eps, const SystemState& state,
                             const Eigen::Vector2d& x);

/// Macroscopic map U[eps](x): the same formula for every eps of the branch,
/// including eps <= 0 (formal continuation).
std::vector<std::pair<double, Eigen::Vector2d>> macroscopic_trace(const TractionSystem& sys,
                                                                  const SolutionBranch& branch,
                                                                  const Eigen::Vector2d& x);

/// U_r[eps](t) = eps v[theta](t) + eps int R^q(eps(t - s)) theta dsigma + xi + eps B q^{-1} t.
Eigen::Vector2d microscopic_value(const TractionSystem& sys, double eps, const SystemState& state,
                                  const Eigen::Vector2d& t);

std::vector<std::pair<double, Eigen::Vector2d>> microscopic_trace(const TractionSystem& sys,
                                                                  const SolutionBranch& branch,
                                                                  const Eigen::Vector2d& t);

struct PolyFit {
  /// coefficients(k, c): coefficient of eps^k for component c.
  Eigen::MatrixXd coefficients;
  double max_residual = 0.0;
};

/// Least-squares polynomial fit in eps per component, solved by column-pivoted
/// QR on a Vandermonde matrix in eps / max|eps|.
PolyFit analyticity_fit(const std::vector<std::pair<double, Eigen::VectorXd>>& samples, int degree);

/// Residual of the original boundary condition at the curve parameters
/// `params`: traction of u (exterior one-sided limit) minus G((x-p)/eps, u),
/// evaluated with interpolated density values. Returns the max norm.
double boundary_condition_residual(const TractionSystem& sys, double eps, const SystemState& state,
                                   const std::vector<double>& params);

/// int over the scaled hole boundary of T(omega, D u) nu.
Eigen::Vector2d net_traction(const TractionSystem& sys, double eps, const SystemState& state);

}  // namespace lamebie
