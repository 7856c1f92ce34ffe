#include "lamebie/kelvin.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lamebie/errors.hpp"

namespace lamebie {

namespace {

void require_nonzero(const Eigen::VectorXd& x, const char* what) {
  if (x.squaredNorm() == 0.0) {
    throw DomainError(std::string(what) + ": singular at x = 0");
  }
}

void require_dim(const LameParams& params, const Eigen::VectorXd& x) {
  if (x.size() != params.dim()) {
    throw DomainError("point dimension " + std::to_string(x.size()) + " does not match n = " +
                      std::to_string(params.dim()));
  }
}

}  // namespace

LameParams::LameParams(int n, double omega) : n_(n), omega_(omega) {
  if (n < 2) throw DomainError("dimension must be >= 2");
  const double lower = 1.0 - 2.0 / n;
  if (!(omega > lower) || !std::isfinite(omega)) {
    throw DomainError("omega = " + std::to_string(omega) + " violates omega > 1 - 2/n = " +
                      std::to_string(lower));
  }
}

double unit_sphere_measure(int n) {
  // s_n = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double laplace_fundamental(const LameParams& params, const Eigen::VectorXd& x) {
  require_dim(params, x);
  require_nonzero(x, "laplace_fundamental");
  const int n = params.dim();
  const double r = x.norm();
  const double sn = unit_sphere_measure(n);
  if (n == 2) return std::log(r) / sn;
  return std::pow(r, 2 - n) / ((2 - n) * sn);
}

Eigen::MatrixXd kelvin_matrix(const LameParams& params, const Eigen::VectorXd& x) {
  require_dim(params, x);
  require_nonzero(x, "kelvin_matrix");
  const int n = params.dim();
  const double w = params.omega();
  const double sn = unit_sphere_measure(n);
  const double a = (w + 2.0) / (2.0 * (w + 1.0));
  const double b = w / (2.0 * (w + 1.0)) / sn;
  const double rn = std::pow(x.norm(), n);
  const double s = laplace_fundamental(params, x);
  // outer product first, so the off-diagonal entries are bitwise equal
  Eigen::MatrixXd g = x * x.transpose();
  g *= -(b / rn);
  g.diagonal().array() += a * s;
  return g;
}

std::vector<Eigen::MatrixXd> kelvin_gradient(const LameParams& params, const Eigen::VectorXd& x) {
  require_dim(params, x);
  require_nonzero(x, "kelvin_gradient");
  const int n = params.dim();
  const double w = params.omega();
  const double sn = unit_sphere_measure(n);
  const double a = (w + 2.0) / (2.0 * (w + 1.0));
  const double b = w / (2.0 * (w + 1.0)) / sn;
  const double r2 = x.squaredNorm();
  const double rn = std::pow(r2, 0.5 * n);
  // d S_n / d x_m = x_m / (s_n |x|^n) in every dimension
  // d (x_i x_j |x|^-n) / d x_m = (delta_im x_j + delta_jm x_i)|x|^-n - n x_i x_j x_m |x|^{-n-2}
  std::vector<Eigen::MatrixXd> d(n, Eigen::MatrixXd::Zero(n, n));
  for (int m = 0; m < n; ++m) {
    Eigen::MatrixXd& dm = d[m];
    dm.diagonal().array() += a * x[m] / (sn * rn);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double t = -n * x[i] * x[j] * x[m] / (rn * r2);
        if (i == m) t += x[j] / rn;
        if (j == m) t += x[i] / rn;
        dm(i, j) -= b * t;
      }
    }
  }
  return d;
}

Eigen::MatrixXd stress(const LameParams& params, const Eigen::MatrixXd& A) {
  Eigen::MatrixXd t = A + A.transpose();
  t.diagonal().array() += (params.omega() - 1.0) * A.trace();
  return t;
}

Eigen::VectorXd traction(const LameParams& params, const Eigen::MatrixXd& A, const Eigen::VectorXd& nu) {
  return (params.omega() - 1.0) * A.trace() * nu + A * nu + A.transpose() * nu;
}

Eigen::MatrixXd column_jacobian(const std::vector<Eigen::MatrixXd>& grad, int l) {
  const int n = static_cast<int>(grad.size());
  Eigen::MatrixXd J(n, n);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) J(i, m) = grad[m](i, l);
  }
  return J;
}

Eigen::MatrixXd kelvin_traction_kernel(const LameParams& params, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& nu) {
  const auto grad = kelvin_gradient(params, x);
  const int n = params.dim();
  Eigen::MatrixXd k(n, n);
  for (int l = 0; l < n; ++l) k.col(l) = traction(params, column_jacobian(grad, l), nu);
  return k;
}

}  // namespace lamebie
