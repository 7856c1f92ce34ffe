#include "lamebie/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "lamebie/errors.hpp"

namespace lamebie {

namespace {

constexpr double kPi = std::numbers::pi;

void require_even(int n_nodes) {
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw DomainError("spectral rules need an even node count >= 4, got " + std::to_string(n_nodes));
  }
}

}  // namespace

std::vector<double> log_weights(int n_nodes, double t) {
  require_even(n_nodes);
  const int n = n_nodes / 2;
  std::vector<double> w(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    const double d = t - 2.0 * kPi * j / n_nodes;
    double sum = 0.0;
    for (int m = 1; m < n; ++m) sum += std::cos(m * d) / m;
    w[j] = -2.0 * kPi / n * sum - kPi / (double(n) * n) * std::cos(n * d);
  }
  return w;
}

std::vector<double> log_weights_nodal(int n_nodes) { return log_weights(n_nodes, 0.0); }

std::vector<double> hilbert_weights(int n_nodes, double t) {
  require_even(n_nodes);
  const int n = n_nodes / 2;
  std::vector<double> w(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    const double d = t - 2.0 * kPi * j / n_nodes;
    double sum = 0.0;
    for (int m = 1; m < n; ++m) sum += std::sin(m * d);
    w[j] = 2.0 * kPi / n_nodes * (-2.0 * sum - std::sin(n * d));
  }
  return w;
}

std::vector<double> hilbert_weights_nodal(int n_nodes) {
  require_even(n_nodes);
  // closed form of hilbert_weights at the nodes: only odd offsets contribute
  std::vector<double> w(n_nodes, 0.0);
  for (int k = 1; k < n_nodes; k += 2) {
    w[k] = -4.0 * kPi / n_nodes / std::tan(kPi * k / n_nodes);
  }
  return w;
}

std::vector<double> trig_basis(int n_nodes, double t) {
  require_even(n_nodes);
  const int n = n_nodes / 2;
  std::vector<double> b(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    const double d = t - 2.0 * kPi * j / n_nodes;
    double sum = 1.0;
    for (int m = 1; m < n; ++m) sum += 2.0 * std::cos(m * d);
    sum += std::cos(n * d);
    b[j] = sum / n_nodes;
  }
  return b;
}

Eigen::RowVectorXd trig_interpolate(const Eigen::MatrixXd& values, double t) {
  const auto b = trig_basis(static_cast<int>(values.rows()), t);
  Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(values.cols());
  for (Eigen::Index j = 0; j < values.rows(); ++j) out += b[j] * values.row(j);
  return out;
}

TrigInterpolant::TrigInterpolant(const Eigen::MatrixXd& values) : n_nodes_(static_cast<int>(values.rows())) {
  require_even(n_nodes_);
  const int n = n_nodes_ / 2;
  a_ = Eigen::MatrixXd::Zero(n + 1, values.cols());
  b_ = Eigen::MatrixXd::Zero(n + 1, values.cols());
  for (int m = 0; m <= n; ++m) {
    for (int j = 0; j < n_nodes_; ++j) {
      const double s = 2.0 * kPi * j / n_nodes_;
      a_.row(m) += std::cos(m * s) * values.row(j);
      b_.row(m) += std::sin(m * s) * values.row(j);
    }
  }
  a_ *= 2.0 / n_nodes_;
  b_ *= 2.0 / n_nodes_;
  a_.row(0) *= 0.5;
  a_.row(n) *= 0.5;
  b_.row(n).setZero();
}

Eigen::RowVectorXd TrigInterpolant::operator()(double t) const {
  const int n = n_nodes_ / 2;
  Eigen::RowVectorXd out = a_.row(0);
  const std::complex<double> step = std::polar(1.0, t);
  std::complex<double> e = 1.0;
  for (int m = 1; m <= n; ++m) {
    e *= step;
    // refresh to keep the recurrence from drifting on long series
    if (m % 64 == 0) e = std::polar(1.0, m * t);
    out += e.real() * a_.row(m) + e.imag() * b_.row(m);
  }
  return out;
}

}  // namespace lamebie
