#pragma once

// Finite-difference Lame operator used by the PDE checks. Header-only so that
// tests can apply it to arbitrary lambdas.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lamebie {

/// Neville extrapolation to h = 0 of a quantity with an error expansion in
/// even powers of h.
template <class T>
T richardson_h2(const std::vector<double>& steps, std::vector<T> values) {
  const std::size_t n = steps.size();
  if (n == 0 || values.size() != n) throw std::invalid_argument("richardson_h2: size mismatch");
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      const double a = steps[i - k] * steps[i - k];
      const double b = steps[i] * steps[i];
      values[i] = (a * values[i] - b * values[i - 1]) / (a - b);
      if (i == k) break;
    }
  }
  return values[n - 1];
}

template <class Field>
Eigen::Matrix2d lame_operator_fd(double omega, const Field& f, const Eigen::Vector2d& x,
                                 const std::vector<double>& steps) {
  std::vector<Eigen::Matrix2d> vals;
  vals.reserve(steps.size());
  const Eigen::Vector2d e1(1.0, 0.0), e2(0.0, 1.0);
  for (double h : steps) {
    const Eigen::Matrix2d f0 = f(x);
    const Eigen::Matrix2d fxp = f(Eigen::Vector2d(x + h * e1));
    const Eigen::Matrix2d fxm = f(Eigen::Vector2d(x - h * e1));
    const Eigen::Matrix2d fyp = f(Eigen::Vector2d(x + h * e2));
    const Eigen::Matrix2d fym = f(Eigen::Vector2d(x - h * e2));
    const Eigen::Matrix2d fpp = f(Eigen::Vector2d(x + h * (e1 + e2)));
    const Eigen::Matrix2d fpm = f(Eigen::Vector2d(x + h * (e1 - e2)));
    const Eigen::Matrix2d fmp = f(Eigen::Vector2d(x - h * (e1 - e2)));
    const Eigen::Matrix2d fmm = f(Eigen::Vector2d(x - h * (e1 + e2)));
    const double h2 = h * h;
    const Eigen::Matrix2d dxx = (fxp - 2.0 * f0 + fxm) / h2;
    const Eigen::Matrix2d dyy = (fyp - 2.0 * f0 + fym) / h2;
    const Eigen::Matrix2d dxy = (fpp - fpm - fmp + fmm) / (4.0 * h2);
    // columns are displacement fields; (L u)_i = lap u_i + omega d_i div u
    Eigen::Matrix2d out;
    for (int l = 0; l < 2; ++l) {
      out(0, l) = dxx(0, l) + dyy(0, l) + omega * (dxx(0, l) + dxy(1, l));
      out(1, l) = dxx(1, l) + dyy(1, l) + omega * (dxy(0, l) + dyy(1, l));
    }
    vals.push_back(out);
  }
  return richardson_h2(steps, vals);
}

}  // namespace lamebie
