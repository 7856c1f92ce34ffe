#include <doctest.h>

#include <cmath>

#include "lamebie/quadrature.hpp"

using namespace lamebie;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("log rule is exact on trigonometric polynomials") {
  const int n = 32;
  for (double t : {0.0, 0.37, 2.0, 5.9}) {
    const std::vector<double> R = log_weights(n, t);
    for (int m = 0; m < n / 2; ++m) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += R[j] * std::cos(m * 2 * kPi * j / n);
      const double exact = m == 0 ? 0.0 : -2 * kPi / m * std::cos(m * t);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
  const std::vector<double> nodal = log_weights_nodal(n), at = log_weights(n, 2 * kPi * 5 / n);
  for (int j = 0; j < n; ++j) CHECK(std::abs(at[j] - nodal[std::abs(5 - j) % n]) <= 1e-14);
}

TEST_CASE("Hilbert rule is exact on trigonometric polynomials") {
  const int n = 32;
  for (double t : {0.0, 0.37, 2.0}) {
    const std::vector<double> H = hilbert_weights(n, t);
    for (int m = 1; m < n / 2; ++m) {
      double sc = 0.0, ss = 0.0;
      for (int j = 0; j < n; ++j) {
        sc += H[j] * std::cos(m * 2 * kPi * j / n);
        ss += H[j] * std::sin(m * 2 * kPi * j / n);
      }
      // p.v. int cot((s - t)/2) e^{ims} ds = 2 pi i sign(m) e^{imt}
      CHECK(std::abs(sc + 2 * kPi * std::sin(m * t)) <= 1e-12);
      CHECK(std::abs(ss - 2 * kPi * std::cos(m * t)) <= 1e-12);
    }
  }
  const std::vector<double> nodal = hilbert_weights_nodal(n);
  const int i = 7;
  const std::vector<double> at = hilbert_weights(n, 2 * kPi * i / n);
  for (int j = 0; j < n; ++j) CHECK(std::abs(at[j] - nodal[((i - j) % n + n) % n]) <= 1e-13);
}

TEST_CASE("trigonometric interpolation") {
  const int n = 32;
  Eigen::MatrixXd v(n, 2);
  for (int j = 0; j < n; ++j) {
    const double s = 2 * kPi * j / n;
    v(j, 0) = 1 + std::cos(3 * s) - 0.5 * std::sin(7 * s);
    v(j, 1) = std::exp(std::sin(s));
  }
  const TrigInterpolant f(v);
  for (double t : {0.11, 1.7, 4.4}) {
    const Eigen::RowVectorXd a = f(t), b = trig_interpolate(v, t);
    CHECK(std::abs(a[0] - (1 + std::cos(3 * t) - 0.5 * std::sin(7 * t))) <= 1e-13);
    CHECK(std::abs(a[1] - std::exp(std::sin(t))) <= 1e-8);
    CHECK((a - b).norm() <= 1e-13);
    double sum = 0.0;
    for (double l : trig_basis(n, t)) sum += l;
    CHECK(std::abs(sum - 1.0) <= 1e-14);
  }
  // nodes are reproduced
  CHECK((f(2 * kPi * 3 / n) - v.row(3)).norm() <= 1e-13);
}
