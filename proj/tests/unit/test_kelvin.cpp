#include <doctest.h>

#include <cmath>
#include <random>

#include "lamebie/detail/lame_fd.hpp"
#include "lamebie/errors.hpp"
#include "lamebie/kelvin.hpp"

using namespace lamebie;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Lame parameters require omega above 1 - 2/n") {
  CHECK_NOTHROW(LameParams(2, 0.01));
  CHECK_THROWS_AS(LameParams(2, 0.0), DomainError);
  CHECK_THROWS_AS(LameParams(2, -0.9), DomainError);
  CHECK_NOTHROW(LameParams(3, 0.34));
  CHECK_THROWS_AS(LameParams(3, 1.0 / 3.0), DomainError);
}

TEST_CASE("Laplace fundamental solution") {
  const LameParams p(2, 1.0);
  CHECK(laplace_fundamental(p, Vector2d(1, 0)) == 0.0);
  CHECK(laplace_fundamental(p, Vector2d(std::exp(1.0), 0)) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-14));
  CHECK(laplace_fundamental(p, Vector2d(0, std::exp(1.0))) == laplace_fundamental(p, Vector2d(std::exp(1.0), 0)));
  CHECK_THROWS_AS(laplace_fundamental(p, Vector2d(0, 0)), DomainError);
  // n = 3: |x|^{-1} / (-4 pi)
  CHECK(laplace_fundamental(LameParams(3, 1.0), Eigen::Vector3d(2, 0, 0)) ==
        doctest::Approx(-1.0 / (8 * kPi)).epsilon(1e-14));
}

TEST_CASE("Kelvin matrix closed-form values") {
  const LameParams p(2, 1.0);
  const Eigen::MatrixXd g1 = kelvin_matrix(p, Vector2d(1, 0));
  CHECK(g1(0, 0) == doctest::Approx(-1.0 / (8 * kPi)).epsilon(1e-14));
  CHECK(g1(0, 1) == 0.0);
  CHECK(g1(1, 1) == 0.0);
  const Eigen::MatrixXd g2 = kelvin_matrix(p, Vector2d(0, 1));
  CHECK(g2(1, 1) == doctest::Approx(-1.0 / (8 * kPi)).epsilon(1e-14));
  CHECK(std::abs(g2(0, 0)) < 1e-18);
  CHECK_THROWS_AS(kelvin_matrix(p, Vector2d(0, 0)), DomainError);
}

TEST_CASE("Kelvin matrix is even and symmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double w : {0.2, 1.0, 3.0}) {
    const LameParams p(2, w);
    for (int k = 0; k < 50; ++k) {
      const Vector2d x(u(rng), u(rng));
      const Eigen::MatrixXd g = kelvin_matrix(p, x);
      CHECK((g - kelvin_matrix(p, Vector2d(-x))).cwiseAbs().maxCoeff() == 0.0);
      CHECK(g(0, 1) == g(1, 0));
    }
  }
}

TEST_CASE("stress map") {
  CHECK((stress(LameParams(2, 1.0), Matrix2d::Identity()) - 2 * Matrix2d::Identity()).norm() == 0.0);
  CHECK((stress(LameParams(2, 2.0), Matrix2d::Identity()) - 4 * Matrix2d::Identity()).norm() == 0.0);
  Matrix2d skew;
  skew << 0, 1.7, -1.7, 0;
  CHECK(stress(LameParams(2, 2.5), skew).norm() == 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const LameParams p(2, 1.7);
  for (int k = 0; k < 20; ++k) {
    const Matrix2d A = Matrix2d::NullaryExpr([&] { return u(rng); });
    const Matrix2d B = Matrix2d::NullaryExpr([&] { return u(rng); });
    const Eigen::MatrixXd s = stress(p, A + B) - stress(p, A) - stress(p, B);
    CHECK(s.cwiseAbs().maxCoeff() <= 1e-15);
    const Eigen::MatrixXd sa = stress(p, A);
    CHECK((sa - sa.transpose()).norm() == 0.0);
  }
}

TEST_CASE("traction kernel against finite differences of the Kelvin matrix") {
  const double h = 1e-5;
  auto fd_kernel = [&](const LameParams& p, const Vector2d& x, const Vector2d& nu) {
    Matrix2d out;
    for (int l = 0; l < 2; ++l) {
      Matrix2d J;  // J(i, m) = d Gamma_il / d x_m
      for (int m = 0; m < 2; ++m) {
        const Vector2d e = h * Vector2d::Unit(m);
        J.col(m) = (kelvin_matrix(p, Vector2d(x + e)).col(l) - kelvin_matrix(p, Vector2d(x - e)).col(l)) / (2 * h);
      }
      out.col(l) = traction(p, J, nu);
    }
    return out;
  };
  const LameParams p(2, 1.0);
  const Vector2d x(1, 0), nu(1, 0);
  const Eigen::MatrixXd k = kelvin_traction_kernel(p, x, nu);
  const Matrix2d f = fd_kernel(p, x, nu);
  CHECK((k - f).cwiseAbs().maxCoeff() <= 1e-8 * f.cwiseAbs().maxCoeff());

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double w : {0.3, 1.0, 4.0}) {
    const LameParams pw(2, w);
    for (int t = 0; t < 10; ++t) {
      const Vector2d y(u(rng) + 1.5, u(rng));
      const Vector2d n = Vector2d(u(rng), u(rng)).normalized();
      const Eigen::MatrixXd kk = kelvin_traction_kernel(pw, y, n);
      CHECK((kk - fd_kernel(pw, y, n)).cwiseAbs().maxCoeff() <= 1e-8 * kk.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("traction kernel is odd and homogeneous of degree -1") {
  const LameParams p(2, 1.3);
  const Vector2d x(0.7, -0.4), nu = Vector2d(0.6, 0.8);
  const Eigen::MatrixXd k = kelvin_traction_kernel(p, x, nu);
  CHECK((k + kelvin_traction_kernel(p, Vector2d(-x), nu)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((kelvin_traction_kernel(p, Vector2d(2 * x), nu) - k / 2).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(kelvin_traction_kernel(p, Vector2d(0, 0), nu), DomainError);
}

TEST_CASE("Kelvin matrix solves the Lame system away from the origin") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double w : {0.5, 1.0, 3.0}) {
    const LameParams p(2, w);
    for (int t = 0; t < 10; ++t) {
      const Vector2d x(u(rng), u(rng));
      const double r = x.norm();
      if (r < 0.2) continue;
      auto f = [&](const Vector2d& y) { return Matrix2d(kelvin_matrix(p, y)); };
      const Matrix2d L = lame_operator_fd(w, f, x, {0.02 * r, 0.01 * r});
      CHECK(L.cwiseAbs().maxCoeff() <= 1e-6 / (r * r));
    }
  }
}
