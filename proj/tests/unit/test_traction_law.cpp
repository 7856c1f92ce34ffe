#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lamebie/errors.hpp"
#include "lamebie/traction_law.hpp"

using namespace lamebie;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

Matrix2d mat(double a, double b, double c, double d) {
  Matrix2d m;
  m << a, b, c, d;
  return m;
}

// central differences of G in u, column by column
Matrix2d fd_jacobian(const TractionLaw& law, const Vector2d& t, const Vector2d& u, double h = 1e-6) {
  Matrix2d j;
  for (int c = 0; c < 2; ++c) {
    Vector2d e = Vector2d::Zero();
    e[c] = h;
    j.col(c) = (law.value(t, u + e) - law.value(t, u - e)) / (2 * h);
  }
  return j;
}

// deliberately wrong derivative
class BrokenLaw : public TractionLaw {
 public:
  Vector2d value(const Vector2d&, const Vector2d& u) const override { return u.array().square(); }
  Matrix2d jacobian(const Vector2d&, const Vector2d&) const override { return Matrix2d::Identity(); }
  std::string family() const override { return "broken"; }
  nlohmann::json to_json() const override { return {{"family", "broken"}}; }
};

}  // namespace

TEST_CASE("affine law value and jacobian") {
  const Matrix2d K = mat(2, 0.5, -0.3, 1.5), Gt = mat(0.1, 0, 0.2, -0.4);
  const Vector2d c(0.3, -0.2), g0(0.05, 0.07);
  const AffineLaw law(K, c, g0, Gt);
  const Vector2d t(0.2, -0.1), u(1.0, 2.0);
  CHECK((law.value(t, u) - (K * (u - c) + g0 + Gt * t)).norm() <= 1e-15);
  CHECK((law.jacobian(t, u) - K).norm() == 0.0);
  CHECK(law.value(Vector2d::Zero(), c).norm() == doctest::Approx(g0.norm()));
  CHECK(law.family() == "affine");
}

TEST_CASE("polynomial law value and jacobian") {
  const Vector2d c(0.3, -0.2);
  PolynomialLaw::Term lin{1, Vector2d(1, 1)};
  PolynomialLaw::Term quad{2, Vector2d(0.1, 0.1)};
  const PolynomialLaw law(c, {lin, quad});
  const Vector2d t(0.2, 0.0);

  // the quadratic term vanishes at u = c, and the derivative there is the identity
  CHECK(law.value(t, c).norm() == 0.0);
  CHECK((law.jacobian(t, c) - Matrix2d::Identity()).norm() <= 1e-15);

  const Vector2d u(1.0, -1.0), d = u - c;
  const Vector2d expect = d + 0.1 * d.cwiseProduct(d);
  CHECK((law.value(t, u) - expect).norm() <= 1e-15);
  CHECK(law.jacobian(t, u)(0, 1) == 0.0);
  CHECK(law.jacobian(t, u)(1, 0) == 0.0);
  CHECK(law.jacobian(t, u)(0, 0) == doctest::Approx(1 + 0.2 * d[0]).epsilon(1e-15));
}

TEST_CASE("jacobians match central differences") {
  PolynomialLaw::Term t1{1, Vector2d(1.0, 0.8), mat(0.1, -0.2, 0.3, 0.0)};
  PolynomialLaw::Term t3{3, Vector2d(0.2, -0.1), mat(0.0, 0.05, -0.05, 0.1)};
  const PolynomialLaw poly(Vector2d(0.1, 0.2), {t1, t3}, Vector2d(0.01, 0.02), mat(0.3, 0, 0, 0.3));
  const AffineLaw aff(mat(1, 2, 3, 4), Vector2d(1, -1), Vector2d(0.5, 0.5), mat(0.2, 0.1, 0, 0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(-1, 1);
  for (const TractionLaw* law : {static_cast<const TractionLaw*>(&poly), static_cast<const TractionLaw*>(&aff)}) {
    for (int k = 0; k < 20; ++k) {
      const Vector2d t(r(rng), r(rng)), u(r(rng), r(rng));
      const Matrix2d j = law->jacobian(t, u), f = fd_jacobian(*law, t, u);
      CHECK((j - f).norm() <= 1e-6 * std::max(1.0, j.norm()));
    }
    CHECK_NOTHROW(validate_law(*law));
  }
}

TEST_CASE("validation rejects an inconsistent jacobian") {
  CHECK_THROWS_AS(validate_law(BrokenLaw()), ConfigError);
}

TEST_CASE("registry builds the built-in families and custom laws") {
  const auto names = registered_laws();
  CHECK(std::count(names.begin(), names.end(), "affine") == 1);
  CHECK(std::count(names.begin(), names.end(), "polynomial") == 1);

  const LawPtr a = make_traction_law(
      nlohmann::json::parse(R"({"family":"affine","K":[[1,0],[0,2]],"c":[0.5,0.25]})"));
  CHECK(a->family() == "affine");
  CHECK((a->value(Vector2d::Zero(), Vector2d(1.5, 1.25)) - Vector2d(1, 2)).norm() == 0.0);

  CHECK_THROWS_AS(make_traction_law(nlohmann::json::parse(R"({"family":"nope"})")), ConfigError);
  CHECK_THROWS_AS(make_traction_law(nlohmann::json::parse(R"({"family":"affine","c":[0,0]})")), ConfigError);
  CHECK_THROWS_AS(make_traction_law(nlohmann::json::parse(R"({"family":"polynomial","c":[0,0],"terms":[{"degree":0,"coef":[1,1]}]})")),
                  ConfigError);

  register_traction_law("shifted_identity", [](const nlohmann::json& j) {
    return std::make_shared<AffineLaw>(Matrix2d::Identity(), Vector2d(j.at("c")[0], j.at("c")[1]));
  });
  const LawPtr s = make_traction_law(nlohmann::json::parse(R"({"family":"shifted_identity","c":[1,2]})"));
  CHECK((s->value(Vector2d::Zero(), Vector2d(1, 2))).norm() == 0.0);

  // a registered factory that produces a broken law is caught by validation
  register_traction_law("broken", [](const nlohmann::json&) { return std::make_shared<BrokenLaw>(); });
  CHECK_THROWS_AS(make_traction_law(nlohmann::json::parse(R"({"family":"broken"})")), ConfigError);
}

TEST_CASE("law tables survive a json round trip") {
  PolynomialLaw::Term t1{1, Vector2d(1, 1), mat(0.1, 0.2, 0.3, 0.4)};
  PolynomialLaw::Term t2{2, Vector2d(0.1, -0.3)};
  const PolynomialLaw poly(Vector2d(0.3, -0.2), {t1, t2}, Vector2d(0.5, 0), mat(0, 1, -1, 0));
  const AffineLaw aff(mat(2, 0.1, 0.1, 3), Vector2d(0.3, -0.2), Vector2d(0.01, 0), mat(0.1, 0, 0, 0.1));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(-1, 1);
  for (const TractionLaw* law : {static_cast<const TractionLaw*>(&poly), static_cast<const TractionLaw*>(&aff)}) {
    const nlohmann::json j = law->to_json();
    const LawPtr back = make_traction_law(nlohmann::json::parse(j.dump()));
    CHECK(back->to_json() == j);
    for (int k = 0; k < 10; ++k) {
      const Vector2d t(r(rng), r(rng)), u(r(rng), r(rng));
      CHECK((back->value(t, u) - law->value(t, u)).norm() == 0.0);
      CHECK((back->jacobian(t, u) - law->jacobian(t, u)).norm() == 0.0);
    }
  }
}
