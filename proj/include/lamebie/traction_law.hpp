#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace lamebie {

/// Nonlinear boundary law G(t, u) on the unscaled hole boundary together with
/// its u-Jacobian.
class TractionLaw {
 public:
  virtual ~TractionLaw() = default;
  virtual Eigen::Vector2d value(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const = 0;
  virtual Eigen::Matrix2d jacobian(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const = 0;
  virtual std::string family() const = 0;
  /// Coefficient table in the config format (family key included).
  virtual nlohmann::json to_json() const = 0;
};

using LawPtr = std::shared_ptr<const TractionLaw>;

/// G(t, u) = K (u - c) + g0 + Gt t.
class AffineLaw : public TractionLaw {
 public:
  AffineLaw(Eigen::Matrix2d K, Eigen::Vector2d c, Eigen::Vector2d g0 = Eigen::Vector2d::Zero(),
            Eigen::Matrix2d Gt = Eigen::Matrix2d::Zero());
  Eigen::Vector2d value(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const override;
  Eigen::Matrix2d jacobian(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const override;
  std::string family() const override { return "affine"; }
  nlohmann::json to_json() const override;

 private:
  Eigen::Matrix2d K_;
  Eigen::Vector2d c_, g0_;
  Eigen::Matrix2d Gt_;
};

/// Componentwise polynomial law
///   G_i(t, u) = g0_i + (Gt t)_i + sum_{d=1..D} (a_{i,d} + b_{i,d} . t) (u_i - c_i)^d.
class PolynomialLaw : public TractionLaw {
 public:
  struct Term {
    int degree;
    Eigen::Vector2d coef;               // a_{., d}
    Eigen::Matrix2d t_coef = Eigen::Matrix2d::Zero();  // row i is b_{i, d}
  };

  PolynomialLaw(Eigen::Vector2d c, std::vector<Term> terms, Eigen::Vector2d g0 = Eigen::Vector2d::Zero(),
                Eigen::Matrix2d Gt = Eigen::Matrix2d::Zero());
  Eigen::Vector2d value(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const override;
  Eigen::Matrix2d jacobian(const Eigen::Vector2d& t, const Eigen::Vector2d& u) const override;
  std::string family() const override { return "polynomial"; }
  nlohmann::json to_json() const override;

 private:
  Eigen::Vector2d c_;
  std::vector<Term> terms_;
  Eigen::Vector2d g0_;
  Eigen::Matrix2d Gt_;
};

/// Compares the Jacobian with central differences at pseudo-random (t, u)
/// inside the given box; throws ConfigError on mismatch beyond rel_tol.
void validate_law(const TractionLaw& law, double t_scale = 1.0, double u_scale = 1.0, double rel_tol = 1e-6);

using LawFactory = std::function<LawPtr(const nlohmann::json&)>;

/// Registers a law family under `name`; built-ins are "affine" and "polynomial".
void register_traction_law(const std::string& name, LawFactory factory);

/// Builds and validates the law described by spec["family"].
LawPtr make_traction_law(const nlohmann::json& spec);

std::vector<std::string> registered_laws();

}  // namespace lamebie
