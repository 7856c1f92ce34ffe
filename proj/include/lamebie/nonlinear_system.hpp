#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/geometry.hpp"
#include "lamebie/kelvin.hpp"
#include "lamebie/lattice.hpp"
#include "lamebie/layer_potentials.hpp"
#include "lamebie/periodic_green.hpp"
#include "lamebie/traction_law.hpp"

namespace lamebie {

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 25;
  int max_halvings = 8;
};

/// Everything that defines the auxiliary problem: cell, material, hole shape
/// and its placement point, the affine macroscopic strain B, the boundary law
/// and the discretization.
struct Problem {
  LatticeCell cell;
  LameParams params;
  ShapePtr shape;
  Eigen::Vector2d p;
  Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
  LawPtr law = nullptr;
  int n_nodes = 128;
  /// Adaptive parameters at 1e-12 when unset.
  std::optional<EwaldParams> ewald = std::nullopt;
  NewtonOptions newton = {};
};

/// Unknown pair (theta, xi): boundary density and constant displacement.
struct SystemState {
  Density theta;
  Eigen::Vector2d xi = Eigen::Vector2d::Zero();

  static SystemState constant(int n_nodes, const Eigen::Vector2d& xi);
  Eigen::VectorXd packed_vector() const;
  static SystemState from_packed(const Eigen::VectorXd& v);
};

/// Max-norm distance over (theta, xi).
double state_distance(const SystemState& a, const SystemState& b);

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;  // max-norm of the residual before each step and at exit
};

struct BranchPoint {
  double eps;
  SystemState state;
  SolveInfo info;
};

struct SolutionBranch {
  std::vector<BranchPoint> points;  // sorted by eps
  double eps_min_attained = 0.0;
  double eps_max_attained = 0.0;
  bool truncated = false;
  std::string message;

  const BranchPoint& at(double eps) const;
};

/// Discretized Lambda operator. Caches the free boundary operators and, per
/// eps, the matrices that carry the periodic correction.
class TractionSystem {
 public:
  explicit TractionSystem(Problem problem);

  const Problem& problem() const { return problem_; }
  const BoundaryGrid& grid() const { return grid_; }
  const PeriodicGreen& green() const { return green_; }
  double eps0() const { return eps0_; }
  int unknowns() const { return 2 * grid_.n + 2; }
  /// B q^{-1}
  const Eigen::Matrix2d& strain() const { return strain_; }
  /// T(omega, B q^{-1}) nu at the nodes.
  const Density& affine_traction() const { return affine_traction_; }
  const Eigen::MatrixXd& single_layer() const { return single_layer_; }
  const Eigen::MatrixXd& traction_halfop() const { return halfop_; }

  struct EpsOperators {
    Eigen::MatrixXd traction;  // 1/2 I + W_* + eps (R^q traction part)
    Eigen::MatrixXd value;     // eps S + eps (R^q value part)
  };
  std::shared_ptr<const EpsOperators> operators(double eps) const;

  /// Argument of G at the nodes: eps v[theta] + eps R^q-term + eps B q^{-1} t + xi.
  Density law_argument(double eps, const SystemState& state) const;
  Density residual(double eps, const SystemState& state) const;
  /// Dense (2N+2) x (2N+2) bordered Jacobian over (theta, xi).
  Eigen::MatrixXd jacobian(double eps, const SystemState& state) const;

  void check_eps(double eps) const;

 private:
  Problem problem_;
  BoundaryGrid grid_;
  PeriodicGreen green_;
  double eps0_;
  Eigen::Matrix2d strain_;
  Density affine_traction_;
  Eigen::MatrixXd single_layer_;
  Eigen::MatrixXd halfop_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, std::shared_ptr<const EpsOperators>> cache_;
};

Density residual_lambda(const TractionSystem& sys, double eps, const SystemState& state);
Eigen::MatrixXd jacobian_lambda(const TractionSystem& sys, double eps, const SystemState& state);

/// eps = 0: Newton on rho(xi) = int G(t, xi) dsigma, then the bordered solve
/// for theta.
SystemState solve_limiting(const TractionSystem& sys, const Eigen::Vector2d& xi_guess, SolveInfo* info = nullptr);

SystemState newton_solve(const TractionSystem& sys, double eps, const SystemState& init, SolveInfo* info = nullptr);

SolutionBranch continuation_sweep(const TractionSystem& sys, std::vector<double> eps_list,
                                  const Eigen::Vector2d& xi_guess);

struct UniquenessReport {
  int trials = 0;
  int returned = 0;
  double max_distance = 0.0;
  std::vector<SystemState> escapes;
  std::vector<std::string> notes;
  double fraction() const { return trials ? double(returned) / trials : 1.0; }
};

UniquenessReport uniqueness_probe(const TractionSystem& sys, double eps, const SystemState& branch_state,
                                  double radius, int trials, std::uint64_t seed = 7);

}  // namespace lamebie
