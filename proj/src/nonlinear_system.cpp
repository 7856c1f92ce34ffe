#include "lamebie/nonlinear_system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lamebie/errors.hpp"

namespace lamebie {

namespace {

PeriodicGreen make_green(const Problem& p) {
  return PeriodicGreen(p.cell, p.params, p.ewald ? *p.ewald : EwaldParams::adaptive(p.cell, 1e-12));
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

SystemState SystemState::constant(int n_nodes, const Eigen::Vector2d& xi) {
  SystemState s;
  s.theta = Density::Zero(n_nodes, 2);
  s.xi = xi;
  return s;
}

Eigen::VectorXd SystemState::packed_vector() const {
  Eigen::VectorXd v(theta.size() + 2);
  v.head(theta.size()) = packed(theta);
  v.tail(2) = xi;
  return v;
}

SystemState SystemState::from_packed(const Eigen::VectorXd& v) {
  SystemState s;
  s.theta = unpacked(v.head(v.size() - 2));
  s.xi = v.tail(2);
  return s;
}

double state_distance(const SystemState& a, const SystemState& b) {
  return std::max((a.theta - b.theta).cwiseAbs().maxCoeff(), (a.xi - b.xi).cwiseAbs().maxCoeff());
}

const BranchPoint& SolutionBranch::at(double eps) const {
  for (const auto& pt : points) {
    if (pt.eps == eps) return pt;
  }
  throw DomainError("branch has no point at eps = " + std::to_string(eps));
}

TractionSystem::TractionSystem(Problem problem)
    : problem_(std::move(problem)),
      grid_(build_grid(problem_.shape, problem_.n_nodes)),
      green_(make_green(problem_)),
      eps0_(compute_eps0(*problem_.shape, problem_.cell, problem_.p)) {
  if (!problem_.law) throw DomainError("problem needs a traction law");
  if (problem_.params.dim() != 2) throw DomainError("the traction system is implemented for n = 2 only");
  strain_ = problem_.B * problem_.cell.q_diag().cwiseInverse().asDiagonal();
  const Eigen::Matrix2d sig = stress(problem_.params, strain_);
  affine_traction_.resize(grid_.n, 2);
  for (int i = 0; i < grid_.n; ++i) affine_traction_.row(i) = (sig * grid_.normals[i]).transpose();
  single_layer_ = single_layer_matrix(grid_, problem_.params);
  halfop_ = traction_halfop_matrix(grid_, problem_.params);
}

void TractionSystem::check_eps(double eps) const {
  if (!std::isfinite(eps) || !(std::abs(eps) < eps0_)) {
    std::ostringstream os;
    os << "|eps| = " << std::abs(eps) << " is not below eps0 = " << eps0_;
    throw GeometryError(os.str());
  }
}

std::shared_ptr<const TractionSystem::EpsOperators> TractionSystem::operators(double eps) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(eps);
    if (it != cache_.end()) return it->second;
  }
  check_eps(eps);
  auto ops = std::make_shared<EpsOperators>();
  const int m = 2 * grid_.n;
  ops->traction = halfop_;
  ops->traction.diagonal().array() += 0.5;
  if (eps == 0.0) {
    ops->value = Eigen::MatrixXd::Zero(m, m);
  } else {
    Eigen::MatrixXd rv, rt;
    regular_matrices(grid_, green_, eps, rv, rt);
    ops->traction += eps * rt;
    ops->value = eps * (single_layer_ + rv);
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_[eps] = ops;
  return ops;
}

Density TractionSystem::law_argument(double eps, const SystemState& state) const {
  const auto ops = operators(eps);
  Density arg = unpacked(ops->value * packed(state.theta));
  for (int i = 0; i < grid_.n; ++i) {
    arg.row(i) += (eps * (strain_ * grid_.nodes[i]) + state.xi).transpose();
  }
  return arg;
}

Density TractionSystem::residual(double eps, const SystemState& state) const {
  if (state.theta.rows() != grid_.n) throw DomainError("state size does not match the grid");
  const auto ops = operators(eps);
  const Density arg = law_argument(eps, state);
  Density r = unpacked(ops->traction * packed(state.theta));
  r += affine_traction_;
  const TractionLaw& law = *problem_.law;
  for (int i = 0; i < grid_.n; ++i) {
    r.row(i) -= law.value(grid_.nodes[i], arg.row(i).transpose()).transpose();
  }
  return r;
}

Eigen::MatrixXd TractionSystem::jacobian(double eps, const SystemState& state) const {
  const auto ops = operators(eps);
  const Density arg = law_argument(eps, state);
  const int n = grid_.n;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
  J.topLeftCorner(2 * n, 2 * n) = ops->traction;
  const TractionLaw& law = *problem_.law;
  for (int i = 0; i < n; ++i) {
    const Eigen::Matrix2d d = law.jacobian(grid_.nodes[i], arg.row(i).transpose());
    J.block(2 * i, 0, 2, 2 * n) -= d * ops->value.middleRows(2 * i, 2);
    J.block(2 * i, 2 * n, 2, 2) = -d;
    J(2 * n, 2 * i) = grid_.weights[i];
    J(2 * n + 1, 2 * i + 1) = grid_.weights[i];
  }
  return J;
}

Density residual_lambda(const TractionSystem& sys, double eps, const SystemState& state) {
  return sys.residual(eps, state);
}

Eigen::MatrixXd jacobian_lambda(const TractionSystem& sys, double eps, const SystemState& state) {
  return sys.jacobian(eps, state);
}

namespace {

// Residual of the bordered system: Lambda stacked with the zero-mean rows.
Eigen::VectorXd full_residual(const TractionSystem& sys, double eps, const SystemState& s) {
  const int n = sys.grid().n;
  Eigen::VectorXd f(2 * n + 2);
  const Density r = sys.residual(eps, s);
  f.head(2 * n) = packed(r);
  f.tail(2) = boundary_integral(sys.grid(), s.theta);
  return f;
}

}  // namespace

SystemState solve_limiting(const TractionSystem& sys, const Eigen::Vector2d& xi_guess, SolveInfo* info) {
  const BoundaryGrid& g = sys.grid();
  const TractionLaw& law = *sys.problem().law;
  auto rho = [&](const Eigen::Vector2d& xi) {
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (int j = 0; j < g.n; ++j) s += g.weights[j] * law.value(g.nodes[j], xi);
    return s;
  };
  auto drho = [&](const Eigen::Vector2d& xi) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    for (int j = 0; j < g.n; ++j) m += g.weights[j] * law.jacobian(g.nodes[j], xi);
    return m;
  };

  Eigen::Vector2d xi = xi_guess;
  Eigen::Vector2d r = rho(xi);
  const double r_tol = 1e-14 * g.length() * std::max(1.0, r.cwiseAbs().maxCoeff());
  int it = 0;
  for (; it < 50 && r.cwiseAbs().maxCoeff() > r_tol; ++it) {
    const Eigen::Matrix2d m = drho(xi);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    const double smax = svd.singularValues()[0], smin = svd.singularValues()[1];
    if (!(smin > 0.0) || smax / smin > 1e12) {
      std::ostringstream os;
      os << "limiting equation: integral of DuG is singular (condition " << (smin > 0 ? smax / smin : INFINITY)
         << ") at xi = (" << xi[0] << ", " << xi[1] << ")";
      throw SolverError(os.str());
    }
    const Eigen::Vector2d step = -m.lu().solve(r);
    double lam = 1.0;
    Eigen::Vector2d trial = xi + step;
    Eigen::Vector2d rt = rho(trial);
    for (int k = 0; k < 8 && rt.cwiseAbs().maxCoeff() > r.cwiseAbs().maxCoeff(); ++k) {
      lam *= 0.5;
      trial = xi + lam * step;
      rt = rho(trial);
    }
    xi = trial;
    r = rt;
    if (step.cwiseAbs().maxCoeff() < 1e-16 * std::max(1.0, xi.cwiseAbs().maxCoeff())) break;
  }
  if (!(r.cwiseAbs().maxCoeff() <= 1e-10 * g.length() * std::max(1.0, xi.cwiseAbs().maxCoeff()))) {
    std::ostringstream os;
    os << "limiting equation: Newton on the mean of G did not converge; last xi = (" << xi[0] << ", " << xi[1]
       << "), residual " << r.cwiseAbs().maxCoeff();
    throw SolverError(os.str());
  }

  // (1/2 I + W_*) theta + lambda = G(., xi) - T(B q^{-1}) nu, int theta = 0
  const int n = g.n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
  M.topLeftCorner(2 * n, 2 * n) = sys.traction_halfop();
  M.topLeftCorner(2 * n, 2 * n).diagonal().array() += 0.5;
  Eigen::VectorXd rhs(2 * n + 2);
  for (int i = 0; i < n; ++i) {
    M(2 * i, 2 * n) = 1.0;
    M(2 * i + 1, 2 * n + 1) = 1.0;
    M(2 * n, 2 * i) = g.weights[i];
    M(2 * n + 1, 2 * i + 1) = g.weights[i];
    rhs.segment(2 * i, 2) = law.value(g.nodes[i], xi) - sys.affine_traction().row(i).transpose();
  }
  rhs.tail(2).setZero();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const Eigen::VectorXd sol = lu.solve(rhs);
  SystemState s;
  s.theta = unpacked(sol.head(2 * n));
  s.xi = xi;
  if (info) {
    info->iterations = it;
    info->residual = max_abs(packed(sys.residual(0.0, s)));
    info->history = {info->residual};
  }
  return s;
}

SystemState newton_solve(const TractionSystem& sys, double eps, const SystemState& init, SolveInfo* info) {
  const NewtonOptions& opt = sys.problem().newton;
  sys.check_eps(eps);
  SystemState s = init;
  Eigen::VectorXd f = full_residual(sys, eps, s);
  double merit = max_abs(f);
  std::vector<double> hist{merit};
  int it = 0;
  while (!(merit <= opt.tol)) {
    if (it >= opt.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge at eps = " << eps << " after " << it << " iterations (residual " << merit
         << ")";
      throw SolverError(os.str());
    }
    const Eigen::MatrixXd J = sys.jacobian(eps, s);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    if (!(lu.rcond() > 1e-15)) throw SolverError("singular Jacobian at eps = " + std::to_string(eps));
    const Eigen::VectorXd dx = lu.solve(-f);
    if (!dx.allFinite()) throw SolverError("non-finite Newton step at eps = " + std::to_string(eps));
    const Eigen::VectorXd x0 = s.packed_vector();
    double lam = 1.0;
    SystemState trial = SystemState::from_packed(x0 + dx);
    Eigen::VectorXd ft = full_residual(sys, eps, trial);
    for (int k = 0; k < opt.max_halvings && !(max_abs(ft) <= merit); ++k) {
      lam *= 0.5;
      trial = SystemState::from_packed(x0 + lam * dx);
      ft = full_residual(sys, eps, trial);
    }
    s = std::move(trial);
    f = std::move(ft);
    merit = max_abs(f);
    if (!std::isfinite(merit)) throw SolverError("Newton produced a non-finite residual at eps = " + std::to_string(eps));
    hist.push_back(merit);
    ++it;
  }
  if (info) {
    info->iterations = it;
    info->residual = merit;
    info->history = hist;
  }
  return s;
}

SolutionBranch continuation_sweep(const TractionSystem& sys, std::vector<double> eps_list,
                                  const Eigen::Vector2d& xi_guess) {
  std::sort(eps_list.begin(), eps_list.end());
  eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());
  if (!std::binary_search(eps_list.begin(), eps_list.end(), 0.0)) {
    throw DomainError("continuation sweep needs eps = 0 in its list");
  }
  for (double e : eps_list) sys.check_eps(e);

  SolutionBranch br;
  SolveInfo info0;
  SystemState s0 = solve_limiting(sys, xi_guess);
  s0 = newton_solve(sys, 0.0, s0, &info0);
  br.points.push_back({0.0, s0, info0});

  std::vector<BranchPoint> neg, pos;
  auto march = [&](auto begin, auto end, std::vector<BranchPoint>& out, double& attained) {
    SystemState prev = s0;
    for (auto it = begin; it != end; ++it) {
      const double e = *it;
      if (e == 0.0) continue;
      SolveInfo info;
      try {
        SystemState s = newton_solve(sys, e, prev, &info);
        out.push_back({e, s, info});
        attained = e;
        prev = std::move(s);
      } catch (const SolverError& err) {
        br.truncated = true;
        if (!br.message.empty()) br.message += "; ";
        br.message += err.what();
        break;
      }
    }
  };
  march(std::upper_bound(eps_list.begin(), eps_list.end(), 0.0), eps_list.end(), pos, br.eps_max_attained);
  auto first_pos = std::lower_bound(eps_list.begin(), eps_list.end(), 0.0);
  march(std::make_reverse_iterator(first_pos), eps_list.rend(), neg, br.eps_min_attained);

  std::vector<BranchPoint> all(neg.rbegin(), neg.rend());
  all.push_back(br.points.front());
  all.insert(all.end(), pos.begin(), pos.end());
  br.points = std::move(all);
  return br;
}

UniquenessReport uniqueness_probe(const TractionSystem& sys, double eps, const SystemState& branch_state,
                                  double radius, int trials, std::uint64_t seed) {
  UniquenessReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 0; k < trials; ++k) {
    SystemState init = branch_state;
    for (Eigen::Index i = 0; i < init.theta.size(); ++i) init.theta.data()[i] += radius * uni(rng);
    init.xi[0] += radius * uni(rng);
    init.xi[1] += radius * uni(rng);
    try {
      const SystemState s = newton_solve(sys, eps, init);
      const double d = state_distance(s, branch_state);
      rep.max_distance = std::max(rep.max_distance, d);
      if (d <= 1e-8) {
        ++rep.returned;
      } else {
        rep.escapes.push_back(s);
        rep.notes.push_back("trial " + std::to_string(k) + ": converged to a state at distance " + std::to_string(d));
      }
    } catch (const SolverError& err) {
      rep.notes.push_back("trial " + std::to_string(k) + ": " + err.what());
    }
  }
  return rep;
}

}  // namespace lamebie
