#include "lamebie/field.hpp"

#include <cmath>
#include <sstream>

#include "lamebie/errors.hpp"
#include "lamebie/quadrature.hpp"

namespace lamebie {

namespace {

Eigen::Vector2d macro_value(const TractionSystem& sys, double eps, const SystemState& state,
                            const Eigen::Vector2d& x) {
  const Problem& pb = sys.problem();
  Eigen::Vector2d u = sys.strain() * (x - pb.p) + state.xi;
  if (eps == 0.0) return u;
  const BoundaryGrid& g = sys.grid();
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (int j = 0; j < g.n; ++j) {
    s += g.weights[j] * (sys.green().value(x - pb.p - eps * g.nodes[j]) * state.theta.row(j).transpose());
  }
  return u + eps * s;
}

void require_outside_hole(const TractionSystem& sys, const Eigen::Vector2d& t, const char* what) {
  if (inside_curve(sys.grid(), t)) {
    std::ostringstream os;
    os << what << ": point (" << t[0] << ", " << t[1] << ") lies inside the hole";
    throw DomainError(os.str());
  }
}

}  // namespace

Eigen::Vector2d displacement(const TractionSystem& sys, double eps, const SystemState& state,
                             const Eigen::Vector2d& x) {
  if (!(eps > 0.0)) throw DomainError("displacement is defined for eps > 0 only");
  sys.check_eps(eps);
  const Eigen::Vector2d rel = wrap_centered(sys.problem().cell, x - sys.problem().p);
  require_outside_hole(sys, rel / eps, "displacement");
  return macro_value(sys, eps, state, x);
}

std::vector<std::pair<double, Eigen::Vector2d>> macroscopic_trace(const TractionSystem& sys,
                                                                  const SolutionBranch& branch,
                                                                  const Eigen::Vector2d& x) {
  double emax = 0.0;
  for (const auto& pt : branch.points) emax = std::max(emax, std::abs(pt.eps));
  const double dist = distance_to_lattice(sys.problem().cell, x - sys.problem().p);
  if (!(dist > emax * sys.grid().circumradius())) {
    throw DomainError("macroscopic point is too close to the hole family");
  }
  std::vector<std::pair<double, Eigen::Vector2d>> out;
  for (const auto& pt : branch.points) out.emplace_back(pt.eps, macro_value(sys, pt.eps, pt.state, x));
  return out;
}

Eigen::Vector2d microscopic_value(const TractionSystem& sys, double eps, const SystemState& state,
                                  const Eigen::Vector2d& t) {
  require_outside_hole(sys, t, "microscopic_value");
  if (eps == 0.0) return state.xi;
  const BoundaryGrid& g = sys.grid();
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  for (int j = 0; j < g.n; ++j) {
    r += g.weights[j] * (sys.green().regular_value(eps * (t - g.nodes[j])) * state.theta.row(j).transpose());
  }
  const Eigen::Vector2d v = single_layer_field(g, sys.problem().params, state.theta, t);
  return eps * (v + r) + state.xi + eps * (sys.strain() * t);
}

std::vector<std::pair<double, Eigen::Vector2d>> microscopic_trace(const TractionSystem& sys,
                                                                  const SolutionBranch& branch,
                                                                  const Eigen::Vector2d& t) {
  std::vector<std::pair<double, Eigen::Vector2d>> out;
  for (const auto& pt : branch.points) out.emplace_back(pt.eps, microscopic_value(sys, pt.eps, pt.state, t));
  return out;
}

PolyFit analyticity_fit(const std::vector<std::pair<double, Eigen::VectorXd>>& samples, int degree) {
  if (degree < 0) throw DomainError("fit degree must be >= 0");
  const int m = static_cast<int>(samples.size());
  if (m < degree + 3) {
    throw DomainError("analyticity fit of degree " + std::to_string(degree) + " needs at least " +
                      std::to_string(degree + 3) + " samples, got " + std::to_string(m));
  }
  const int dim = static_cast<int>(samples.front().second.size());
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.first));
  if (scale == 0.0) scale = 1.0;
  Eigen::MatrixXd V(m, degree + 1), Y(m, dim);
  for (int i = 0; i < m; ++i) {
    if (samples[i].second.size() != dim) throw DomainError("fit samples have inconsistent dimension");
    const double x = samples[i].first / scale;
    double pw = 1.0;
    for (int k = 0; k <= degree; ++k, pw *= x) V(i, k) = pw;
    Y.row(i) = samples[i].second.transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  qr.setThreshold(1e-13);
  if (qr.rank() < degree + 1) throw DomainError("rank-deficient fit: eps values are not distinct enough");
  const Eigen::MatrixXd c = qr.solve(Y);
  PolyFit fit;
  fit.max_residual = (V * c - Y).cwiseAbs().maxCoeff();
  fit.coefficients = c;
  for (int k = 0; k <= degree; ++k) fit.coefficients.row(k) /= std::pow(scale, k);
  return fit;
}

double boundary_condition_residual(const TractionSystem& sys, double eps, const SystemState& state,
                                   const std::vector<double>& params) {
  sys.check_eps(eps);
  const BoundaryGrid& g = sys.grid();
  const Problem& pb = sys.problem();
  const double w = pb.params.omega();
  const Eigen::VectorXd th = packed(state.theta);
  const TrigInterpolant interp(state.theta);
  const Eigen::Matrix2d sig = stress(pb.params, sys.strain());
  double worst = 0.0;
  for (double t : params) {
    const Eigen::Vector2d x = g.shape->point(t);
    const Eigen::Vector2d d1 = g.shape->d1(t);
    const Eigen::Vector2d nu = Eigen::Vector2d(d1[1], -d1[0]) / d1.norm();
    Eigen::Vector2d rv = Eigen::Vector2d::Zero(), rt = Eigen::Vector2d::Zero();
    if (eps != 0.0) {
      for (int j = 0; j < g.n; ++j) {
        Eigen::Matrix2d r;
        KernelGradient d;
        sys.green().regular_value_and_gradient(eps * (x - g.nodes[j]), r, d);
        const Eigen::Vector2d th_j = state.theta.row(j).transpose();
        rv += g.weights[j] * (r * th_j);
        rt += g.weights[j] * (traction_from_gradient(w, d, nu) * th_j);
      }
    }
    const Eigen::Vector2d theta_t = interp(t).transpose();
    const Eigen::Vector2d trac =
        0.5 * theta_t + traction_halfop_row(g, pb.params, t) * th + eps * rt + sig * nu;
    const Eigen::Vector2d arg =
        eps * (single_layer_row(g, pb.params, t) * th + rv) + eps * (sys.strain() * x) + state.xi;
    worst = std::max(worst, (trac - pb.law->value(x, arg)).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::Vector2d net_traction(const TractionSystem& sys, double eps, const SystemState& state) {
  const auto ops = sys.operators(eps);
  Density trac = unpacked(ops->traction * packed(state.theta));
  trac += sys.affine_traction();
  // the boundary of p + eps Omega has arc length scaled by eps
  return eps * boundary_integral(sys.grid(), trac);
}

}  // namespace lamebie
