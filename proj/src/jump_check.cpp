#include "lamebie/jump_check.hpp"

namespace lamebie {

std::vector<double> jump_distances(const BoundaryGrid& grid) {
  // with the circumradius itself the delta^3 remainder is ~1e-5
  const double r = grid.circumradius() / 8.0;
  return {1e-2 * r, 5e-3 * r, 2.5e-3 * r};
}

BoundaryGrid jump_fine_grid(const BoundaryGrid& grid) {
  const double d = jump_distances(grid).back();
  int n = 1024;
  while (grid.length() / n > d / 4.0) n *= 2;
  return build_grid(grid.shape, n, false);
}

namespace {

template <class Eval>
OneSidedLimits one_sided(const BoundaryGrid& grid_q, const std::vector<int>& nodes, const Eval& eval) {
  const std::vector<double> deltas = jump_distances(grid_q);
  const int m = static_cast<int>(nodes.size());
  OneSidedLimits out{Density(m, 2), Density(m, 2)};
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < m; ++k) {
    const int i = nodes[k];
    const Eigen::Vector2d t = grid_q.nodes[i], nu = grid_q.normals[i];
    std::vector<Eigen::Vector2d> in, ex;
    for (double d : deltas) {
      in.push_back(eval(Eigen::Vector2d(t - d * nu), nu));
      ex.push_back(eval(Eigen::Vector2d(t + d * nu), nu));
    }
    out.interior.row(k) = extrapolate_to_zero(deltas, in, 1).transpose();
    out.exterior.row(k) = extrapolate_to_zero(deltas, ex, 1).transpose();
  }
  return out;
}

}  // namespace

OneSidedLimits single_layer_traction_limits(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                            const Density& mu, const std::vector<int>& nodes) {
  // Kelvin part is nearly singular: fine grid. R^q part is smooth: coarse grid.
  const BoundaryGrid fine = jump_fine_grid(grid_q);
  const Density mu_fine = resample_density(mu, fine.n);
  return one_sided(grid_q, nodes, [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
    return Eigen::Vector2d(single_layer_traction(fine, green.params(), mu_fine, x, nu) +
                           regular_single_layer_traction(green, grid_q, mu, x, nu));
  });
}

OneSidedLimits double_layer_limits(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu,
                                   const std::vector<int>& nodes) {
  const BoundaryGrid fine = jump_fine_grid(grid_q);
  const Density mu_fine = resample_density(mu, fine.n);
  return one_sided(grid_q, nodes, [&](const Eigen::Vector2d& x, const Eigen::Vector2d&) {
    Eigen::Vector2d v = double_layer_field(fine, green.params(), mu_fine, x);
    for (int j = 0; j < grid_q.n; ++j) {
      const Eigen::Matrix2d k = green.regular_traction_kernel(Eigen::Vector2d(x - grid_q.nodes[j]), grid_q.normals[j]);
      v -= grid_q.weights[j] * (k.transpose() * mu.row(j).transpose());
    }
    return v;
  });
}

}  // namespace lamebie
