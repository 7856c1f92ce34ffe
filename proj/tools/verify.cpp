#include <algorithm>
#include <cmath>
#include <random>

#include "cli.hpp"
#include "lamebie/geometry.hpp"
#include "lamebie/jump_check.hpp"
#include "lamebie/kelvin.hpp"
#include "lamebie/layer_potentials.hpp"
#include "lamebie/periodic_green.hpp"

namespace lamebie::cli {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Density random_density(const BoundaryGrid& g, std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Density mu = Density::Zero(g.n, 2);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k <= modes; ++k) {
      const double a = u(rng), b = k ? u(rng) : 0.0;
      for (int i = 0; i < g.n; ++i) mu(i, c) += a * std::cos(k * g.params[i]) + b * std::sin(k * g.params[i]);
    }
  }
  return mu;
}

}  // namespace

std::vector<OracleCheck> run_oracles(const RunConfig& cfg) {
  const Problem pb = make_problem(cfg);
  const LatticeCell& cell = pb.cell;
  const Eigen::Vector2d q = cell.q_diag();
  const PeriodicGreen green(cell, pb.params, *pb.ewald);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<OracleCheck> out;

  // points kept away from the lattice so the difference stencils stay regular
  auto cell_point = [&] {
    for (;;) {
      const Eigen::Vector2d x(q[0] * unit(rng), q[1] * unit(rng));
      if (distance_to_lattice(cell, x) > 0.1 * cell.min_period()) return x;
    }
  };

  {
    double e = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d x = cell_point();
      e = std::max(e, max_abs(pde_residual(cell, pb.params, x, {1e-2, 5e-3, 2.5e-3})));
    }
    out.push_back({"green_pde_source", e, 1e-5});
  }
  {
    double even = 0.0, per = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Eigen::Vector2d x = cell_point();
      const Eigen::Matrix2d g = green.value(x);
      even = std::max(even, max_abs(g - green.value(-x)));
      per = std::max(per, max_abs(green.value(Eigen::Vector2d(x[0] + q[0], x[1])) - g));
      per = std::max(per, max_abs(green.value(Eigen::Vector2d(x[0], x[1] + q[1])) - g));
    }
    out.push_back({"green_even", even, 1e-9});
    out.push_back({"green_periodic", per, 1e-9});
  }

  // hole of the sweep geometry at a size that fits the cell
  const double eps0 = compute_eps0(*pb.shape, cell, pb.p);
  const double scale = eps0 > 1.0 ? 1.0 : 0.5 * eps0;
  const BoundaryGrid gq = placed_grid(pb.shape, pb.p, scale, pb.n_nodes);
  const double frac = enclosed_area(gq) / cell.volume();
  const Eigen::Vector2d outside = wrap_to_cell(cell, Eigen::Vector2d(pb.p + 0.5 * q));
  {
    double eo = 0.0, ei = 0.0, eb = 0.0;
    for (int j = 0; j < 2; ++j) {
      Density mu = Density::Zero(gq.n, 2);
      mu.col(j).setOnes();
      const Eigen::Vector2d ej = Eigen::Vector2d::Unit(j);
      eo = std::max(eo, max_abs(double_layer_periodic(green, gq, mu, outside) + frac * ej));
      ei = std::max(ei, max_abs(double_layer_periodic(green, gq, mu, pb.p) - (1.0 - frac) * ej));
      const Density b = double_layer_periodic_boundary(green, gq, mu);
      for (int i = 0; i < gq.n; ++i) eb = std::max(eb, max_abs(b.row(i).transpose() - (0.5 - frac) * ej));
    }
    out.push_back({"double_layer_outside", eo, 1e-8});
    out.push_back({"double_layer_inside", ei, 1e-8});
    out.push_back({"double_layer_boundary", eb, 1e-8});
  }

  std::vector<int> nodes;
  for (int i = 0; i < gq.n; i += gq.n / 4) nodes.push_back(i + 1);
  {
    const Density mu = random_density(gq, rng, 3);
    const Density pv = double_layer_periodic_boundary(green, gq, mu);
    const OneSidedLimits lim = double_layer_limits(green, gq, mu, nodes);
    double e = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const Eigen::RowVector2d m = mu.row(nodes[k]), w = pv.row(nodes[k]);
      e = std::max(e, max_abs(lim.interior.row(k) - (0.5 * m + w)));
      e = std::max(e, max_abs(lim.exterior.row(k) - (-0.5 * m + w)));
    }
    out.push_back({"double_layer_jump", e, 1e-6});
  }
  {
    const Density mu = random_density(gq, rng, 3);
    const Density w = traction_halfop_periodic(green, gq, mu);
    const OneSidedLimits lim = single_layer_traction_limits(green, gq, mu, nodes);
    double e = 0.0, d = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const Eigen::RowVector2d m = mu.row(nodes[k]), wv = w.row(nodes[k]);
      e = std::max(e, max_abs(lim.interior.row(k) - (-0.5 * m + wv)));
      e = std::max(e, max_abs(lim.exterior.row(k) - (0.5 * m + wv)));
      d = std::max(d, max_abs(lim.exterior.row(k) - lim.interior.row(k) - m));
    }
    out.push_back({"single_layer_traction_jump", e, 1e-6});
    out.push_back({"single_layer_traction_difference", d, 1e-6});
  }
  {
    double e = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Density mu = random_density(gq, rng, 4);
      const Eigen::Vector2d lhs = boundary_integral(gq, traction_halfop_periodic(green, gq, mu));
      e = std::max(e, max_abs(lhs - (0.5 - frac) * boundary_integral(gq, mu)));
    }
    out.push_back({"periodic_traction_integral", e, 1e-8});
  }
  {
    const BoundaryGrid g = build_grid(pb.shape, pb.n_nodes);
    double e = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Density mu = random_density(g, rng, 4);
      Density half = traction_halfop_free(g, pb.params, mu);
      half += 0.5 * mu;
      e = std::max(e, max_abs(boundary_integral(g, half) - boundary_integral(g, mu)));
    }
    out.push_back({"free_traction_integral", e, 1e-9});

    double t = 0.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 4; ++k) {
      Eigen::Matrix2d B;
      if (k == 0) {
        B = cfg.B;
      } else {
        B << u(rng), u(rng), u(rng), u(rng);
      }
      const Eigen::Matrix2d sig = stress(pb.params, B * q.cwiseInverse().asDiagonal());
      Density tr(g.n, 2);
      for (int i = 0; i < g.n; ++i) tr.row(i) = (sig * g.normals[i]).transpose();
      t = std::max(t, max_abs(boundary_integral(g, tr)));
    }
    out.push_back({"affine_net_traction", t, 1e-12});
  }
  return out;
}

}  // namespace lamebie::cli
