#include "lamebie/layer_potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lamebie/errors.hpp"
#include "lamebie/quadrature.hpp"

namespace lamebie {

namespace {

constexpr double kPi = std::numbers::pi;

struct Coefs {
  double a, b, c0;
  explicit Coefs(const LameParams& p) {
    if (p.dim() != 2) throw DomainError("layer potentials are implemented for n = 2 only");
    const double w = p.omega();
    a = (w + 2.0) / (2.0 * (w + 1.0));
    b = w / (4.0 * kPi * (w + 1.0));
    c0 = 1.0 / (2.0 * kPi * (w + 1.0));
  }
};

const Eigen::Matrix2d kJ = (Eigen::Matrix2d() << 0.0, 1.0, -1.0, 0.0).finished();

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a[0] * b[1] - a[1] * b[0]; }

// Kelvin matrix in 2D from the offset r.
Eigen::Matrix2d kelvin2(const Coefs& c, const Eigen::Vector2d& r) {
  const double rho = r.squaredNorm();
  Eigen::Matrix2d g = -(c.b / rho) * (r * r.transpose());
  g.diagonal().array() += c.a * std::log(rho) / (4.0 * kPi);
  return g;
}

// Traction kernel: column l is T(omega, D Gamma^l(r)) nu.
Eigen::Matrix2d traction2(const Coefs& c, const Eigen::Vector2d& r, const Eigen::Vector2d& nu) {
  const double rho = r.squaredNorm();
  const double rn = r.dot(nu);
  Eigen::Matrix2d k = (4.0 * c.b * rn / (rho * rho)) * (r * r.transpose());
  k.diagonal().array() += c.c0 * rn / rho;
  k += (c.c0 * cross(r, nu) / rho) * kJ;
  return k;
}

double wrap_angle(double d) { return d - 2.0 * kPi * std::round(d / (2.0 * kPi)); }

// Target description for the singular boundary rules.
struct Target {
  double t;
  Eigen::Vector2d x, d1, d2;
  int node;  // index of the coincident node, -1 if none
};

Target node_target(const BoundaryGrid& g, int i) { return {g.params[i], g.nodes[i], g.d1[i], g.d2[i], i}; }

Target param_target(const BoundaryGrid& g, double t) {
  Target tg{t, g.shape->point(t), g.shape->d1(t), g.shape->d2(t), -1};
  for (int j = 0; j < g.n; ++j) {
    if (std::abs(wrap_angle(t - g.params[j])) < 1e-12) {
      tg.node = j;
      break;
    }
  }
  return tg;
}

void single_layer_block(const BoundaryGrid& g, const Coefs& c, const Target& tg, const std::vector<double>& logw,
                        Eigen::Ref<Eigen::MatrixXd> out) {
  const double h = g.h;
  for (int j = 0; j < g.n; ++j) {
    Eigen::Matrix2d m;
    if (j == tg.node) {
      const double sp = tg.d1.norm();
      const Eigen::Vector2d tau = tg.d1 / sp;
      m = -c.b * (tau * tau.transpose());
      m.diagonal().array() += c.a / (4.0 * kPi) * std::log(sp * sp);
    } else {
      const double d = tg.t - g.params[j];
      const double sn = std::sin(0.5 * d);
      m = kelvin2(c, tg.x - g.nodes[j]);
      m.diagonal().array() -= c.a / (4.0 * kPi) * std::log(4.0 * sn * sn);
    }
    m *= h;
    m.diagonal().array() += c.a / (4.0 * kPi) * logw[j];
    out.block(0, 2 * j, 2, 2) = m * g.speeds[j];
  }
}

// Shared by the traction half-operator (normal at the target) and the double
// layer (normal at the source, transposed kernel with a sign).
void traction_block(const BoundaryGrid& g, const Coefs& c, const Target& tg, const std::vector<double>& hilw,
                    bool double_layer, Eigen::Ref<Eigen::MatrixXd> out) {
  const double h = g.h;
  const double spt = tg.d1.norm();
  const Eigen::Vector2d nut(tg.d1[1] / spt, -tg.d1[0] / spt);
  for (int j = 0; j < g.n; ++j) {
    Eigen::Matrix2d smooth;
    double kc;  // remainder of the scalar Cauchy kernel after removing cot/2
    if (j == tg.node) {
      const Eigen::Vector2d tau = tg.d1 / spt;
      const double kappa = cross(tg.d1, tg.d2) / (spt * spt * spt);
      smooth = 4.0 * c.b * (tau * tau.transpose());
      smooth.diagonal().array() += c.c0;
      smooth *= 0.5 * kappa * spt;
      kc = tg.d1.dot(tg.d2) / (2.0 * spt * spt);
    } else {
      const Eigen::Vector2d r = tg.x - g.nodes[j];
      const Eigen::Vector2d& nu = double_layer ? g.normals[j] : nut;
      const double rho = r.squaredNorm();
      const double rn = r.dot(nu);
      smooth = (4.0 * c.b * rn / (rho * rho)) * (r * r.transpose());
      smooth.diagonal().array() += c.c0 * rn / rho;
      if (double_layer) smooth = -smooth;
      smooth *= g.speeds[j];
      const double d = g.params[j] - tg.t;
      kc = cross(r, nu) * g.speeds[j] / rho - 0.5 / std::tan(0.5 * d);
    }
    Eigen::Matrix2d blk = h * smooth + (c.c0 * (0.5 * hilw[j] + h * kc)) * kJ;
    out.block(0, 2 * j, 2, 2) = blk;
  }
}

template <class BlockFn>
Eigen::MatrixXd nodal_matrix(const BoundaryGrid& g, BlockFn fn) {
  const int n = g.n;
  Eigen::MatrixXd m(2 * n, 2 * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) fn(i, m.middleRows(2 * i, 2));
  return m;
}

// Shift the nodal table so that entry j is the weight for offset i - j.
std::vector<double> shifted(const std::vector<double>& table, int i, bool by_difference) {
  const int n = static_cast<int>(table.size());
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    const int k = ((i - j) % n + n) % n;
    w[j] = by_difference ? table[k] : table[k];
  }
  return w;
}

Density apply(const Eigen::MatrixXd& m, const Density& mu) {
  Eigen::VectorXd v = m * packed(mu);
  return unpacked(v);
}

void require_size(const BoundaryGrid& g, const Density& mu) {
  if (mu.rows() != g.n) {
    throw DomainError("density has " + std::to_string(mu.rows()) + " rows, grid has " + std::to_string(g.n));
  }
}

}  // namespace

Density unpacked(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw DomainError("packed density must have even length");
  Density d(v.size() / 2, 2);
  packed(d) = v;
  return d;
}

Eigen::Vector2d boundary_integral(const BoundaryGrid& grid, const Density& mu) {
  require_size(grid, mu);
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid.n; ++j) s += grid.weights[j] * mu.row(j).transpose();
  return s;
}

Eigen::Vector2d single_layer_field(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                   const Eigen::Vector2d& x) {
  require_size(grid, mu);
  const Coefs c(params);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid.n; ++j) v += grid.weights[j] * (kelvin2(c, x - grid.nodes[j]) * mu.row(j).transpose());
  return v;
}

Eigen::Vector2d single_layer_traction(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                      const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
  require_size(grid, mu);
  const Coefs c(params);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid.n; ++j) {
    v += grid.weights[j] * (traction2(c, x - grid.nodes[j], nu) * mu.row(j).transpose());
  }
  return v;
}

Eigen::Vector2d double_layer_field(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                   const Eigen::Vector2d& x) {
  require_size(grid, mu);
  const Coefs c(params);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid.n; ++j) {
    v -= grid.weights[j] * (traction2(c, x - grid.nodes[j], grid.normals[j]).transpose() * mu.row(j).transpose());
  }
  return v;
}

Eigen::MatrixXd single_layer_matrix(const BoundaryGrid& grid, const LameParams& params) {
  const Coefs c(params);
  const auto table = log_weights_nodal(grid.n);
  return nodal_matrix(grid, [&](int i, Eigen::Ref<Eigen::MatrixXd> rows) {
    single_layer_block(grid, c, node_target(grid, i), shifted(table, i, true), rows);
  });
}

Eigen::MatrixXd traction_halfop_matrix(const BoundaryGrid& grid, const LameParams& params) {
  const Coefs c(params);
  const auto table = hilbert_weights_nodal(grid.n);
  return nodal_matrix(grid, [&](int i, Eigen::Ref<Eigen::MatrixXd> rows) {
    traction_block(grid, c, node_target(grid, i), shifted(table, i, true), false, rows);
  });
}

Eigen::MatrixXd double_layer_matrix(const BoundaryGrid& grid, const LameParams& params) {
  const Coefs c(params);
  const auto table = hilbert_weights_nodal(grid.n);
  return nodal_matrix(grid, [&](int i, Eigen::Ref<Eigen::MatrixXd> rows) {
    traction_block(grid, c, node_target(grid, i), shifted(table, i, true), true, rows);
  });
}

Eigen::MatrixXd single_layer_row(const BoundaryGrid& grid, const LameParams& params, double t) {
  const Coefs c(params);
  Eigen::MatrixXd rows(2, 2 * grid.n);
  single_layer_block(grid, c, param_target(grid, t), log_weights(grid.n, t), rows);
  return rows;
}

Eigen::MatrixXd traction_halfop_row(const BoundaryGrid& grid, const LameParams& params, double t) {
  const Coefs c(params);
  Eigen::MatrixXd rows(2, 2 * grid.n);
  traction_block(grid, c, param_target(grid, t), hilbert_weights(grid.n, t), false, rows);
  return rows;
}

Density single_layer_boundary(const BoundaryGrid& grid, const LameParams& params, const Density& mu) {
  require_size(grid, mu);
  return apply(single_layer_matrix(grid, params), mu);
}

Density traction_halfop_free(const BoundaryGrid& grid, const LameParams& params, const Density& mu) {
  require_size(grid, mu);
  return apply(traction_halfop_matrix(grid, params), mu);
}

void regular_matrices(const BoundaryGrid& grid, const PeriodicGreen& green, double scale, Eigen::MatrixXd& value,
                      Eigen::MatrixXd& traction) {
  const int n = grid.n;
  const double w = green.params().omega();
  value.resize(2 * n, 2 * n);
  traction.resize(2 * n, 2 * n);
  // R^q is even and its gradient odd, so the pair (j, i) reuses (i, j).
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Eigen::Matrix2d r;
      KernelGradient d;
      green.regular_value_and_gradient(scale * (grid.nodes[i] - grid.nodes[j]), r, d);
      value.block(2 * i, 2 * j, 2, 2) = r * grid.weights[j];
      traction.block(2 * i, 2 * j, 2, 2) = traction_from_gradient(w, d, grid.normals[i]) * grid.weights[j];
      if (j != i) {
        value.block(2 * j, 2 * i, 2, 2) = r * grid.weights[i];
        traction.block(2 * j, 2 * i, 2, 2) = -traction_from_gradient(w, d, grid.normals[j]) * grid.weights[i];
      }
    }
  }
}

Eigen::MatrixXd regular_double_layer_matrix(const BoundaryGrid& grid, const PeriodicGreen& green) {
  const int n = grid.n;
  const double w = green.params().omega();
  Eigen::MatrixXd m(2 * n, 2 * n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const KernelGradient d = green.regular_gradient(grid.nodes[i] - grid.nodes[j]);
      m.block(2 * i, 2 * j, 2, 2) = -traction_from_gradient(w, d, grid.normals[j]).transpose() * grid.weights[j];
      if (j != i) {
        m.block(2 * j, 2 * i, 2, 2) = traction_from_gradient(w, d, grid.normals[i]).transpose() * grid.weights[i];
      }
    }
  }
  return m;
}

void require_inside_cell(const BoundaryGrid& grid, const LatticeCell& cell) {
  for (int i = 0; i < grid.n; ++i) {
    for (int c = 0; c < 2; ++c) {
      if (!(grid.nodes[i][c] > 0.0 && grid.nodes[i][c] < cell.q(c))) {
        throw GeometryError("boundary node " + std::to_string(i) + " is not strictly inside the cell");
      }
    }
  }
}

Density traction_halfop_periodic(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu) {
  require_size(grid_q, mu);
  require_inside_cell(grid_q, green.cell());
  Eigen::MatrixXd value, trac;
  regular_matrices(grid_q, green, 1.0, value, trac);
  trac += traction_halfop_matrix(grid_q, green.params());
  return apply(trac, mu);
}

Density traction_halfop_periodic(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                 const BoundaryGrid& grid_q, const Density& mu) {
  return traction_halfop_periodic(PeriodicGreen(cell, params, ewald), grid_q, mu);
}

Eigen::Vector2d periodic_single_layer_field(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                            const Density& mu, const Eigen::Vector2d& x) {
  require_size(grid_q, mu);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid_q.n; ++j) {
    v += grid_q.weights[j] * (green.value(x - grid_q.nodes[j]) * mu.row(j).transpose());
  }
  return v;
}

Eigen::Vector2d periodic_single_layer_field(const LatticeCell& cell, const LameParams& params,
                                            const EwaldParams& ewald, const BoundaryGrid& grid_q, const Density& mu,
                                            const Eigen::Vector2d& x) {
  return periodic_single_layer_field(PeriodicGreen(cell, params, ewald), grid_q, mu, x);
}

Eigen::Vector2d regular_single_layer_field(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                           const Density& mu, const Eigen::Vector2d& x) {
  require_size(grid_q, mu);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid_q.n; ++j) {
    v += grid_q.weights[j] * (green.regular_value(x - grid_q.nodes[j]) * mu.row(j).transpose());
  }
  return v;
}

Eigen::Vector2d regular_single_layer_traction(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                              const Density& mu, const Eigen::Vector2d& x,
                                              const Eigen::Vector2d& nu) {
  require_size(grid_q, mu);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid_q.n; ++j) {
    v += grid_q.weights[j] * (green.regular_traction_kernel(x - grid_q.nodes[j], nu) * mu.row(j).transpose());
  }
  return v;
}

Eigen::Vector2d double_layer_periodic(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu,
                                      const Eigen::Vector2d& x) {
  require_size(grid_q, mu);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid_q.n; ++j) {
    v -= grid_q.weights[j] *
         (green.traction_kernel(x - grid_q.nodes[j], grid_q.normals[j]).transpose() * mu.row(j).transpose());
  }
  return v;
}

Eigen::Vector2d double_layer_periodic(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                      const BoundaryGrid& grid_q, const Density& mu, const Eigen::Vector2d& x) {
  return double_layer_periodic(PeriodicGreen(cell, params, ewald), grid_q, mu, x);
}

Density double_layer_periodic_boundary(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu) {
  require_size(grid_q, mu);
  require_inside_cell(grid_q, green.cell());
  Eigen::MatrixXd m = double_layer_matrix(grid_q, green.params()) + regular_double_layer_matrix(grid_q, green);
  return apply(m, mu);
}

Density resample_density(const Density& mu, int fine_n) {
  const TrigInterpolant f(mu);
  Density out(fine_n, 2);
  for (int i = 0; i < fine_n; ++i) out.row(i) = f(2.0 * kPi * i / fine_n);
  return out;
}

}  // namespace lamebie
