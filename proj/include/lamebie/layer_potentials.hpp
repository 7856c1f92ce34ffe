#pragma once

#include <Eigen/Dense>

#include "lamebie/geometry.hpp"
#include "lamebie/kelvin.hpp"
#include "lamebie/periodic_green.hpp"

namespace lamebie {

/// Boundary density sampled at the grid nodes, one row per node. Row-major so
/// that the packed vector (node-major, index 2 i + c) is a plain view.
using Density = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

inline Eigen::Map<const Eigen::VectorXd> packed(const Density& d) { return {d.data(), d.size()}; }
inline Eigen::Map<Eigen::VectorXd> packed(Density& d) { return {d.data(), d.size()}; }
Density unpacked(const Eigen::VectorXd& v);

/// sum_j mu_j w_j
Eigen::Vector2d boundary_integral(const BoundaryGrid& grid, const Density& mu);

// --- free space -----------------------------------------------------------

Eigen::Vector2d single_layer_field(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                   const Eigen::Vector2d& x);

/// Traction T(omega, D v[mu](x)) nu at an off-boundary point.
Eigen::Vector2d single_layer_traction(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                      const Eigen::Vector2d& x, const Eigen::Vector2d& nu);

/// Double layer w[mu](x) = -int K(x - y, nu(y))^t mu(y) dsigma_y off the boundary.
Eigen::Vector2d double_layer_field(const BoundaryGrid& grid, const LameParams& params, const Density& mu,
                                   const Eigen::Vector2d& x);

Density single_layer_boundary(const BoundaryGrid& grid, const LameParams& params, const Density& mu);
Density traction_halfop_free(const BoundaryGrid& grid, const LameParams& params, const Density& mu);

/// Nystrom matrices (2N x 2N, node-major) of the free operators on the grid.
///
/// The single layer kernel is split as (a/4pi) log(4 sin^2((t-s)/2)) I plus a
/// smooth remainder whose diagonal limit is (a/4pi) log|g'|^2 I - b tt^t.
/// The traction kernels are split into a smooth part, with diagonal limit
/// (kappa/2)(c0 I + 4 b tt^t)|g'|, and c0 J k(t,s) with the scalar Cauchy
/// kernel k = (r x nu)|g'(s)| / |r|^2; k - cot((s-t)/2)/2 is smooth with
/// diagonal value (g'.g'')/(2|g'|^2). Here a = (w+2)/(2(w+1)),
/// b = w/(4 pi (w+1)), c0 = 1/(2 pi (w+1)), J = [[0,1],[-1,0]], t the unit
/// tangent and kappa the signed curvature.
Eigen::MatrixXd single_layer_matrix(const BoundaryGrid& grid, const LameParams& params);
Eigen::MatrixXd traction_halfop_matrix(const BoundaryGrid& grid, const LameParams& params);
/// Principal value double layer on the boundary (no jump term).
Eigen::MatrixXd double_layer_matrix(const BoundaryGrid& grid, const LameParams& params);

/// Off-grid versions of the three boundary operators at curve parameter t,
/// returned as 2 x 2N row blocks acting on the packed density. Used for
/// collocation between nodes.
Eigen::MatrixXd single_layer_row(const BoundaryGrid& grid, const LameParams& params, double t);
Eigen::MatrixXd traction_halfop_row(const BoundaryGrid& grid, const LameParams& params, double t);

// --- periodic ---------------------------------------------------------------

/// Blocks R^q(scale (t_i - s_j)) w_j and T(omega, D R^q(scale (t_i - s_j))) nu_i w_j.
/// Each unordered node pair is evaluated once using the parity of R^q.
void regular_matrices(const BoundaryGrid& grid, const PeriodicGreen& green, double scale, Eigen::MatrixXd& value,
                      Eigen::MatrixXd& traction);

/// Blocks -T(omega, D R^q(t_i - s_j))^t-contracted with nu_j, i.e. the smooth
/// periodic correction of the double layer on the boundary.
Eigen::MatrixXd regular_double_layer_matrix(const BoundaryGrid& grid, const PeriodicGreen& green);

/// Throws GeometryError unless every node lies strictly inside the cell.
void require_inside_cell(const BoundaryGrid& grid, const LatticeCell& cell);

Density traction_halfop_periodic(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu);
Density traction_halfop_periodic(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                 const BoundaryGrid& grid_q, const Density& mu);

Eigen::Vector2d periodic_single_layer_field(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                            const Density& mu, const Eigen::Vector2d& x);
Eigen::Vector2d periodic_single_layer_field(const LatticeCell& cell, const LameParams& params,
                                            const EwaldParams& ewald, const BoundaryGrid& grid_q, const Density& mu,
                                            const Eigen::Vector2d& x);

/// R^q part of the periodic single layer and of its traction.
Eigen::Vector2d regular_single_layer_field(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                           const Density& mu, const Eigen::Vector2d& x);
Eigen::Vector2d regular_single_layer_traction(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                              const Density& mu, const Eigen::Vector2d& x, const Eigen::Vector2d& nu);

Eigen::Vector2d double_layer_periodic(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu,
                                      const Eigen::Vector2d& x);
Eigen::Vector2d double_layer_periodic(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                      const BoundaryGrid& grid_q, const Density& mu, const Eigen::Vector2d& x);

/// Principal value of the periodic double layer at the nodes.
Density double_layer_periodic_boundary(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu);

/// Spectrally interpolates a density onto the fine grid of the same shape.
Density resample_density(const Density& mu, int fine_n);

}  // namespace lamebie
