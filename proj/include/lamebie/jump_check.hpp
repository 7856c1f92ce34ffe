#pragma once

// One-sided boundary limits obtained by summing off the boundary and
// extrapolating in the distance. Independent of the singular quadrature, so
// it serves as a check on the jump relations.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/geometry.hpp"
#include "lamebie/layer_potentials.hpp"
#include "lamebie/periodic_green.hpp"

namespace lamebie {

/// Neville extrapolation to h = 0 for an error expansion in h^p, h^2p, ...
template <class T>
T extrapolate_to_zero(const std::vector<double>& h, std::vector<T> v, int power) {
  const std::size_t n = h.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      const double a = std::pow(h[i - k], power), b = std::pow(h[i], power);
      v[i] = (a * v[i] - b * v[i - 1]) / (a - b);
      if (i == k) break;
    }
  }
  return v[n - 1];
}

/// {1e-2, 5e-3, 2.5e-3} * circumradius / 8.
std::vector<double> jump_distances(const BoundaryGrid& grid);

/// Same curve with spacing below a quarter of the smallest distance.
BoundaryGrid jump_fine_grid(const BoundaryGrid& grid);

struct OneSidedLimits {
  Density interior;  // row k belongs to nodes[k]
  Density exterior;
};

/// Traction T(omega, D v_q[mu]) nu_i at t_i -+ delta nu_i, extrapolated.
OneSidedLimits single_layer_traction_limits(const PeriodicGreen& green, const BoundaryGrid& grid_q,
                                            const Density& mu, const std::vector<int>& nodes);

/// w_q[mu] at t_i -+ delta nu_i, extrapolated.
OneSidedLimits double_layer_limits(const PeriodicGreen& green, const BoundaryGrid& grid_q, const Density& mu,
                                   const std::vector<int>& nodes);

}  // namespace lamebie
