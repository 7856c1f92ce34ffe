#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "lamebie/kelvin.hpp"
#include "lamebie/lattice.hpp"

namespace lamebie {

/// Parameters of the Ewald split used for the periodic kernels.
///
/// split_parameter is the Gaussian screening time tau (units of length^2);
/// fourier_cutoff bounds |z|_inf in the reciprocal sum and real_cutoff bounds
/// the image offset |z - z_nearest|_inf in the direct sum.
struct EwaldParams {
  double split_parameter = 0.03;
  int fourier_cutoff = 6;
  int real_cutoff = 2;
  double target_tol = 1e-10;

  /// Cutoffs from Gaussian tail bounds for the given tolerance. The split
  /// parameter defaults to a fixed fraction of the cell volume.
  static EwaldParams adaptive(const LatticeCell& cell, double target_tol = 1e-10, double split_parameter = 0.0);

  void validate() const;
};

/// Derivative tensor of a 2x2 matrix kernel: d[m](i, l) = d K_{il} / d x_m.
using KernelGradient = std::array<Eigen::Matrix2d, 2>;

/// Evaluator for the periodic fundamental solution of L[omega] in the plane
/// and its regular part R^q = Gamma^q - Gamma.
///
/// Gamma^q is assembled from the periodic harmonic Green function G_q and the
/// periodic biharmonic Green function B_q,
///
///   Gamma^q = G_q I - omega/(omega+1) Hess B_q,
///
/// each summed by an Ewald split with screening time tau:
///
///   G_q = -1/(4 pi) sum_z E1(|x-qz|^2/4tau) + tau/|Q|
///         - 1/|Q| sum_{k != 0} e^{-4 pi^2 tau |k|^2} / (4 pi^2 |k|^2) e^{2 pi i k.x}
///   B_q = tau/(4 pi) sum_z E2(|x-qz|^2/4tau) + const
///         + 1/|Q| sum_{k != 0} e^{-a tau} (tau/a + 1/a^2) e^{2 pi i k.x},  a = 4 pi^2 |k|^2
///
/// with k = q^{-1} z. For the regular part the z = 0 direct term is replaced
/// by its difference with the free-space kernel, which is an entire function
/// of |x|^2.
///
/// Evaluation is pure after construction.
class PeriodicGreen {
 public:
  PeriodicGreen(LatticeCell cell, LameParams params, EwaldParams ewald);
  PeriodicGreen(LatticeCell cell, LameParams params);

  const LatticeCell& cell() const { return cell_; }
  const LameParams& params() const { return params_; }
  const EwaldParams& ewald() const { return ewald_; }
  std::size_t mode_count() const { return modes_.size(); }

  Eigen::Matrix2d value(const Eigen::Vector2d& x) const;
  KernelGradient gradient(const Eigen::Vector2d& x) const;

  /// R^q(x); defined at x = 0 and at every x outside q Z^2 \ {0}.
  Eigen::Matrix2d regular_value(const Eigen::Vector2d& x) const;
  KernelGradient regular_gradient(const Eigen::Vector2d& x) const;
  void regular_value_and_gradient(const Eigen::Vector2d& x, Eigen::Matrix2d& value, KernelGradient& grad) const;

  /// Column l is T(omega, D Gamma^{q,l}(x)) nu.
  Eigen::Matrix2d traction_kernel(const Eigen::Vector2d& x, const Eigen::Vector2d& nu) const;
  /// Column l is T(omega, D R^{q,l}(x)) nu.
  Eigen::Matrix2d regular_traction_kernel(const Eigen::Vector2d& x, const Eigen::Vector2d& nu) const;

  /// Scalar pieces of the split: value and gradient of G_q, Hessian and
  /// third derivatives of B_q. In regular mode the free-space parts are
  /// subtracted.
  struct ScalarParts {
    double g = 0.0;
    std::array<double, 2> dg{};
    std::array<double, 3> hb{};  // xx, xy, yy
    std::array<double, 4> tb{};  // xxx, xxy, xyy, yyy
  };
  ScalarParts scalar_parts(const Eigen::Vector2d& x, bool regular, bool want_derivatives) const;

 private:
  struct Mode {
    int z1, z2;
    double k1, k2;
    double cg;  // doubled reciprocal coefficient of G_q
    double cb;  // doubled reciprocal coefficient of B_q
  };

  Eigen::Matrix2d assemble_value(const ScalarParts& s, bool regular) const;
  KernelGradient assemble_gradient(const ScalarParts& s) const;

  LatticeCell cell_;
  LameParams params_;
  EwaldParams ewald_;
  double beta_;
  double tail_exponent_;
  std::vector<Mode> modes_;
  int kmax1_ = 0, kmax2_ = 0;
};

/// Fourier coefficient (j, k) of Gamma^q at the nonzero mode z.
double fourier_coefficient(const LatticeCell& cell, const LameParams& params, const Eigen::Vector2i& z, int j, int k);

Eigen::Matrix2d periodic_green(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                               const Eigen::Vector2d& x);

Eigen::Matrix2d regular_part(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                             const Eigen::Vector2d& x);

Eigen::Matrix2d regular_traction_kernel(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                        const Eigen::Vector2d& x, const Eigen::Vector2d& nu);

/// Column l of T(omega, D K^l) nu for a kernel gradient.
Eigen::Matrix2d traction_from_gradient(double omega, const KernelGradient& d, const Eigen::Vector2d& nu);

/// L[omega] Gamma^q(x) + I/|Q| by central differences, Richardson
/// extrapolated over the decreasing step list.
Eigen::Matrix2d pde_residual(const LatticeCell& cell, const LameParams& params, const Eigen::Vector2d& x,
                             const std::vector<double>& steps);

/// Same stencil applied to an arbitrary matrix field.
template <class Field>
Eigen::Matrix2d lame_operator_fd(double omega, const Field& f, const Eigen::Vector2d& x, const std::vector<double>& steps);

}  // namespace lamebie

#include "lamebie/detail/lame_fd.hpp"
