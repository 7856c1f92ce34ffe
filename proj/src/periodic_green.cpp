#include "lamebie/periodic_green.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/expint.hpp>

#include "lamebie/errors.hpp"

namespace lamebie {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr int kCutoffCap = 64;

double tail_exponent(double tol) { return std::log(1.0 / tol) + 4.0; }

double expint1(double s) { return boost::math::expint(1, s); }

// Ein(s) = E1(s) + gamma + log s, entire in s.
double ein(double s) {
  if (s <= 1.0) {
    double term = s, sum = s;
    for (int k = 2; k < 40; ++k) {
      term *= -s / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return expint1(s) + kEuler + std::log(s);
}

// (1 - e^{-s}) / s
double phi1(double s) {
  if (s == 0.0) return 1.0;
  return -std::expm1(-s) / s;
}

double phi1_prime(double s) {
  if (s < 0.5) {
    // sum_k (-1)^k k s^{k-1} / (k+1)!
    double sum = 0.0, fact = 1.0, pw = 1.0;
    for (int k = 1; k < 30; ++k) {
      fact *= (k + 1);
      const double add = ((k % 2) ? -1.0 : 1.0) * k * pw / fact;
      sum += add;
      pw *= s;
      if (std::abs(add) < 1e-18) break;
    }
    return sum;
  }
  return (std::exp(-s) * (1.0 + s) - 1.0) / (s * s);
}

void require_2d(const LatticeCell& cell, const LameParams& params) {
  if (cell.dim() != 2 || params.dim() != 2) {
    throw DomainError("periodic kernels are implemented for n = 2 only");
  }
}

// Adds radial contributions with first three rho-derivatives of the
// biharmonic part (f1, f2, f3) and the harmonic part (g0, g1) at offset d.
void add_radial(PeriodicGreen::ScalarParts& out, const Eigen::Vector2d& d, double g0, double g1, double f1,
                double f2, double f3, bool deriv) {
  const double x = d[0], y = d[1];
  out.g += g0;
  out.hb[0] += 2.0 * f1 + 4.0 * x * x * f2;
  out.hb[1] += 4.0 * x * y * f2;
  out.hb[2] += 2.0 * f1 + 4.0 * y * y * f2;
  if (!deriv) return;
  out.dg[0] += 2.0 * x * g1;
  out.dg[1] += 2.0 * y * g1;
  out.tb[0] += 8.0 * x * x * x * f3 + 12.0 * x * f2;
  out.tb[1] += 8.0 * x * x * y * f3 + 4.0 * y * f2;
  out.tb[2] += 8.0 * x * y * y * f3 + 4.0 * x * f2;
  out.tb[3] += 8.0 * y * y * y * f3 + 12.0 * y * f2;
}

}  // namespace

EwaldParams EwaldParams::adaptive(const LatticeCell& cell, double target_tol, double split_parameter) {
  EwaldParams p;
  p.target_tol = target_tol;
  p.split_parameter = split_parameter > 0.0 ? split_parameter : 0.03 * cell.volume();
  if (!(target_tol > 0.0) || target_tol > 1e-3) throw EwaldError("target_tol must lie in ]0, 1e-3]");
  const double L = tail_exponent(target_tol);
  const double tau = p.split_parameter;
  const double kr = std::sqrt(L / (4.0 * kPi * kPi * tau));
  p.fourier_cutoff = std::max(1, static_cast<int>(std::ceil(cell.q_diag().maxCoeff() * kr)));
  const double rr = std::sqrt(4.0 * tau * L) / cell.min_period() - 0.5;
  p.real_cutoff = std::max(1, static_cast<int>(std::ceil(rr)));
  if (p.fourier_cutoff > kCutoffCap || p.real_cutoff > kCutoffCap) {
    throw EwaldError("Ewald cutoffs exceed the cap of " + std::to_string(kCutoffCap) + " (fourier " +
                     std::to_string(p.fourier_cutoff) + ", real " + std::to_string(p.real_cutoff) +
                     "); adjust split_parameter");
  }
  return p;
}

void EwaldParams::validate() const {
  if (!(split_parameter > 0.0) || !std::isfinite(split_parameter)) {
    throw EwaldError("split_parameter must be positive");
  }
  if (fourier_cutoff < 1 || real_cutoff < 1) throw EwaldError("Ewald cutoffs must be >= 1");
  if (fourier_cutoff > kCutoffCap || real_cutoff > kCutoffCap) throw EwaldError("Ewald cutoff above cap");
  if (!(target_tol > 0.0) || target_tol > 1e-3) throw EwaldError("target_tol must lie in ]0, 1e-3]");
}

PeriodicGreen::PeriodicGreen(LatticeCell cell, LameParams params)
    : PeriodicGreen(cell, params, EwaldParams::adaptive(cell)) {}

PeriodicGreen::PeriodicGreen(LatticeCell cell, LameParams params, EwaldParams ewald)
    : cell_(std::move(cell)), params_(params), ewald_(ewald) {
  require_2d(cell_, params_);
  ewald_.validate();
  beta_ = params_.omega() / (params_.omega() + 1.0);
  tail_exponent_ = tail_exponent(ewald_.target_tol);
  const double tau = ewald_.split_parameter;
  const double q1 = cell_.q(0), q2 = cell_.q(1);
  const double vol = cell_.volume();

  // Tail bounds: the first excluded reciprocal shell and the first excluded
  // image ring must both be below the target.
  const int K = ewald_.fourier_cutoff;
  const double kmin_out = (K + 1) / std::max(q1, q2);
  if (4.0 * kPi * kPi * tau * kmin_out * kmin_out < tail_exponent_) {
    throw EwaldError("fourier_cutoff " + std::to_string(K) + " too small for target_tol");
  }
  const double rmin_out = (ewald_.real_cutoff + 0.5) * cell_.min_period();
  if (rmin_out * rmin_out / (4.0 * tau) < tail_exponent_) {
    throw EwaldError("real_cutoff " + std::to_string(ewald_.real_cutoff) + " too small for target_tol");
  }

  for (int z1 = 0; z1 <= K; ++z1) {
    for (int z2 = -K; z2 <= K; ++z2) {
      if (z1 == 0 && z2 <= 0) continue;
      const double k1 = z1 / q1, k2 = z2 / q2;
      const double a = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2);
      if (a * tau > tail_exponent_) continue;
      const double e = std::exp(-a * tau);
      Mode m;
      m.z1 = z1;
      m.z2 = z2;
      m.k1 = k1;
      m.k2 = k2;
      m.cg = -2.0 * e / (vol * a);
      m.cb = 2.0 * e * (tau / a + 1.0 / (a * a)) / vol;
      modes_.push_back(m);
      kmax1_ = std::max(kmax1_, std::abs(z1));
      kmax2_ = std::max(kmax2_, std::abs(z2));
    }
  }
}

PeriodicGreen::ScalarParts PeriodicGreen::scalar_parts(const Eigen::Vector2d& x, bool regular,
                                                       bool deriv) const {
  ScalarParts out;
  const double tau = ewald_.split_parameter;
  const double q1 = cell_.q(0), q2 = cell_.q(1);
  const double qmin = cell_.min_period();
  const long n1 = std::lround(x[0] / q1), n2 = std::lround(x[1] / q2);

  // real-space images around the nearest lattice point
  const int R = ewald_.real_cutoff;
  const double s_cut = tail_exponent_ + 30.0;
  for (long z1 = n1 - R; z1 <= n1 + R; ++z1) {
    for (long z2 = n2 - R; z2 <= n2 + R; ++z2) {
      const bool origin = (z1 == 0 && z2 == 0);
      if (regular && origin) continue;
      const Eigen::Vector2d d(x[0] - z1 * q1, x[1] - z2 * q2);
      const double rho = d.squaredNorm();
      if (rho <= 1e-24 * qmin * qmin) {
        throw SingularPointError("periodic kernel evaluated at a lattice point" +
                                 std::string(regular ? " other than 0" : ""));
      }
      const double s = rho / (4.0 * tau);
      if (s > s_cut) continue;
      const double e1 = expint1(s);
      const double es = std::exp(-s);
      const double g0 = -e1 / (4.0 * kPi);
      const double g1 = es / (4.0 * kPi * rho);
      const double f1 = -e1 / (16.0 * kPi);
      const double f2 = es / (16.0 * kPi * rho);
      const double f3 = -es / (16.0 * kPi * rho) * (1.0 / (4.0 * tau) + 1.0 / rho);
      add_radial(out, d, g0, g1, f1, f2, f3, deriv);
    }
  }

  if (regular) {
    // z = 0 image minus the free-space part: entire functions of rho.
    const double rho = x.squaredNorm();
    const double s = rho / (4.0 * tau);
    const double c = ein(s) - kEuler + std::log(4.0 * tau);
    const double p1 = phi1(s);
    const double g0 = -c / (4.0 * kPi);
    const double g1 = -p1 / (16.0 * kPi * tau);
    const double f1 = -(c + 1.0) / (16.0 * kPi);
    const double f2 = -p1 / (64.0 * kPi * tau);
    const double f3 = deriv ? -phi1_prime(s) / (256.0 * kPi * tau * tau) : 0.0;
    add_radial(out, x, g0, g1, f1, f2, f3, deriv);
  }

  out.g += tau / cell_.volume();

  // reciprocal sum over the half-space of modes, phases by table lookup
  std::vector<std::complex<double>> ph1(kmax1_ + 1), ph2(2 * kmax2_ + 1);
  for (int m = 0; m <= kmax1_; ++m) ph1[m] = std::polar(1.0, 2.0 * kPi * m * x[0] / q1);
  for (int m = -kmax2_; m <= kmax2_; ++m) ph2[m + kmax2_] = std::polar(1.0, 2.0 * kPi * m * x[1] / q2);
  const double tp = 2.0 * kPi;
  for (const Mode& md : modes_) {
    const std::complex<double> e = ph1[md.z1] * ph2[md.z2 + kmax2_];
    const double c = e.real(), sn = e.imag();
    const double k1 = md.k1, k2 = md.k2;
    out.g += md.cg * c;
    const double hc = -tp * tp * md.cb * c;
    out.hb[0] += hc * k1 * k1;
    out.hb[1] += hc * k1 * k2;
    out.hb[2] += hc * k2 * k2;
    if (deriv) {
      const double gs = -tp * md.cg * sn;
      out.dg[0] += gs * k1;
      out.dg[1] += gs * k2;
      const double ts = tp * tp * tp * md.cb * sn;
      out.tb[0] += ts * k1 * k1 * k1;
      out.tb[1] += ts * k1 * k1 * k2;
      out.tb[2] += ts * k1 * k2 * k2;
      out.tb[3] += ts * k2 * k2 * k2;
    }
  }
  return out;
}

Eigen::Matrix2d PeriodicGreen::assemble_value(const ScalarParts& s, bool regular) const {
  Eigen::Matrix2d v;
  v(0, 0) = s.g - beta_ * s.hb[0];
  v(0, 1) = -beta_ * s.hb[1];
  v(1, 0) = v(0, 1);
  v(1, 1) = s.g - beta_ * s.hb[2];
  if (regular) v.diagonal().array() -= beta_ / (8.0 * kPi);
  return v;
}

KernelGradient PeriodicGreen::assemble_gradient(const ScalarParts& s) const {
  // third derivative of B_q indexed by (i, l, m) -> sorted multi-index
  auto t = [&](int i, int l, int m) { return s.tb[i + l + m]; };
  KernelGradient d;
  for (int m = 0; m < 2; ++m) {
    for (int i = 0; i < 2; ++i) {
      for (int l = 0; l < 2; ++l) {
        d[m](i, l) = (i == l ? s.dg[m] : 0.0) - beta_ * t(i, l, m);
      }
    }
  }
  return d;
}

Eigen::Matrix2d PeriodicGreen::value(const Eigen::Vector2d& x) const {
  return assemble_value(scalar_parts(x, false, false), false);
}

KernelGradient PeriodicGreen::gradient(const Eigen::Vector2d& x) const {
  return assemble_gradient(scalar_parts(x, false, true));
}

Eigen::Matrix2d PeriodicGreen::regular_value(const Eigen::Vector2d& x) const {
  return assemble_value(scalar_parts(x, true, false), true);
}

KernelGradient PeriodicGreen::regular_gradient(const Eigen::Vector2d& x) const {
  return assemble_gradient(scalar_parts(x, true, true));
}

void PeriodicGreen::regular_value_and_gradient(const Eigen::Vector2d& x, Eigen::Matrix2d& value,
                                               KernelGradient& grad) const {
  const ScalarParts s = scalar_parts(x, true, true);
  value = assemble_value(s, true);
  grad = assemble_gradient(s);
}

Eigen::Matrix2d PeriodicGreen::traction_kernel(const Eigen::Vector2d& x, const Eigen::Vector2d& nu) const {
  return traction_from_gradient(params_.omega(), gradient(x), nu);
}

Eigen::Matrix2d PeriodicGreen::regular_traction_kernel(const Eigen::Vector2d& x, const Eigen::Vector2d& nu) const {
  return traction_from_gradient(params_.omega(), regular_gradient(x), nu);
}

Eigen::Matrix2d traction_from_gradient(double omega, const KernelGradient& d, const Eigen::Vector2d& nu) {
  Eigen::Matrix2d k;
  for (int l = 0; l < 2; ++l) {
    Eigen::Matrix2d J;
    for (int i = 0; i < 2; ++i) {
      for (int m = 0; m < 2; ++m) J(i, m) = d[m](i, l);
    }
    k.col(l) = (omega - 1.0) * J.trace() * nu + J * nu + J.transpose() * nu;
  }
  return k;
}

double fourier_coefficient(const LatticeCell& cell, const LameParams& params, const Eigen::Vector2i& z, int j,
                           int k) {
  require_2d(cell, params);
  if (z.isZero()) throw DomainError("fourier_coefficient: mode z = 0 is excluded");
  if (j < 0 || j > 1 || k < 0 || k > 1) throw DomainError("fourier_coefficient: index out of range");
  const Eigen::Vector2d xi(z[0] / cell.q(0), z[1] / cell.q(1));
  const double w = params.omega();
  const double n2 = xi.squaredNorm();
  const double delta = (j == k) ? 1.0 : 0.0;
  return (-delta + w / (w + 1.0) * xi[j] * xi[k] / n2) / (4.0 * kPi * kPi * cell.volume() * n2);
}

Eigen::Matrix2d periodic_green(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                               const Eigen::Vector2d& x) {
  return PeriodicGreen(cell, params, ewald).value(x);
}

Eigen::Matrix2d regular_part(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                             const Eigen::Vector2d& x) {
  return PeriodicGreen(cell, params, ewald).regular_value(x);
}

Eigen::Matrix2d regular_traction_kernel(const LatticeCell& cell, const LameParams& params, const EwaldParams& ewald,
                                        const Eigen::Vector2d& x, const Eigen::Vector2d& nu) {
  return PeriodicGreen(cell, params, ewald).regular_traction_kernel(x, nu);
}

Eigen::Matrix2d pde_residual(const LatticeCell& cell, const LameParams& params, const Eigen::Vector2d& x,
                             const std::vector<double>& steps) {
  const PeriodicGreen green(cell, params, EwaldParams::adaptive(cell, 1e-14));
  auto f = [&](const Eigen::Vector2d& y) { return green.value(y); };
  Eigen::Matrix2d r = lame_operator_fd(params.omega(), f, x, steps);
  r.diagonal().array() += 1.0 / cell.volume();
  return r;
}

}  // namespace lamebie
