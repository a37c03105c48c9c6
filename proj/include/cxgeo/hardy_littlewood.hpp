#pragma once

#include <vector>

#include "cxgeo/disc_analysis.hpp"
#include "cxgeo/numerics.hpp"

namespace cxgeo::hl {

using numerics::QuadratureResult;
using numerics::RealFunction;

/// A radial derivative bound Phi : (0, r0) -> [0, inf], Phi(0) = +inf.
struct Majorant {
  double r0 = 0.5;
  RealFunction evaluate;
  /// Optional x * Phi(x) at x = e^-L, for integrals that must reach far
  /// below the smallest double.
  RealFunction scaled_at_log;
  /// Result of the monotonicity scan done at construction.
  bool nonincreasing = false;

  double operator()(double x) const;
};

/// Builds a majorant and checks it is nonincreasing on a 256-point
/// logarithmic grid in (r0 * 1e-12, r0). A failed check is recorded, not
/// thrown.
Majorant make_majorant(double r0, RealFunction phi, RealFunction scaled_at_log = {});
Majorant constant_majorant(double value, double r0);
/// Phi(x) = coeff * x^exponent.
Majorant power_majorant(double coeff, double exponent, double r0);

/// Phi(x) = (K1 / x) (log(K2 / x))^(-1/alpha) on (0, r0), r0 < min(1, K2).
struct DerivMajorantFamily {
  double K1 = 1.0;
  double K2 = 1.0;
  double alpha = 0.5;
  double r0 = 0.5;

  static DerivMajorantFamily make(double K1, double K2, double alpha, double r0);
  double operator()(double x) const;
  Majorant majorant() const;
};

struct MajorantCheck {
  /// max of |f'(r e^{i theta})| - Phi(1 - r); <= 0 means the bound holds on
  /// the grid.
  double max_violation = 0.0;
  double worst_r = 0.0;
  double worst_theta = 0.0;
};

MajorantCheck verify_majorant(const disc::UnitDiscFunction& f, const Majorant& phi,
                              const std::vector<double>& r_grid,
                              const std::vector<double>& theta_grid);

/// int_0^r0 (log(1/x))^n Phi(x) dx with the divergence verdict.
QuadratureResult phi_log_l1(const Majorant& phi, int n, double tol = 1e-10);

/// 3 int_0^delta Phi, the modulus bound for the boundary values; +inf when
/// the integral diverges.
double omega_bound(const Majorant& phi, double delta, double tol = 1e-12);

/// The piecewise majorant of the boundary modulus: 3 int_0^delta Phi below
/// r0, 2 sup|f| from r0 on.
double varpi(const Majorant& phi, double boundary_sup, double delta);

/// (1/pi) int_0^pi w(tau) / (r^2 - 2 r cos tau + 1) dtau for r in (1/4, 1).
double majorant_from_modulus(const disc::ModulusFunction& omega, double r,
                             double tol = 1e-12);

/// (r^2 - 2 r cos tau + 1) - ((1 - r)^2 + (tau / pi)^2).
double kernel_bound_margin(double r, double tau);
/// Whether r^2 - 2 r cos tau + 1 >= (1 - r)^2 + (tau / pi)^2 up to `slack`.
/// Throws outside r in (1/4, 1), tau in [0, pi].
bool kernel_bound_check(double r, double tau, double slack = 1e-14);

/// The two sides of the converse estimate over [delta, R]: the kernel
/// integral after the substitution y = tau / (pi x), and
/// int (log 1/x)^n w(x)/x (1 + log 1/x) dx. The ratio is the empirical
/// value of the unnamed constant relating them.
struct ConverseRatio {
  double kernel_side = 0.0;
  double modulus_side = 0.0;
  double ratio = 0.0;
};

ConverseRatio converse_ratio(const disc::ModulusFunction& omega, int n, double delta,
                             double R);

}  // namespace cxgeo::hl
