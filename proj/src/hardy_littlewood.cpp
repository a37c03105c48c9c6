#include "cxgeo/hardy_littlewood.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cxgeo/error.hpp"

namespace cxgeo::hl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMonotoneGrid = 256;

bool scan_nonincreasing(const Majorant& phi) {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kMonotoneGrid; ++i) {
    const double exponent = -12.0 + 12.0 * i / (kMonotoneGrid - 1);
    const double x = phi.r0 * std::pow(10.0, exponent) * (1.0 - 1e-9);
    const double v = phi.evaluate(x);
    if (std::isnan(v) || v < 0.0) return false;
    if (v > prev * (1.0 + 1e-12)) return false;
    prev = v;
  }
  return true;
}

}  // namespace

double Majorant::operator()(double x) const {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  return evaluate(x);
}

Majorant make_majorant(double r0, RealFunction phi, RealFunction scaled_at_log) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error("majorant r0 must lie in (0, 1)");
  Majorant m;
  m.r0 = r0;
  m.evaluate = std::move(phi);
  m.scaled_at_log = std::move(scaled_at_log);
  m.nonincreasing = scan_nonincreasing(m);
  return m;
}

Majorant constant_majorant(double value, double r0) {
  if (!(value >= 0.0)) throw Error("majorant must be nonnegative");
  return make_majorant(
      r0, [value](double) { return value; },
      [value](double L) { return value * std::exp(-L); });
}

Majorant power_majorant(double coeff, double exponent, double r0) {
  if (!(coeff >= 0.0)) throw Error("majorant must be nonnegative");
  return make_majorant(
      r0, [coeff, exponent](double x) { return coeff * std::pow(x, exponent); },
      [coeff, exponent](double L) { return coeff * std::exp(-(exponent + 1.0) * L); });
}

DerivMajorantFamily DerivMajorantFamily::make(double K1, double K2, double alpha, double r0) {
  if (!(K1 > 0.0) || !(K2 > 0.0)) throw Error("K1 and K2 must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be positive");
  if (!(r0 > 0.0 && r0 < std::min(1.0, K2))) throw Error("r0 must lie in (0, min(1, K2))");
  return {K1, K2, alpha, r0};
}

double DerivMajorantFamily::operator()(double x) const {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  return (K1 / x) * std::pow(std::log(K2 / x), -1.0 / alpha);
}

Majorant DerivMajorantFamily::majorant() const {
  const DerivMajorantFamily self = *this;
  const double log_k2 = std::log(K2);
  return make_majorant(
      r0, [self](double x) { return self(x); },
      [self, log_k2](double L) { return self.K1 * std::pow(log_k2 + L, -1.0 / self.alpha); });
}

MajorantCheck verify_majorant(const disc::UnitDiscFunction& f, const Majorant& phi,
                              const std::vector<double>& r_grid,
                              const std::vector<double>& theta_grid) {
  if (r_grid.empty() || theta_grid.empty()) throw Error("empty verification grid");
  MajorantCheck check;
  check.max_violation = -std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    if (!(r > 1.0 - phi.r0 && r < 1.0)) throw Error("radius outside majorant range");
    const double bound = phi(1.0 - r);
    for (double theta : theta_grid) {
      const Complex zeta = std::polar(r, theta);
      const CVector d = f.has_derivative() ? f.derivative(zeta) : disc::derivative_cauchy(f, zeta);
      const double violation = d.norm() - bound;
      if (violation > check.max_violation) {
        check = {violation, r, theta};
      }
    }
  }
  return check;
}

QuadratureResult phi_log_l1(const Majorant& phi, int n, double tol) {
  if (n < 0) throw Error("n must be nonnegative");
  if (phi.scaled_at_log) {
    return numerics::integrate_log_tail(
        [&](double L) { return std::pow(L, n) * phi.scaled_at_log(L); }, -std::log(phi.r0), tol);
  }
  return numerics::integrate_endpoint(
      [&](double x) { return std::pow(std::log(1.0 / x), n) * phi(x); }, 0.0, phi.r0, tol);
}

double omega_bound(const Majorant& phi, double delta, double tol) {
  if (!(delta >= 0.0 && delta < phi.r0)) throw Error("delta must lie in [0, r0)");
  if (delta == 0.0) return 0.0;
  const QuadratureResult q =
      phi.scaled_at_log
          ? numerics::integrate_log_tail(phi.scaled_at_log, -std::log(delta), tol)
          : numerics::integrate_endpoint([&](double x) { return phi(x); }, 0.0, delta, tol);
  if (!q.converged) return std::numeric_limits<double>::infinity();
  return 3.0 * q.value;
}

double varpi(const Majorant& phi, double boundary_sup, double delta) {
  if (!(boundary_sup >= 0.0)) throw Error("boundary sup must be nonnegative");
  if (!(delta >= 0.0 && delta <= kPi)) throw Error("delta out of range");
  if (delta < phi.r0) return omega_bound(phi, delta);
  return 2.0 * boundary_sup;
}

double majorant_from_modulus(const disc::ModulusFunction& omega, double r, double tol) {
  if (!(r > 0.25 && r < 1.0)) throw Error("r must lie in (1/4, 1)");
  const double gap = 1.0 - r;
  auto integrand = [&](double tau) {
    const double s = std::sin(0.5 * tau);
    return omega.value(tau) / (gap * gap + 4.0 * r * s * s);
  };
  const QuadratureResult q = numerics::integrate_endpoint(integrand, 0.0, kPi, tol);
  return q.value / kPi;
}

double kernel_bound_margin(double r, double tau) {
  const double lhs = r * r - 2.0 * r * std::cos(tau) + 1.0;
  const double t = tau / kPi;
  return lhs - ((1.0 - r) * (1.0 - r) + t * t);
}

bool kernel_bound_check(double r, double tau, double slack) {
  if (!(r > 0.25 && r < 1.0) || !(tau >= 0.0 && tau <= kPi)) {
    throw Error("outside validity region");
  }
  return kernel_bound_margin(r, tau) >= -slack;
}

ConverseRatio converse_ratio(const disc::ModulusFunction& omega, int n, double delta, double R) {
  if (!(delta > 0.0 && delta < R && R < 0.75)) throw Error("need 0 < delta < R < 3/4");
  if (n < 0) throw Error("n must be nonnegative");
  constexpr double tol = 1e-9;
  auto inner = [&](double x) {
    const auto q = numerics::integrate_endpoint(
        [&](double y) { return omega.value(kPi * x * y) / (1.0 + y * y); }, 0.0, 1.0 / x, tol);
    return q.value;
  };
  auto kernel_integrand = [&](double x) {
    const double L = std::log(1.0 / x);
    return std::pow(L, n) / x * inner(x);
  };
  auto modulus_integrand = [&](double x) {
    const double L = std::log(1.0 / x);
    return std::pow(L, n) * omega.value(x) / x * (1.0 + L);
  };
  ConverseRatio out;
  out.kernel_side = numerics::integrate_endpoint(kernel_integrand, delta, R, tol).value;
  out.modulus_side = numerics::integrate_endpoint(modulus_integrand, delta, R, tol).value;
  out.ratio = out.modulus_side > 0.0 ? out.kernel_side / out.modulus_side
                                     : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace cxgeo::hl
