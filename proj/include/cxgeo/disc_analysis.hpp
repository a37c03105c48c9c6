#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cxgeo/numerics.hpp"
#include "cxgeo/types.hpp"

namespace cxgeo::disc {

/// A holomorphic map D -> C^m given by its evaluator and, optionally, an
/// analytic derivative.
struct UnitDiscFunction {
  int dimension = 1;
  std::function<CVector(Complex)> evaluate;
  std::function<CVector(Complex)> derivative;

  bool has_derivative() const { return static_cast<bool>(derivative); }
  CVector operator()(Complex zeta) const { return evaluate(zeta); }
};

using ScalarMap = std::function<Complex(Complex)>;

UnitDiscFunction scalar_function(ScalarMap f, ScalarMap df = {});
/// Stacks scalar or vector maps into one map into C^(sum of dimensions).
/// The derivative is present only if every component has one.
UnitDiscFunction stack(const std::vector<UnitDiscFunction>& components);

UnitDiscFunction identity_map();
UnitDiscFunction constant_map(Complex c);
/// sum_k coeffs[k] zeta^k
UnitDiscFunction polynomial_map(std::vector<Complex> coeffs);
/// scale * exp((1 + zeta) / (zeta - 1)); bounded by scale on D, with radial
/// limit 0 at zeta = 1 and boundary values scale * exp(-i cot(theta / 2))
/// elsewhere.
UnitDiscFunction singular_inner_map(double scale);

/// f'(zeta) from the trapezoidal Cauchy integral over |w| = circle_radius.
CVector derivative_cauchy(const UnitDiscFunction& f, Complex zeta,
                          double circle_radius, int n_nodes);
/// Same, on the circle of radius (1 + |zeta|) / 2 with a node count sized
/// to the distance from zeta to that circle.
CVector derivative_cauchy(const UnitDiscFunction& f, Complex zeta);

/// 1 - 2^-j for j = 1..24.
std::vector<double> default_radial_schedule();

struct RadialLimit {
  CVector limit;
  bool cauchy_ok = false;
};

RadialLimit radial_limit(const UnitDiscFunction& f, double theta,
                         const std::vector<double>& r_schedule, double tol);

/// Values of a boundary function at theta_k = 2 pi k / n.
struct BoundarySamples {
  int n = 0;
  std::vector<CVector> values;
  double radius_used = 1.0;
  /// Fraction of nodes whose radial iterates passed the Cauchy test.
  double cauchy_fraction = 1.0;

  int dimension() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  double theta(int k) const;

  /// Samples g(theta_k) directly (radius_used = 1).
  static BoundarySamples from_function(const std::function<CVector(double)>& g, int n);
  static BoundarySamples from_real(const std::function<double(double)>& g, int n);
};

BoundarySamples boundary_samples(const UnitDiscFunction& f, int n,
                                 const std::vector<double>& r_schedule,
                                 double tol);

/// Empirical modulus of continuity tabulated on an increasing delta grid.
struct ModulusProfile {
  std::vector<double> deltas;
  std::vector<double> omegas;

  /// Piecewise-linear in delta, linear to 0 below the first grid point and
  /// constant beyond the last.
  double operator()(double x) const;
};

/// sup over grid pairs with circular distance <= delta of the value gap.
double modulus_of_continuity(const BoundarySamples& g, double delta);
ModulusProfile modulus_profile(const BoundarySamples& g, const std::vector<double>& deltas);

/// Conjugate function by the Fourier multiplier -i sign(k); the Nyquist
/// coefficient is dropped. n must be a power of two and values real.
BoundarySamples conjugate_function(const BoundarySamples& g);

/// Closed-form modulus families.
///
///  holder(a):                 x^a
///  log_reciprocal:            min(1, 1 / log(1/x)), 1 for x >= 1
///  stretched_exponential:     exp(-Cc (log(1/x))^(1-eps)), 1 for x >= 1
struct ModulusFamily {
  enum class Kind { holder, log_reciprocal, stretched_exponential };

  Kind kind = Kind::holder;
  double a = 1.0;
  double Cc = 1.0;
  double epsilon = 0.5;

  static ModulusFamily holder(double a);
  static ModulusFamily log_reciprocal();
  static ModulusFamily stretched_exponential(double Cc, double epsilon);

  double operator()(double x) const;
  /// omega(e^-L), exact for every L (no underflow in x).
  double at_log(double L) const;
};

/// A modulus evaluator, optionally with its log-coordinate form
/// omega(e^-L) used to integrate arbitrarily close to 0.
struct ModulusFunction {
  numerics::RealFunction value;
  numerics::RealFunction value_at_log;

  static ModulusFunction from(const ModulusFamily& family);
  static ModulusFunction from(ModulusProfile profile);
  static ModulusFunction from(numerics::RealFunction f);
};

/// K [ int_0^delta w(x)/x dx + delta int_delta^pi w(x)/x^2 dx ]; +inf when
/// the first integral diverges.
double pz_bound(const ModulusFunction& omega, double delta, double K,
                double tol = 1e-12);

struct LogDiniReport {
  std::vector<numerics::QuadratureResult> per_n;
  bool log_dini = false;
  /// Smallest n whose integral diverged, if any.
  std::optional<int> first_divergent;
};

/// int_0^1 (log(1/x))^n w(x)/x dx for n = 0..n_max.
LogDiniReport log_dini_test(const ModulusFunction& omega, int n_max, double tol = 1e-10);

}  // namespace cxgeo::disc
