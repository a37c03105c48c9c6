#pragma once

#include <functional>
#include <vector>

namespace cxgeo::numerics {

using RealFunction = std::function<double(double)>;

/// Outcome of a singular-endpoint integration.
///
/// When `converged` is false the integral is judged divergent (or the level
/// budget ran out) and `value` is only the last partial sum.
struct QuadratureResult {
  double value = 0.0;
  bool converged = false;
  int refinement_levels = 0;
  double estimated_error = 0.0;
  /// Partial sums after each refinement level. Nondecreasing for
  /// nonnegative integrands.
  std::vector<double> partial_sums;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
};

struct CircleMinimum {
  double theta = 0.0;
  double value = 0.0;
};

inline constexpr int kDefaultMaxLevels = 64;

/// Integrates a nonnegative f over (a, b] where f may blow up as x -> a+.
///
/// The interval is mapped to u = log((b - a) / (x - a)) and cut into panels
/// [2^(k-4), 2^(k-3)] (k >= 1, plus [0, 1/8]); each panel is a composite
/// Gauss-Legendre sum. Every panel is one refinement level, i.e. one
/// halving of log(x - a) toward the singular end.
///
/// Verdicts, with Q_k the contribution of level k and rho_k = Q_k / Q_{k-1}:
///  - converged when two successive levels change the value (including the
///    geometric tail estimate Q_k rho_k / (1 - rho_k)) by less than
///    tol * max(1, |value|), or when the tail ratios are geometric
///    (rho < kDivergenceRatio for the last window) and the
///    tail-extrapolated value is stable to the same tolerance;
///  - diverged when the last kDivergenceWindow ratios are all
///    >= kDivergenceRatio (a tail no better than u^-1.05).
///
/// Evaluation in x stops where x - a is no longer representable relative
/// to a; integrands that decay only logarithmically can be passed in
/// log coordinates through integrate_log_tail instead.
QuadratureResult integrate_endpoint(const RealFunction& f, double a, double b,
                                    double tol = 1e-10,
                                    int max_levels = kDefaultMaxLevels);

/// Integrates h(L) over [log_start, inf) with the same level structure and
/// verdicts as integrate_endpoint. For an integrand f on (a, b] this is
/// h(L) = f(a + e^-L) e^-L with log_start = -log(b - a); callers that know
/// h analytically can reach arbitrarily deep cutoffs.
QuadratureResult integrate_log_tail(const RealFunction& h, double log_start,
                                    double tol = 1e-10,
                                    int max_levels = kDefaultMaxLevels);

inline constexpr int kDivergenceWindow = 8;
extern const double kDivergenceRatio;

/// Bisection for g(x) = target on [lo, hi]; g monotone (either direction).
RootResult solve_monotone(const RealFunction& g, double lo, double hi,
                          double target, double tol);

/// Minimizes a finite objective on [lo, hi] by golden-section search.
CircleMinimum golden_section(const RealFunction& h, double lo, double hi,
                             double tol);

/// Coarse scan of a 2pi-periodic objective at 2 pi j / coarse_n followed by
/// golden-section refinement in the two neighbouring cells. Ties go to the
/// smallest theta; the refined point replaces the grid point only when it
/// is strictly better. The returned theta lies in [0, 2pi).
CircleMinimum minimize_on_circle(const RealFunction& h, int coarse_n,
                                 double refine_tol);

}  // namespace cxgeo::numerics
