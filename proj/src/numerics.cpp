#include "cxgeo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "cxgeo/error.hpp"

namespace cxgeo::numerics {

const double kDivergenceRatio = std::exp2(-0.05);

namespace {

constexpr int kSubPanels = 4;
constexpr int kConsecutiveCauchy = 2;
constexpr int kMinLevels = 10;

using Gauss = boost::math::quadrature::gauss<double, 20>;

double level_lower(int k) { return k == 0 ? 0.0 : std::ldexp(1.0, k - 4); }
double level_upper(int k) { return std::ldexp(1.0, k - 3); }

double integrate_panel(const RealFunction& h, double lo, double hi) {
  const double width = (hi - lo) / kSubPanels;
  double sum = 0.0;
  for (int j = 0; j < kSubPanels; ++j) {
    const double a = lo + j * width;
    const double b = (j + 1 == kSubPanels) ? hi : a + width;
    sum += Gauss::integrate(
        [&](double u) {
          const double v = h(u);
          if (!std::isfinite(v)) throw Error("integrand not finite");
          return v;
        },
        a, b);
  }
  return sum;
}

// Q_k / Q_{k-1} with the 0/0 case read as "no tail left".
double tail_ratio(double q, double q_prev) {
  q = std::abs(q);
  q_prev = std::abs(q_prev);
  if (q_prev == 0.0) return q == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return q / q_prev;
}

double geometric_tail(double q, double ratio) {
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return std::abs(q) * ratio / (1.0 - ratio);
}

// Core level loop on u in [0, u_max). h is expressed in u.
QuadratureResult integrate_levels(const RealFunction& h, double u_max,
                                  double tol, int max_levels) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  if (max_levels < 2) throw Error("max_levels must be at least 2");

  const double eff_tol = std::max(tol, 64 * std::numeric_limits<double>::epsilon());
  int available = 0;
  while (available < max_levels && level_upper(available) <= u_max) ++available;
  if (available == 0) {
    QuadratureResult r;
    r.value = integrate_panel(h, 0.0, u_max);
    r.partial_sums = {r.value};
    r.refinement_levels = 1;
    return r;
  }
  const int min_levels = std::min(kMinLevels, available);

  QuadratureResult r;
  std::vector<double> panels;
  std::vector<double> ratios;
  double sum = 0.0;
  double prev_extrapolated = std::numeric_limits<double>::quiet_NaN();
  int cauchy_run = 0;

  for (int k = 0; k < available; ++k) {
    const double q = integrate_panel(h, level_lower(k), level_upper(k));
    panels.push_back(q);
    sum += q;
    r.partial_sums.push_back(sum);
    r.refinement_levels = k + 1;
    r.value = sum;
    if (k == 0) continue;

    const double ratio = tail_ratio(q, panels[k - 1]);
    ratios.push_back(ratio);
    const double tail = (q == 0.0) ? 0.0 : geometric_tail(q, ratio);
    const double scale = std::max(1.0, std::abs(sum));

    if (std::abs(q) <= eff_tol * scale && tail <= eff_tol * scale) {
      ++cauchy_run;
    } else {
      cauchy_run = 0;
    }
    if (cauchy_run >= kConsecutiveCauchy && k + 1 >= min_levels) {
      r.value = sum + (std::isfinite(tail) ? tail : 0.0);
      r.converged = true;
      r.estimated_error = std::abs(q) + tail;
      return r;
    }

    if (static_cast<int>(ratios.size()) >= kDivergenceWindow) {
      const auto window_begin = ratios.end() - kDivergenceWindow;
      const bool all_slow = std::all_of(window_begin, ratios.end(),
                                        [](double x) { return x >= kDivergenceRatio; });
      const bool all_geometric = std::all_of(window_begin, ratios.end(),
                                             [](double x) { return x < kDivergenceRatio; });
      // A rising bump also has large ratios; a divergent tail keeps them.
      const bool not_falling = ratios.back() >= 0.95 * *window_begin;
      if (all_slow && not_falling && k + 1 >= min_levels) {
        r.converged = false;
        r.estimated_error = std::abs(q);
        return r;
      }
      if (all_geometric) {
        const double extrapolated = sum + tail;
        if (std::isfinite(prev_extrapolated) &&
            std::abs(extrapolated - prev_extrapolated) <=
                eff_tol * std::max(1.0, std::abs(extrapolated)) &&
            k + 1 >= min_levels) {
          r.value = extrapolated;
          r.converged = true;
          r.estimated_error = std::abs(extrapolated - prev_extrapolated);
          return r;
        }
        prev_extrapolated = extrapolated;
      } else {
        prev_extrapolated = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  r.converged = false;
  r.estimated_error = panels.empty() ? 0.0 : std::abs(panels.back());
  if (!std::isfinite(u_max)) return r;

  // Out of representable levels: add the last partial panel and accept when
  // the integrand at the cutoff leaves a negligible tail.
  if (level_lower(available) < u_max) {
    const double q = integrate_panel(h, level_lower(available), u_max);
    sum += q;
    r.partial_sums.push_back(sum);
    r.refinement_levels = available + 1;
    r.value = sum;
  }
  const double edge = std::abs(h(u_max)) * std::max(1.0, u_max);
  if (edge <= eff_tol * std::max(1.0, std::abs(sum))) {
    r.converged = true;
    r.estimated_error = edge;
  }
  return r;
}

}  // namespace

QuadratureResult integrate_endpoint(const RealFunction& f, double a, double b,
                                    double tol, int max_levels) {
  if (!(a < b)) throw Error("empty interval");
  const double width = b - a;
  // Deepest offset x - a that still resolves against a in double precision.
  const double min_offset =
      std::max(4 * std::numeric_limits<double>::epsilon() * std::abs(a), 1e-300);
  const double u_max = std::log(width / min_offset);
  auto h = [&](double u) {
    const double offset = width * std::exp(-u);
    return f(a + offset) * offset;
  };
  return integrate_levels(h, u_max, tol, max_levels);
}

QuadratureResult integrate_log_tail(const RealFunction& h, double log_start,
                                    double tol, int max_levels) {
  auto shifted = [&](double u) { return h(log_start + u); };
  return integrate_levels(shifted, std::numeric_limits<double>::infinity(), tol,
                          max_levels);
}

RootResult solve_monotone(const RealFunction& g, double lo, double hi,
                          double target, double tol) {
  if (!(lo < hi)) throw Error("empty interval");
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  double f_lo = g(lo) - target;
  double f_hi = g(hi) - target;
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) throw Error("objective not finite");
  RootResult r;
  if (f_lo == 0.0) return {lo, 0.0, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0.0, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw Error("target not bracketed");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const double f_mid = g(mid) - target;
    if (!std::isfinite(f_mid)) throw Error("objective not finite");
    ++r.iterations;
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  r.root = 0.5 * (lo + hi);
  r.residual = g(r.root) - target;
  r.bracket_width = hi - lo;
  return r;
}

CircleMinimum golden_section(const RealFunction& h, double lo, double hi,
                             double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = h(c);
  double fd = h(d);
  for (int it = 0; it < 300 && (hi - lo) > tol; ++it) {
    if (!std::isfinite(fc) || !std::isfinite(fd)) throw Error("objective not finite");
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = h(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = h(d);
    }
  }
  return fc <= fd ? CircleMinimum{c, fc} : CircleMinimum{d, fd};
}

CircleMinimum minimize_on_circle(const RealFunction& h, int coarse_n,
                                 double refine_tol) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (coarse_n < 8) throw Error("coarse grid needs at least 8 points");
  const double step = two_pi / coarse_n;

  CircleMinimum best{0.0, std::numeric_limits<double>::infinity()};
  for (int j = 0; j < coarse_n; ++j) {
    const double theta = j * step;
    const double v = h(theta);
    if (!std::isfinite(v)) throw Error("objective not finite");
    if (v < best.value) best = {theta, v};
  }

  const CircleMinimum refined =
      golden_section(h, best.theta - step, best.theta + step, refine_tol);
  if (refined.value < best.value) {
    double theta = std::fmod(refined.theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta >= two_pi) theta = 0.0;
    best = {theta, refined.value};
  }
  return best;
}

}  // namespace cxgeo::numerics
