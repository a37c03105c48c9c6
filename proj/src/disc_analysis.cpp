#include "cxgeo/disc_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "cxgeo/error.hpp"

namespace cxgeo::disc {

namespace {

constexpr double kPi = std::numbers::pi;

CVector scalar_vector(Complex c) {
  CVector v(1);
  v(0) = c;
  return v;
}

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void fft_in_place(std::vector<Complex>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

// D[m] = max_k |g_{k+m} - g_k| for m = 0..m_max (indices mod n).
std::vector<double> lag_differences(const BoundarySamples& g, int m_max) {
  std::vector<double> d(m_max + 1, 0.0);
  const int n = g.n;
  for (int m = 1; m <= m_max; ++m) {
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
      best = std::max(best, (g.values[(k + m) % n] - g.values[k]).norm());
    }
    d[m] = best;
  }
  return d;
}

int max_lag(const BoundarySamples& g, double delta) {
  const double h = 2.0 * kPi / g.n;
  const int m = static_cast<int>(std::floor(delta / h * (1.0 + 1e-12) + 1e-9));
  return std::min(m, g.n / 2);
}

void check_samples(const BoundarySamples& g) {
  if (g.n < 8 || static_cast<int>(g.values.size()) != g.n) {
    throw Error("boundary samples need n >= 8 values");
  }
}

}  // namespace

UnitDiscFunction scalar_function(ScalarMap f, ScalarMap df) {
  UnitDiscFunction out;
  out.dimension = 1;
  out.evaluate = [f = std::move(f)](Complex z) { return scalar_vector(f(z)); };
  if (df) out.derivative = [df = std::move(df)](Complex z) { return scalar_vector(df(z)); };
  return out;
}

UnitDiscFunction stack(const std::vector<UnitDiscFunction>& components) {
  if (components.empty()) throw Error("stack needs at least one component");
  UnitDiscFunction out;
  out.dimension = 0;
  bool all_derivatives = true;
  for (const auto& c : components) {
    out.dimension += c.dimension;
    all_derivatives = all_derivatives && c.has_derivative();
  }
  const int dim = out.dimension;
  out.evaluate = [components, dim](Complex z) {
    CVector v(dim);
    int offset = 0;
    for (const auto& c : components) {
      v.segment(offset, c.dimension) = c.evaluate(z);
      offset += c.dimension;
    }
    return v;
  };
  if (all_derivatives) {
    out.derivative = [components, dim](Complex z) {
      CVector v(dim);
      int offset = 0;
      for (const auto& c : components) {
        v.segment(offset, c.dimension) = c.derivative(z);
        offset += c.dimension;
      }
      return v;
    };
  }
  return out;
}

UnitDiscFunction identity_map() {
  return scalar_function([](Complex z) { return z; }, [](Complex) { return Complex(1.0); });
}

UnitDiscFunction constant_map(Complex c) {
  return scalar_function([c](Complex) { return c; }, [](Complex) { return Complex(0.0); });
}

UnitDiscFunction polynomial_map(std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  auto value = [coeffs](Complex z) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  auto deriv = [coeffs](Complex z) {
    Complex acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs[k];
    return acc;
  };
  return scalar_function(value, deriv);
}

UnitDiscFunction singular_inner_map(double scale) {
  auto value = [scale](Complex z) { return scale * std::exp((1.0 + z) / (z - 1.0)); };
  auto deriv = [scale](Complex z) {
    const Complex w = z - 1.0;
    return scale * std::exp((1.0 + z) / w) * (-2.0) / (w * w);
  };
  return scalar_function(value, deriv);
}

CVector derivative_cauchy(const UnitDiscFunction& f, Complex zeta,
                          double circle_radius, int n_nodes) {
  if (!(std::abs(zeta) < circle_radius)) throw Error("evaluation circle too small");
  if (circle_radius >= 1.0) throw Error("evaluation circle must lie inside the disc");
  if (n_nodes < 16) throw Error("Cauchy integral needs at least 16 nodes");
  CVector acc = CVector::Zero(f.dimension);
  for (int k = 0; k < n_nodes; ++k) {
    const Complex w = std::polar(circle_radius, 2.0 * kPi * k / n_nodes);
    const Complex gap = w - zeta;
    acc += f.evaluate(w) * (w / (gap * gap));
  }
  return acc / static_cast<double>(n_nodes);
}

CVector derivative_cauchy(const UnitDiscFunction& f, Complex zeta) {
  const double modulus = std::abs(zeta);
  if (!(modulus < 1.0)) throw Error("point outside the unit disc");
  const double radius = 0.5 * (1.0 + modulus);
  const double gap = radius - modulus;
  // Geometric convergence like (|zeta| / radius)^N; 40 / gap nodes is past
  // double precision for both the interior pole and a singularity on |w| = 1.
  const double wanted = std::clamp(40.0 / gap, 64.0, static_cast<double>(1 << 24));
  const int nodes = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::ceil(wanted))));
  return derivative_cauchy(f, zeta, radius, nodes);
}

std::vector<double> default_radial_schedule() {
  std::vector<double> r;
  for (int j = 1; j <= 24; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

RadialLimit radial_limit(const UnitDiscFunction& f, double theta,
                         const std::vector<double>& r_schedule, double tol) {
  if (r_schedule.empty()) throw Error("empty radial schedule");
  for (std::size_t j = 0; j < r_schedule.size(); ++j) {
    if (!(r_schedule[j] >= 0.0 && r_schedule[j] < 1.0) ||
        (j > 0 && !(r_schedule[j] > r_schedule[j - 1]))) {
      throw Error("radial schedule must increase inside [0, 1)");
    }
  }
  const Complex direction = std::polar(1.0, theta);
  std::vector<CVector> iterates;
  iterates.reserve(r_schedule.size());
  for (double r : r_schedule) iterates.push_back(f.evaluate(r * direction));

  RadialLimit out;
  out.limit = iterates.back();
  constexpr std::size_t kFinalSteps = 3;
  if (iterates.size() > kFinalSteps) {
    out.cauchy_ok = true;
    for (std::size_t j = iterates.size() - kFinalSteps; j < iterates.size(); ++j) {
      if (!((iterates[j] - iterates[j - 1]).norm() < tol)) out.cauchy_ok = false;
    }
  }
  return out;
}

double BoundarySamples::theta(int k) const { return 2.0 * kPi * k / n; }

BoundarySamples BoundarySamples::from_function(const std::function<CVector(double)>& g, int n) {
  if (n < 8) throw Error("boundary samples need n >= 8 values");
  BoundarySamples s;
  s.n = n;
  s.values.reserve(n);
  for (int k = 0; k < n; ++k) s.values.push_back(g(2.0 * kPi * k / n));
  return s;
}

BoundarySamples BoundarySamples::from_real(const std::function<double(double)>& g, int n) {
  return from_function([&](double t) { return scalar_vector(Complex(g(t), 0.0)); }, n);
}

BoundarySamples boundary_samples(const UnitDiscFunction& f, int n,
                                 const std::vector<double>& r_schedule, double tol) {
  if (n < 8) throw Error("boundary samples need n >= 8 values");
  BoundarySamples s;
  s.n = n;
  s.values.reserve(n);
  int ok = 0;
  for (int k = 0; k < n; ++k) {
    RadialLimit lim = radial_limit(f, 2.0 * kPi * k / n, r_schedule, tol);
    if (!lim.limit.allFinite()) throw Error("boundary value not finite");
    ok += lim.cauchy_ok ? 1 : 0;
    s.values.push_back(std::move(lim.limit));
  }
  s.radius_used = r_schedule.back();
  s.cauchy_fraction = static_cast<double>(ok) / n;
  return s;
}

double ModulusProfile::operator()(double x) const {
  if (deltas.empty() || x <= 0.0) return 0.0;
  if (x <= deltas.front()) return omegas.front() * x / deltas.front();
  if (x >= deltas.back()) return omegas.back();
  const auto it = std::upper_bound(deltas.begin(), deltas.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - deltas.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - deltas[lo]) / (deltas[hi] - deltas[lo]);
  return omegas[lo] + t * (omegas[hi] - omegas[lo]);
}

double modulus_of_continuity(const BoundarySamples& g, double delta) {
  if (delta < 0.0 || delta > kPi) throw Error("delta out of range");
  check_samples(g);
  const auto d = lag_differences(g, max_lag(g, delta));
  return *std::max_element(d.begin(), d.end());
}

ModulusProfile modulus_profile(const BoundarySamples& g, const std::vector<double>& deltas) {
  check_samples(g);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 0.0 || deltas[i] > kPi) throw Error("delta out of range");
    if (i > 0 && !(deltas[i] > deltas[i - 1])) throw Error("delta grid must increase");
  }
  ModulusProfile out;
  if (deltas.empty()) return out;
  auto d = lag_differences(g, max_lag(g, deltas.back()));
  for (std::size_t m = 1; m < d.size(); ++m) d[m] = std::max(d[m], d[m - 1]);
  out.deltas = deltas;
  out.omegas.reserve(deltas.size());
  for (double delta : deltas) out.omegas.push_back(d[max_lag(g, delta)]);
  return out;
}

BoundarySamples conjugate_function(const BoundarySamples& g) {
  check_samples(g);
  if (!std::has_single_bit(static_cast<unsigned>(g.n))) {
    throw Error("grid size must be a power of two");
  }
  if (g.dimension() != 1) throw Error("conjugate requires real samples");
  double scale = 1.0;
  for (const auto& v : g.values) scale = std::max(scale, std::abs(v(0).real()));
  std::vector<Complex> data(g.n);
  for (int k = 0; k < g.n; ++k) {
    if (std::abs(g.values[k](0).imag()) > 1e-12 * scale) {
      throw Error("conjugate requires real samples");
    }
    data[k] = Complex(g.values[k](0).real(), 0.0);
  }

  fft_in_place(data, FFTW_FORWARD);
  const int n = g.n;
  for (int k = 0; k < n; ++k) {
    if (k == 0 || 2 * k == n) {
      data[k] = 0.0;
    } else if (2 * k < n) {
      data[k] *= Complex(0.0, -1.0);
    } else {
      data[k] *= Complex(0.0, 1.0);
    }
  }
  fft_in_place(data, FFTW_BACKWARD);

  BoundarySamples out;
  out.n = n;
  out.radius_used = g.radius_used;
  out.cauchy_fraction = g.cauchy_fraction;
  out.values.reserve(n);
  for (const Complex& c : data) out.values.push_back(scalar_vector(Complex(c.real() / n, 0.0)));
  return out;
}

ModulusFamily ModulusFamily::holder(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw Error("holder exponent must lie in (0, 1]");
  ModulusFamily m;
  m.kind = Kind::holder;
  m.a = a;
  return m;
}

ModulusFamily ModulusFamily::log_reciprocal() {
  ModulusFamily m;
  m.kind = Kind::log_reciprocal;
  return m;
}

ModulusFamily ModulusFamily::stretched_exponential(double Cc, double epsilon) {
  if (!(Cc > 0.0)) throw Error("stretched exponential needs Cc > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("stretched exponential needs epsilon in (0, 1)");
  ModulusFamily m;
  m.kind = Kind::stretched_exponential;
  m.Cc = Cc;
  m.epsilon = epsilon;
  return m;
}

double ModulusFamily::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind == Kind::holder) return std::pow(x, a);
  return at_log(-std::log(x));
}

double ModulusFamily::at_log(double L) const {
  switch (kind) {
    case Kind::holder:
      return std::exp(-a * L);
    case Kind::log_reciprocal:
      return L <= 1.0 ? 1.0 : 1.0 / L;
    case Kind::stretched_exponential:
      return L <= 0.0 ? 1.0 : std::exp(-Cc * std::pow(L, 1.0 - epsilon));
  }
  return 0.0;
}

ModulusFunction ModulusFunction::from(const ModulusFamily& family) {
  return {[family](double x) { return family(x); },
          [family](double L) { return family.at_log(L); }};
}

ModulusFunction ModulusFunction::from(ModulusProfile profile) {
  return {[p = std::move(profile)](double x) { return p(x); }, {}};
}

ModulusFunction ModulusFunction::from(numerics::RealFunction f) { return {std::move(f), {}}; }

double pz_bound(const ModulusFunction& omega, double delta, double K, double tol) {
  if (!(delta > 0.0 && delta < kPi)) throw Error("delta out of range");
  if (!(K > 0.0)) throw Error("K must be positive");

  numerics::QuadratureResult near;
  if (omega.value_at_log) {
    // w(x)/x dx = w(e^-L) dL
    near = numerics::integrate_log_tail(omega.value_at_log, -std::log(delta), tol);
  } else {
    near = numerics::integrate_endpoint([&](double x) { return omega.value(x) / x; }, 0.0,
                                        delta, tol);
  }
  if (!near.converged) return std::numeric_limits<double>::infinity();
  const auto far = numerics::integrate_endpoint(
      [&](double x) { return omega.value(x) / (x * x); }, delta, kPi, tol);
  return K * (near.value + delta * far.value);
}

LogDiniReport log_dini_test(const ModulusFunction& omega, int n_max, double tol) {
  if (n_max < 0) throw Error("n_max must be nonnegative");
  LogDiniReport report;
  report.log_dini = true;
  for (int n = 0; n <= n_max; ++n) {
    numerics::QuadratureResult q;
    if (omega.value_at_log) {
      q = numerics::integrate_log_tail(
          [&](double L) { return std::pow(L, n) * omega.value_at_log(L); }, 0.0, tol);
    } else {
      q = numerics::integrate_endpoint(
          [&](double x) { return std::pow(std::log(1.0 / x), n) * omega.value(x) / x; }, 0.0,
          1.0, tol);
    }
    if (!q.converged) {
      report.log_dini = false;
      if (!report.first_divergent) report.first_divergent = n;
    }
    report.per_n.push_back(std::move(q));
  }
  return report;
}

}  // namespace cxgeo::disc
