#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cxgeo/disc_analysis.hpp"
#include "cxgeo/error.hpp"

using namespace cxgeo;
using namespace cxgeo::disc;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) { return std::tgamma(n + 1.0); }

// O(n^2) modulus of continuity straight from the definition.
double brute_modulus(const BoundarySamples& g, double delta) {
  double best = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const int lag = std::abs(i - j);
      const double dist = 2.0 * kPi * std::min(lag, g.n - lag) / g.n;
      if (dist <= delta * (1.0 + 1e-12)) best = std::max(best, (g.values[i] - g.values[j]).norm());
    }
  }
  return best;
}

}  // namespace

TEST_CASE("maps and derivatives") {
  const auto p = polynomial_map({Complex(1.0), Complex(0.0, 2.0), Complex(-3.0)});
  const Complex z(0.3, -0.2);
  CHECK(std::abs(p(z)(0) - (1.0 + Complex(0, 2) * z - 3.0 * z * z)) < 1e-15);
  CHECK(std::abs(p.derivative(z)(0) - (Complex(0, 2) - 6.0 * z)) < 1e-15);

  const auto s = stack({identity_map(), constant_map(Complex(0.25, 0.0))});
  CHECK(s.dimension == 2);
  CHECK(s.has_derivative());
  CHECK(std::abs(s.derivative(z)(1)) == 0.0);

  const auto no_deriv = stack({identity_map(), scalar_function([](Complex w) { return w * w; })});
  CHECK_FALSE(no_deriv.has_derivative());
}

TEST_CASE("Cauchy derivative agrees with the analytic derivative") {
  const auto f = singular_inner_map(0.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const Complex z = std::polar(0.95 * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
    const Complex exact = f.derivative(z)(0);
    const Complex approx = derivative_cauchy(f, z)(0);
    CHECK(std::abs(approx - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
  }
  CHECK_THROWS_WITH_AS(derivative_cauchy(f, Complex(0.5), 0.4, 64), "evaluation circle too small",
                       Error);
  CHECK_THROWS_WITH_AS(derivative_cauchy(f, Complex(0.5), 1.0, 64),
                       "evaluation circle must lie inside the disc", Error);
  CHECK_THROWS_WITH_AS(derivative_cauchy(f, Complex(0.5), 0.7, 8),
                       "Cauchy integral needs at least 16 nodes", Error);
}

TEST_CASE("radial limits") {
  const auto schedule = default_radial_schedule();
  REQUIRE(schedule.size() == 24);
  const auto id = radial_limit(identity_map(), 1.0, schedule, 1e-6);
  CHECK(std::abs(id.limit(0) - std::polar(1.0, 1.0)) < 1e-7);
  CHECK(id.cauchy_ok);

  const auto at_one = radial_limit(singular_inner_map(0.5), 0.0, schedule, 1e-6);
  CHECK(std::abs(at_one.limit(0)) < 1e-12);

  // Boundary values 1/2 exp(-i cot(theta / 2)).
  for (double theta : {0.5, 1.0, 2.0, 4.0}) {
    const auto lim = radial_limit(singular_inner_map(0.5), theta, schedule, 1e-6);
    const Complex expected = 0.5 * std::exp(Complex(0.0, -1.0 / std::tan(theta / 2)));
    CHECK(std::abs(lim.limit(0) - expected) < 1e-6);
  }
}

TEST_CASE("modulus of continuity of the identity") {
  const auto g = boundary_samples(identity_map(), 1024, default_radial_schedule(), 1e-6);
  const double h = 2.0 * kPi / 1024;
  for (int m : {1, 3, 17, 200, 512}) {
    CHECK(modulus_of_continuity(g, m * h) == Approx(2.0 * std::sin(m * h / 2)).epsilon(1e-6));
  }
  CHECK_THROWS_WITH_AS(modulus_of_continuity(g, -1.0), "delta out of range", Error);
}

TEST_CASE("modulus of continuity matches the brute-force definition") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> data(96);
    for (auto& x : data) x = normal(rng);
    const auto g = BoundarySamples::from_function(
        [&](double t) {
          CVector v(1);
          v(0) = data[static_cast<std::size_t>(std::lround(t / (2.0 * kPi) * 96)) % 96];
          return v;
        },
        96);
    double prev = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double delta = u(rng);
      CHECK(modulus_of_continuity(g, delta) == Approx(brute_modulus(g, delta)).epsilon(1e-15));
    }
    for (double delta = 0.0; delta < kPi; delta += 0.05) {
      const double w = modulus_of_continuity(g, delta);
      CHECK(w >= prev);
      prev = w;
    }
  }
}

TEST_CASE("modulus profile interpolation") {
  ModulusProfile p{{0.1, 0.2}, {1.0, 3.0}};
  CHECK(p(0.05) == Approx(0.5));
  CHECK(p(0.15) == Approx(2.0));
  CHECK(p(1.0) == Approx(3.0));
}

TEST_CASE("conjugate function by Fourier multiplier") {
  const auto c = conjugate_function(BoundarySamples::from_real([](double t) { return std::cos(3 * t); }, 256));
  const auto s = conjugate_function(BoundarySamples::from_real([](double t) { return std::sin(2 * t); }, 256));
  for (int k = 0; k < 256; ++k) {
    const double t = 2.0 * kPi * k / 256;
    CHECK(std::abs(c.values[k](0).real() - std::sin(3 * t)) < 1e-12);
    CHECK(std::abs(s.values[k](0).real() + std::cos(2 * t)) < 1e-12);
  }
  CHECK_THROWS_WITH_AS(conjugate_function(BoundarySamples::from_real([](double) { return 1.0; }, 100)),
                       "grid size must be a power of two", Error);
  const auto complex_samples = BoundarySamples::from_function(
      [](double t) {
        CVector v(1);
        v(0) = std::polar(1.0, t);
        return v;
      },
      64);
  CHECK_THROWS_WITH_AS(conjugate_function(complex_samples), "conjugate requires real samples", Error);
}

TEST_CASE("conjugating twice negates mean-zero trigonometric polynomials") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> a(20), b(20);
  for (auto& x : a) x = normal(rng);
  for (auto& x : b) x = normal(rng);
  auto g = [&](double t) {
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += a[k - 1] * std::cos(k * t) + b[k - 1] * std::sin(k * t);
    return s;
  };
  const auto samples = BoundarySamples::from_real(g, 128);
  const auto twice = conjugate_function(conjugate_function(samples));
  for (int k = 0; k < 128; ++k) {
    CHECK(std::abs(twice.values[k](0).real() + samples.values[k](0).real()) < 1e-12);
  }
}

TEST_CASE("modulus families") {
  const auto h = ModulusFamily::holder(0.5);
  CHECK(h(0.25) == Approx(0.5));
  const auto l = ModulusFamily::log_reciprocal();
  CHECK(l(std::exp(-4.0)) == Approx(0.25));
  CHECK(l(0.9) == 1.0);
  CHECK(l(2.0) == 1.0);
  const auto s = ModulusFamily::stretched_exponential(1.0, 0.5);
  CHECK(s(std::exp(-9.0)) == Approx(std::exp(-3.0)));
  for (double L : {0.5, 3.0, 40.0}) {
    CHECK(s.at_log(L) == Approx(s(std::exp(-L))).epsilon(1e-12));
    CHECK(h.at_log(L) == Approx(h(std::exp(-L))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ModulusFamily::holder(1.5), Error);
  CHECK_THROWS_AS(ModulusFamily::stretched_exponential(1.0, 1.0), Error);
}

TEST_CASE("Privalov-Zygmund bound for the identity modulus") {
  const auto w = ModulusFunction::from(ModulusFamily::holder(1.0));
  for (double delta : {0.01, 0.1, 1.0}) {
    CHECK(pz_bound(w, delta, 1.0) == Approx(delta * (1.0 + std::log(kPi / delta))).epsilon(1e-10));
  }
  CHECK(pz_bound(w, 0.1, 2.5) == Approx(2.5 * 0.1 * (1.0 + std::log(kPi / 0.1))).epsilon(1e-10));
  CHECK(std::isinf(pz_bound(ModulusFunction::from(ModulusFamily::log_reciprocal()), 0.1, 1.0)));
  // Without the log form the x-coordinate quadrature is used.
  const auto plain = ModulusFunction::from([](double x) { return x; });
  CHECK(pz_bound(plain, 0.1, 1.0) == Approx(0.1 * (1.0 + std::log(kPi / 0.1))).epsilon(1e-9));
}

TEST_CASE("log-Dini integrals against closed forms") {
  // int_0^1 (log 1/x)^n dx = n!
  const auto lin = log_dini_test(ModulusFunction::from(ModulusFamily::holder(1.0)), 6);
  CHECK(lin.log_dini);
  for (int n = 0; n <= 6; ++n) CHECK(lin.per_n[n].value == Approx(factorial(n)).epsilon(1e-9));

  // int_0^inf L^n exp(-sqrt L) dL = 2 (2n + 1)!; the sqrt kink at L = 0
  // limits the first panel to about 1e-8.
  const auto st = log_dini_test(ModulusFunction::from(ModulusFamily::stretched_exponential(1.0, 0.5)), 6);
  CHECK(st.log_dini);
  for (int n = 0; n <= 6; ++n) CHECK(st.per_n[n].value == Approx(2.0 * factorial(2 * n + 1)).epsilon(1e-7));

  const auto lr = log_dini_test(ModulusFunction::from(ModulusFamily::log_reciprocal()), 3);
  CHECK_FALSE(lr.log_dini);
  REQUIRE(lr.first_divergent.has_value());
  CHECK(*lr.first_divergent == 0);
}
