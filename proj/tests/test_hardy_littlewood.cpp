#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cxgeo/error.hpp"
#include "cxgeo/hardy_littlewood.hpp"

using namespace cxgeo;
using namespace cxgeo::hl;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// int_{L0}^inf (1 + L)^(-p) dL for K2 = e.
double tail_n0(double L0, double p) { return std::pow(1.0 + L0, 1.0 - p) / (p - 1.0); }

}  // namespace

TEST_CASE("constant majorant gives the 3 delta bound") {
  const auto phi = constant_majorant(1.0, 0.5);
  CHECK(phi.nonincreasing);
  CHECK(omega_bound(phi, 0.1) == Approx(0.3).epsilon(1e-12));
  CHECK(omega_bound(phi, 0.0) == 0.0);
  CHECK_THROWS_WITH_AS(omega_bound(phi, 0.6), "delta must lie in [0, r0)", Error);
}

TEST_CASE("derivative majorant family: modulus bound in closed form") {
  // 3 int_0^delta (1/x) log(e/x)^(-2) dx = 3 / log(e / delta)
  const auto phi = DerivMajorantFamily::make(1.0, std::exp(1.0), 0.5, 0.5).majorant();
  // x Phi(x) = log(e/x)^(-2) makes Phi increase once log(e/x) < 2.
  CHECK_FALSE(phi.nonincreasing);
  CHECK(DerivMajorantFamily::make(1.0, std::exp(1.0), 0.5, 0.3).majorant().nonincreasing);
  for (double delta : {1e-6, 1e-3, 0.1, 0.4}) {
    CHECK(omega_bound(phi, delta) == Approx(3.0 / std::log(std::exp(1.0) / delta)).epsilon(1e-9));
  }
  CHECK(omega_bound(phi, 0.1) == Approx(0.90837932).epsilon(1e-8));
  // alpha = 1 is not integrable at 0.
  const auto flat = DerivMajorantFamily::make(1.0, std::exp(1.0), 1.0, 0.5).majorant();
  CHECK(std::isinf(omega_bound(flat, 0.1)));
}

TEST_CASE("log-weighted integrals converge exactly when n < 1/alpha - 1") {
  for (double alpha : {0.25, 0.4, 0.5, 0.75, 0.9, 1.0, 1.5}) {
    const auto phi = DerivMajorantFamily::make(1.0, std::exp(1.0), alpha, 0.5).majorant();
    for (int n = 0; n <= 4; ++n) {
      const double threshold = 1.0 / alpha - 1.0;
      // Exponents within 0.05 of the threshold are too slow to call.
      if (std::abs(n - threshold) < 0.06) continue;
      const auto q = phi_log_l1(phi, n);
      CAPTURE(alpha);
      CAPTURE(n);
      CHECK(q.converged == (n < threshold));
    }
  }
}

TEST_CASE("log-weighted integrals against antiderivatives") {
  const double L0 = std::log(2.0);
  const auto half = DerivMajorantFamily::make(1.0, std::exp(1.0), 0.5, 0.5).majorant();
  CHECK(phi_log_l1(half, 0).value == Approx(1.0 / (1.0 + std::log(2.0))).epsilon(1e-9));

  const auto quarter = DerivMajorantFamily::make(1.0, std::exp(1.0), 0.25, 0.5).majorant();
  CHECK(phi_log_l1(quarter, 0).value == Approx(tail_n0(L0, 4.0)).epsilon(1e-9));
  const double n1 = std::pow(1.0 + L0, -2.0) / 2.0 - std::pow(1.0 + L0, -3.0) / 3.0;
  CHECK(phi_log_l1(quarter, 1).value == Approx(n1).epsilon(1e-9));

  // Without the log form the x-coordinate quadrature agrees.
  const DerivMajorantFamily fam = DerivMajorantFamily::make(1.0, std::exp(1.0), 0.25, 0.5);
  const auto plain = make_majorant(0.5, [fam](double x) { return fam(x); });
  CHECK(phi_log_l1(plain, 0).value == Approx(tail_n0(L0, 4.0)).epsilon(1e-7));
}

TEST_CASE("majorant construction checks") {
  CHECK_FALSE(power_majorant(1.0, 1.0, 0.5).nonincreasing);
  CHECK(power_majorant(1.0, -0.5, 0.5).nonincreasing);
  CHECK_THROWS_WITH_AS(make_majorant(1.5, [](double) { return 1.0; }), "majorant r0 must lie in (0, 1)",
                       Error);
  CHECK_THROWS_AS(DerivMajorantFamily::make(1.0, 0.4, 0.5, 0.5), Error);
  const auto phi = constant_majorant(2.0, 0.5);
  CHECK(std::isinf(phi(0.0)));
}

TEST_CASE("pointwise majorant verification") {
  std::vector<double> radii = {0.6, 0.8, 0.95, 0.99};
  std::vector<double> angles;
  for (int k = 0; k < 32; ++k) angles.push_back(2.0 * kPi * k / 32);
  const auto square = disc::polynomial_map({0.0, 0.0, 1.0});
  CHECK(verify_majorant(square, constant_majorant(2.0, 0.5), radii, angles).max_violation <= 0.0);
  const auto check = verify_majorant(square, constant_majorant(1.5, 0.5), radii, angles);
  CHECK(check.max_violation == Approx(2.0 * 0.99 - 1.5).epsilon(1e-12));
  CHECK(check.worst_r == 0.99);
  // The Cauchy fallback is used when no derivative is given.
  const auto cube = disc::scalar_function([](Complex z) { return z * z * z; });
  CHECK(verify_majorant(cube, constant_majorant(3.0, 0.5), radii, angles).max_violation <= 1e-10);
  CHECK_THROWS_WITH_AS(verify_majorant(square, constant_majorant(2.0, 0.1), radii, angles),
                       "radius outside majorant range", Error);
}

TEST_CASE("Poisson-type majorant of a constant modulus") {
  // (1/pi) int_0^pi dtau / (1 - 2 r cos tau + r^2) = 1 / (1 - r^2)
  const auto one = disc::ModulusFunction::from([](double) { return 1.0; });
  for (double r : {0.3, 0.7, 0.95}) {
    CHECK(majorant_from_modulus(one, r) == Approx(1.0 / (1.0 - r * r)).epsilon(1e-9));
  }
  CHECK_THROWS_WITH_AS(majorant_from_modulus(one, 0.2), "r must lie in (1/4, 1)", Error);
}

TEST_CASE("kernel inequality on random points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ur(0.2500001, 0.9999999);
  std::uniform_real_distribution<double> ut(0.0, kPi);
  for (int i = 0; i < 2000; ++i) CHECK(kernel_bound_check(ur(rng), ut(rng)));
  CHECK(kernel_bound_margin(0.5, 0.0) == Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(kernel_bound_check(0.1, 0.5), "outside validity region", Error);
  CHECK_THROWS_WITH_AS(kernel_bound_check(0.5, 4.0), "outside validity region", Error);
}

TEST_CASE("varpi is piecewise") {
  const auto phi = constant_majorant(1.0, 0.5);
  CHECK(varpi(phi, 2.0, 0.1) == Approx(0.3));
  CHECK(varpi(phi, 2.0, 1.0) == Approx(4.0));
}

TEST_CASE("converse ratio is finite and positive") {
  const auto w = disc::ModulusFunction::from(disc::ModulusFamily::holder(1.0));
  for (int n : {0, 2}) {
    const auto r = converse_ratio(w, n, 0.01, 0.5);
    CHECK(r.kernel_side > 0.0);
    CHECK(r.modulus_side > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio < 10.0);
  }
  CHECK_THROWS_AS(converse_ratio(w, 0, 0.01, 0.8), Error);
}
