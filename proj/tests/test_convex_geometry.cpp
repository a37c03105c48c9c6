#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cxgeo/convex_geometry.hpp"
#include "cxgeo/error.hpp"

using namespace cxgeo;
using namespace cxgeo::geom;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

CVector random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

// Random point of the domain by rejection from its bounding box.
CVector random_inside(const ConvexDomainModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-m.bounding_radius(), m.bounding_radius());
  while (true) {
    CVector z(m.dimension());
    for (int i = 0; i < m.dimension(); ++i) z(i) = Complex(u(rng), u(rng));
    if (m.contains(z)) return z;
  }
}

// Closed-form inscribed radius of the unit ball at z in direction u.
double ball_radius_oracle(const CVector& z, const CVector& u_raw) {
  const CVector u = u_raw / u_raw.norm();
  const double p = std::abs(u.dot(z));
  return -p + std::sqrt(p * p + 1.0 - z.squaredNorm());
}

// Distance to the boundary of the two-dimensional flat model for z' >= 0
// real: the closest graph point lies over the same ray, which reduces the
// graph part to a one-dimensional scan.
double flat_distance_oracle(const FlatSupport& s, double x, Complex zn) {
  double graph = std::numeric_limits<double>::infinity();
  constexpr int kScan = 400000;
  for (int i = 0; i <= kScan; ++i) {
    const double rho = 2.0 * s.R0 * i / kScan;
    graph = std::min(graph, std::hypot(rho - x, s.C * phi_alpha(rho, s.alpha) - zn.imag()));
  }
  return std::min({s.R0 - x, s.s0 - std::abs(zn.real()), s.s0 - zn.imag(), graph});
}

ConvexDomainModel unit_square_c1() {
  return ConvexDomainModel::halfspace_intersection({{vec({1.0}), 1.0},
                                                    {vec({-1.0}), 1.0},
                                                    {vec({Complex(0, 1)}), 1.0},
                                                    {vec({Complex(0, -1)}), 1.0}});
}

}  // namespace

TEST_CASE("flat support constants") {
  CHECK(FlatSupport::convexity_cap(0.5) == Approx(1.0 / 9.0).epsilon(1e-14));
  const auto s = FlatSupport::make(1.0, 0.5, 0.0, 0.1);
  CHECK(s.R0 == Approx(1.0 / 9.0));
  CHECK(1.0 * phi_alpha(s.R0, 0.5) == Approx(std::exp(-3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(FlatSupport::make(1.0, 0.5, 0.2, 0.1), Error);
  CHECK_THROWS_AS(FlatSupport::make(1.0, 1.0, 0.0, 0.1), Error);
}

TEST_CASE("phi_alpha and its inverse") {
  CHECK(phi_alpha(0.0, 0.5) == 0.0);
  for (double d : {1e-6, 1e-3, 0.04}) {
    const double x = phi_alpha_inv(d, 1.0, 0.5);
    CHECK(phi_alpha(x, 0.5) == Approx(d).epsilon(1e-12));
  }
  // Central difference against the closed-form derivative.
  const double x = 0.08;
  const double h = 1e-6;
  const double fd = (phi_alpha(x + h, 0.5) - phi_alpha(x - h, 0.5)) / (2 * h);
  CHECK(phi_alpha_derivative(x, 0.5) == Approx(fd).epsilon(1e-7));
  CHECK_THROWS_WITH_AS(phi_alpha_inv(2.0, 1.0, 0.5), "outside inverse domain", Error);
}

TEST_CASE("membership of the model domains") {
  const auto D2 = ConvexDomainModel::unit_polydisc(2);
  CHECK(D2.membership(vec({0.5, Complex(0, 0.9)})) == Membership::inside);
  CHECK(D2.membership(vec({1.0, 0.0})) == Membership::boundary);
  CHECK(D2.membership(vec({0.9, 0.9})) == Membership::inside);
  CHECK(D2.membership(vec({1.1, 0.0})) == Membership::outside);

  const auto B = ConvexDomainModel::ball(vec({0.0, 0.0}), 1.0);
  CHECK(B.membership(vec({0.9, 0.9})) == Membership::outside);
  CHECK(B.kind_name() == "ball");

  const auto sq = unit_square_c1();
  CHECK(sq.membership(vec({Complex(0.99, -0.99)})) == Membership::inside);
  CHECK(sq.membership(vec({Complex(1.0, 0.5)})) == Membership::boundary);
  CHECK(sq.bounding_radius() == Approx(std::sqrt(2.0)));

  const auto flat = ConvexDomainModel::flat_model(FlatSupport::make(1.0, 0.5, 0.0, 0.1));
  CHECK(flat.membership(vec({0.0, Complex(0, 0.01)})) == Membership::inside);
  CHECK(flat.membership(vec({0.1, Complex(0, 0.01)})) == Membership::outside);
  CHECK(flat.membership(vec({0.0, 0.0})) == Membership::boundary);
  CHECK(flat.flat_support() != nullptr);
  CHECK(D2.flat_support() == nullptr);
}

TEST_CASE("unbounded halfspace systems are rejected") {
  CHECK_THROWS_WITH_AS(ConvexDomainModel::halfspace_intersection({{vec({1.0}), 1.0}}),
                       "halfspace intersection is unbounded", Error);
  // A wedge: bounded in Im but open towards Re z -> -inf.
  CHECK_THROWS_WITH_AS(ConvexDomainModel::halfspace_intersection({{vec({1.0}), 1.0},
                                                                  {vec({Complex(1, 1)}), 1.0},
                                                                  {vec({Complex(1, -1)}), 1.0}}),
                       "halfspace intersection is unbounded", Error);
}

TEST_CASE("closed-form exit times agree with bisection") {
  std::mt19937_64 rng(101);
  const std::vector<ConvexDomainModel> models = {
      ConvexDomainModel::polydisc({1.0, 0.5}), ConvexDomainModel::ball(vec({0.2, Complex(0, -0.1)}), 0.8),
      unit_square_c1(), ConvexDomainModel::flat_model(FlatSupport::make(1.0, 0.5, 0.0, 0.1))};
  for (const auto& m : models) {
    for (int i = 0; i < 40; ++i) {
      const CVector z = random_inside(m, rng);
      const CVector u = random_direction(rng, m.dimension());
      CAPTURE(m.kind_name());
      CHECK(exit_time(m, z, u) == Approx(exit_time_bisection(m, z, u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exit time errors") {
  const auto D2 = ConvexDomainModel::unit_polydisc(2);
  CHECK_THROWS_WITH_AS(exit_time(D2, vec({0.0, 0.0}), vec({0.0, 0.0})), "direction must be nonzero", Error);
  CHECK_THROWS_WITH_AS(exit_time(D2, vec({2.0, 0.0}), vec({1.0, 0.0})), "base point outside domain", Error);
}

TEST_CASE("sphere search reproduces closed-form distances") {
  std::mt19937_64 rng(7);
  const std::vector<ConvexDomainModel> models = {
      ConvexDomainModel::polydisc({1.0, 0.5}), ConvexDomainModel::ball(vec({0.2, 0.0}), 0.8),
      unit_square_c1()};
  for (const auto& m : models) {
    for (int i = 0; i < 5; ++i) {
      const CVector z = random_inside(m, rng);
      CAPTURE(m.kind_name());
      CHECK(boundary_distance_search(m, z) == Approx(boundary_distance(m, z)).epsilon(1e-9));
    }
  }
}

TEST_CASE("flat model distance against a dense graph scan") {
  const auto s = FlatSupport::make(1.0, 0.5, 0.0, 0.1);
  const auto flat = ConvexDomainModel::flat_model(s);
  for (double d : {1e-6, 1e-4, 1e-2, 0.03}) {
    CHECK(boundary_distance(flat, vec({0.0, Complex(0.0, d)})) == Approx(d).epsilon(1e-9));
  }
  struct P {
    double x;
    Complex zn;
  };
  for (const P& p : {P{0.05, Complex(0.02, 0.02)}, P{0.1, Complex(0.0, 0.049)},
                     P{0.08, Complex(-0.05, 0.04)}, P{0.02, Complex(0.09, 0.05)}}) {
    const CVector z = vec({p.x, p.zn});
    REQUIRE(flat.contains(z));
    CHECK(boundary_distance(flat, z) == Approx(flat_distance_oracle(s, p.x, p.zn)).epsilon(1e-7));
  }
}

TEST_CASE("inscribed disc radius") {
  const auto ball = ConvexDomainModel::ball(vec({0.0, 0.0}), 1.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const CVector z = 0.7 * random_direction(rng, 2) * std::sqrt(std::uniform_real_distribution<double>(0, 1)(rng));
    const CVector v = random_direction(rng, 2);
    CHECK(inscribed_disc_radius(ball, z, v) == Approx(ball_radius_oracle(z, v)).epsilon(1e-10));
  }
  const auto D2 = ConvexDomainModel::unit_polydisc(2);
  CHECK(inscribed_disc_radius(D2, vec({0.0, 0.0}), vec({1.0, 0.0})) == Approx(1.0).epsilon(1e-12));
  CHECK(inscribed_disc_radius(D2, vec({0.0, 0.0}), vec({1.0, Complex(0, 1)})) ==
        Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(inscribed_disc_radius(D2, vec({0.0, 0.0}), vec({0.0, 0.0})),
                       "direction must be nonzero", Error);
}

TEST_CASE("support functions") {
  std::mt19937_64 rng(13);
  const auto ball = ConvexDomainModel::ball(vec({0.3, 0.0}), 0.5);
  const auto D2 = ConvexDomainModel::polydisc({1.0, 0.25});
  const auto sq = unit_square_c1();
  for (int i = 0; i < 10; ++i) {
    const CVector a = random_direction(rng, 2);
    CHECK(support_function(ball, a) == Approx(0.3 * a(0).real() + 0.5).epsilon(1e-12));
    CHECK(support_function(D2, a) == Approx(std::abs(a(0)) + 0.25 * std::abs(a(1))).epsilon(1e-12));
    const CVector b = random_direction(rng, 1);
    CHECK(support_function(sq, b) == Approx(std::abs(b(0).real()) + std::abs(b(0).imag())).epsilon(1e-12));
  }

  // Flat model against a dense sample of its closure.
  const auto s = FlatSupport::make(1.0, 0.5, 0.0, 0.1);
  const auto flat = ConvexDomainModel::flat_model(s);
  for (int i = 0; i < 6; ++i) {
    const CVector a = random_direction(rng, 2);
    double brute = -std::numeric_limits<double>::infinity();
    for (int ir = 0; ir <= 400; ++ir) {
      const double rho = s.R0 * ir / 400;
      for (int ip = 0; ip < 64; ++ip) {
        const Complex zp = std::polar(rho, 2 * kPi * ip / 64);
        for (double re : {-s.s0, s.s0}) {
          for (double im : {s.C * phi_alpha(rho, s.alpha), s.s0}) {
            brute = std::max(brute, (std::conj(a(0)) * zp + std::conj(a(1)) * Complex(re, im)).real());
          }
        }
      }
    }
    const double h = support_function(flat, a);
    CHECK(h >= brute - 1e-12);
    CHECK(h <= brute + 1e-3 * std::abs(a(0)));
  }
}

TEST_CASE("root equations of the flat model") {
  CHECK(x0_cap(1.0, 1.0) == 0.5);
  CHECK(x0_cap(1.0, 0.5) == 0.5);
  // Independent oracle: scan x = [log(1/x)]^(-5) on a log grid in x.
  auto g = [](double lx) { return lx + 5.0 * std::log(-lx); };  // lx = log x
  double lo = -40.0, hi = -1e-3;
  double smallest = 0.5;
  double prev = g(lo);
  const int n = 200000;
  for (int i = 1; i <= n; ++i) {
    const double lx = lo + (hi - lo) * i / n;
    const double cur = g(lx);
    if ((cur > 0) != (prev > 0)) {
      double a = lx - (hi - lo) / n, b = lx;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        ((g(m) > 0) == (g(a) > 0) ? a : b) = m;
      }
      smallest = std::min(smallest, std::exp(0.5 * (a + b)));
    }
    prev = cur;
  }
  CHECK(x0_cap(1.0, 0.2) == Approx(smallest).epsilon(1e-9));
  CHECK(x0_cap(1.0, 0.2) == Approx(3.0e-6).epsilon(0.05));

  // rho + exp(-1/rho) = 0.1 by plain bisection.
  double a = 0.0, b = 0.1;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    ((m + std::exp(-1.0 / m) < 0.1) ? a : b) = m;
  }
  CHECK(rho_triangle(0.1, 1.0, 1.0, 1.0) == Approx(a).epsilon(1e-12));
  CHECK(rho_triangle(0.1, 1.0, 1.0, 1.0) == Approx(0.09995).epsilon(1e-4));

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(1e-6, 0.5), us(0.0, 5.0), ua(0.1, 1.5);
  for (int i = 0; i < 100; ++i) {
    const double d = ud(rng), slope = us(rng), alpha = ua(rng);
    const double rho = rho_triangle(d, slope, 1.0, alpha);
    CHECK(rho <= phi_alpha_inv(d, 1.0, alpha) * (1.0 + 1e-12));
    CHECK(phi_alpha(rho, alpha) + rho * slope == Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("boundary frame normalizes the normal") {
  const auto s = FlatSupport::make(1.0, 0.5, 0.0, 0.1);
  const auto flat = ConvexDomainModel::flat_model(s, 3);
  const auto f0 = boundary_frame(flat, vec({0.0, 0.0, 0.0}));
  CHECK((f0.U - CMatrix::Identity(3, 3)).norm() < 1e-14);

  const CVector wp = vec({Complex(0.04, 0.03), Complex(-0.02, 0.05)});
  const double height = s.C * phi_alpha(wp.norm(), s.alpha);
  const CVector w = vec({wp(0), wp(1), Complex(0.01, height)});
  const auto f = boundary_frame(flat, w);
  CHECK((f.U * f.U.adjoint() - CMatrix::Identity(3, 3)).norm() < 1e-13);
  const CVector image = f.U * f.inward_normal;
  CHECK(std::abs(image(0)) < 1e-14);
  CHECK(std::abs(image(1)) < 1e-14);
  CHECK(std::abs(image(2) - Complex(0, 1)) < 1e-14);
  CHECK(f.apply(w).norm() == 0.0);
  // Moving inward along the normal increases Im of the last coordinate.
  CHECK(flat.contains(w + 1e-4 * f.inward_normal));

  CHECK_THROWS_WITH_AS(boundary_frame(flat, vec({0.0, 0.0, Complex(0, 0.05)})),
                       "frame undefined off the graph", Error);
  CHECK_THROWS_WITH_AS(boundary_frame(ConvexDomainModel::unit_polydisc(2), vec({1.0, 0.0})),
                       "boundary frame requires a flat model", Error);
}

TEST_CASE("inscribed radius bound near the flat boundary") {
  const auto s = FlatSupport::make(1.0, 0.5, 0.0, 0.1);
  const auto flat = ConvexDomainModel::flat_model(s);
  for (double d : {1e-6, 1e-4, 1e-2}) {
    const CVector z = vec({0.0, Complex(0, d)});
    const auto tangential = rest_bound_check(flat, z, vec({1.0, 0.0}));
    CHECK(tangential.holds);
    CHECK(tangential.d == Approx(d).epsilon(1e-9));
    CHECK(inscribed_disc_radius(flat, z, vec({0.0, 1.0})) == Approx(d).epsilon(1e-9));
  }
  CHECK_THROWS_WITH_AS(rest_bound_check(flat, vec({0.0, 0.0}), vec({1.0, 0.0})),
                       "point not in the boundary zone", Error);
}
