#include "cxgeo/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cxgeo/error.hpp"
#include "cxgeo/numerics.hpp"

namespace cxgeo::geom {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXd to_real(const CVector& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x(2 * i) = z(i).real();
    x(2 * i + 1) = z(i).imag();
  }
  return x;
}

CVector from_real(const Eigen::VectorXd& x) {
  CVector z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Complex(x(2 * i), x(2 * i + 1));
  return z;
}

/// Re<z, a>
double real_pairing(const CVector& z, const CVector& a) {
  return (z.array() * a.array().conjugate()).sum().real();
}

/// Largest t >= 0 with |p + t u| <= R for |p| <= R (u != 0).
double sphere_exit(const CVector& p, const CVector& u, double R) {
  const double uu = u.squaredNorm();
  const double b = real_pairing(p, u);
  const double c = std::max(0.0, R * R - p.squaredNorm());
  const double disc = std::sqrt(b * b + uu * c);
  return b <= 0.0 ? (disc - b) / uu : c / (b + disc);
}

double flat_defining(const FlatSupport& s, const CVector& z) {
  const Eigen::Index n = z.size();
  const double rp = z.head(n - 1).norm();
  const Complex zn = z(n - 1);
  return std::max({rp - s.R0, std::abs(zn.real()) - s.s0, zn.imag() - s.s0,
                   s.C * phi_alpha(rp, s.alpha) - zn.imag()});
}

void check_dimension(const ConvexDomainModel& domain, const CVector& v) {
  if (v.size() != domain.dimension()) throw Error("vector dimension does not match domain");
}

// Subsets of size k of {0..m-1}, visited in lexicographic order.
template <class Visit>
void for_each_subset(int m, int k, Visit&& visit) {
  if (k > m || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double exit_flat(const FlatSupport& s, double bound, const CVector& z, const CVector& u) {
  const Eigen::Index n = z.size();
  const CVector zp = z.head(n - 1);
  const CVector up = u.head(n - 1);
  const Complex zn = z(n - 1);
  const Complex un = u(n - 1);

  double t_lin = 2.0 * bound + z.norm() + 1.0;
  if (up.squaredNorm() > 0.0) t_lin = std::min(t_lin, sphere_exit(zp, up, s.R0));
  if (un.real() > 0.0) t_lin = std::min(t_lin, (s.s0 - zn.real()) / un.real());
  if (un.real() < 0.0) t_lin = std::min(t_lin, (-s.s0 - zn.real()) / un.real());
  if (un.imag() > 0.0) t_lin = std::min(t_lin, (s.s0 - zn.imag()) / un.imag());
  t_lin = std::max(t_lin, 0.0);

  // Graph constraint: convex in t, nonpositive at t = 0.
  auto graph = [&](double t) {
    return s.C * phi_alpha((zp + t * up).norm(), s.alpha) - (zn.imag() + t * un.imag());
  };
  if (graph(t_lin) <= 0.0) return t_lin;
  if (graph(0.0) > 0.0) return 0.0;
  double lo = 0.0;
  double hi = t_lin;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (graph(mid) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

// Pattern search on the unit sphere of R^D for the minimum of `value`.
std::pair<Eigen::VectorXd, double> sphere_pattern_search(
    const std::function<double(const Eigen::VectorXd&)>& value, Eigen::VectorXd x, double fx) {
  const Eigen::Index D = x.size();
  double step = 0.25;
  for (int it = 0; it < 5000 && step > 1e-11; ++it) {
    Eigen::VectorXd best_x = x;
    double best_f = fx;
    for (Eigen::Index j = 0; j < D; ++j) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd y = x;
        y(j) += sign * step;
        const double norm = y.norm();
        if (norm == 0.0) continue;
        y /= norm;
        const double fy = value(y);
        if (fy < best_f) {
          best_f = fy;
          best_x = y;
        }
      }
    }
    if (best_f < fx) {
      x = best_x;
      fx = best_f;
    } else {
      step *= 0.5;
    }
  }
  return {x, fx};
}

}  // namespace

double FlatSupport::convexity_cap(double alpha) {
  return std::pow(alpha / (alpha + 1.0), 1.0 / alpha);
}

FlatSupport FlatSupport::make(double C, double alpha, double R0, double s0) {
  if (!(C > 0.0)) throw Error("flat support needs C > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("flat support needs alpha in (0, 1)");
  const double cap = convexity_cap(alpha);
  if (!(R0 > 0.0)) R0 = cap;
  if (R0 > cap * (1.0 + 1e-12)) throw Error("R0 exceeds the convexity cap");
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw Error("flat support needs s0 > 0");
  return {C, alpha, std::min(R0, cap), s0};
}

ConvexDomainModel ConvexDomainModel::polydisc(std::vector<double> radii) {
  if (radii.empty()) throw Error("polydisc needs at least one radius");
  double sq = 0.0;
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("polydisc radii must be positive");
    sq += r * r;
  }
  const int n = static_cast<int>(radii.size());
  return ConvexDomainModel(Polydisc{std::move(radii)}, n, std::sqrt(sq));
}

ConvexDomainModel ConvexDomainModel::unit_polydisc(int n) {
  return polydisc(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

ConvexDomainModel ConvexDomainModel::ball(CVector center, double radius) {
  if (center.size() == 0) throw Error("ball needs a center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("ball radius must be positive");
  const int n = static_cast<int>(center.size());
  const double bound = center.norm() + radius;
  return ConvexDomainModel(Ball{std::move(center), radius}, n, bound);
}

ConvexDomainModel ConvexDomainModel::halfspace_intersection(std::vector<Halfspace> halfspaces) {
  if (halfspaces.empty()) throw Error("halfspace intersection is unbounded");
  const Eigen::Index n = halfspaces.front().a.size();
  const int D = static_cast<int>(2 * n);
  const int m = static_cast<int>(halfspaces.size());
  Eigen::MatrixXd A(m, D);
  Eigen::VectorXd b(m);
  for (int j = 0; j < m; ++j) {
    if (halfspaces[j].a.size() != n) throw Error("halfspace normals differ in dimension");
    if (halfspaces[j].a.norm() == 0.0) throw Error("halfspace normal must be nonzero");
    A.row(j) = to_real(halfspaces[j].a).transpose();
    b(j) = halfspaces[j].b;
  }
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < D) throw Error("halfspace intersection is unbounded");
  }
  // A pointed recession cone is trivial iff none of its candidate extreme
  // rays (null vectors of D-1 active rows) satisfies A d <= 0.
  bool unbounded = false;
  for_each_subset(m, D - 1, [&](const std::vector<int>& rows) {
    if (unbounded) return;
    Eigen::MatrixXd sub(D - 1, D);
    for (int i = 0; i < D - 1; ++i) sub.row(i) = A.row(rows[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() != D - 1) return;
    Eigen::VectorXd d = lu.kernel().col(0);
    d.normalize();
    for (double sign : {1.0, -1.0}) {
      if (((sign * A * d).array() <= 1e-12).all()) unbounded = true;
    }
  });
  if (unbounded) throw Error("halfspace intersection is unbounded");

  std::vector<CVector> vertices;
  for_each_subset(m, D, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd sub(D, D);
    Eigen::VectorXd rhs(D);
    for (int i = 0; i < D; ++i) {
      sub.row(i) = A.row(rows[i]);
      rhs(i) = b(rows[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() != D) return;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (((A * x - b).array() <= 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())).all()) {
      vertices.push_back(from_real(x));
    }
  });
  if (vertices.empty()) throw Error("halfspace intersection is empty");
  double bound = 0.0;
  for (const auto& v : vertices) bound = std::max(bound, v.norm());
  return ConvexDomainModel(HalfspaceIntersection{std::move(halfspaces), std::move(vertices)},
                           static_cast<int>(n), bound);
}

ConvexDomainModel ConvexDomainModel::flat_model(const FlatSupport& support, int n) {
  if (n < 2) throw Error("flat model needs n >= 2");
  const FlatSupport s = FlatSupport::make(support.C, support.alpha, support.R0, support.s0);
  const double bound = std::sqrt(s.R0 * s.R0 + 2.0 * s.s0 * s.s0);
  return ConvexDomainModel(FlatModel{s}, n, bound);
}

std::string ConvexDomainModel::kind_name() const {
  return std::visit(overloaded{[](const Polydisc&) { return std::string("polydisc"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const HalfspaceIntersection&) {
                                 return std::string("halfspace_intersection");
                               },
                               [](const FlatModel&) { return std::string("flat_model"); }},
                    shape_);
}

const FlatSupport* ConvexDomainModel::flat_support() const {
  if (const auto* f = std::get_if<FlatModel>(&shape_)) return &f->support;
  return nullptr;
}

Membership ConvexDomainModel::membership(const CVector& z) const {
  check_dimension(*this, z);
  const double g = std::visit(
      overloaded{
          [&](const Polydisc& p) {
            double worst = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < z.size(); ++i) {
              worst = std::max(worst, std::abs(z(i)) - p.radii[i]);
            }
            return worst;
          },
          [&](const Ball& b) { return (z - b.center).norm() - b.radius; },
          [&](const HalfspaceIntersection& h) {
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& hs : h.halfspaces) {
              worst = std::max(worst, (real_pairing(z, hs.a) - hs.b) / hs.a.norm());
            }
            return worst;
          },
          [&](const FlatModel& f) { return flat_defining(f.support, z); }},
      shape_);
  if (!std::isfinite(g)) return Membership::outside;
  if (g < -kMembershipTol) return Membership::inside;
  if (g <= kMembershipTol) return Membership::boundary;
  return Membership::outside;
}

double phi_alpha(double x, double alpha) {
  if (x < 0.0) throw Error("phi_alpha needs x >= 0");
  if (x == 0.0) return 0.0;
  return std::exp(-std::pow(x, -alpha));
}

double phi_alpha_derivative(double x, double alpha) {
  if (x < 0.0) throw Error("phi_alpha needs x >= 0");
  if (x == 0.0) return 0.0;
  return alpha * std::pow(x, -alpha - 1.0) * phi_alpha(x, alpha);
}

double phi_alpha_inv(double d, double C, double alpha) {
  if (!(d > 0.0 && d < C)) throw Error("outside inverse domain");
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  return std::pow(std::log(C / d), -1.0 / alpha);
}

double x0_cap(double C, double alpha, int scan_n) {
  if (!(C > 0.0) || !(alpha > 0.0)) throw Error("x0 needs C > 0 and alpha > 0");
  if (scan_n < 16) throw Error("scan needs at least 16 points");
  // t = log(C/x) in (0, inf); roots of G(t) = t - log(t)/alpha - log(C).
  const double logC = std::log(C);
  auto G = [&](double t) { return t - std::log(t) / alpha - logC; };
  double t_hi = std::max(std::log(1e12), 2.0 / alpha);
  while (G(t_hi) <= 0.0) t_hi *= 2.0;
  const double t_lo = t_hi * 1e-12;

  double result = 0.5 * C;
  const double log_ratio = std::log(t_hi / t_lo);
  double t_prev = t_lo;
  double g_prev = G(t_prev);
  for (int i = 1; i < scan_n; ++i) {
    // Log-spaced in t so both the x ~ C and the t ~ 0 ends are resolved.
    const double t = t_lo * std::exp(log_ratio * i / (scan_n - 1));
    const double g = G(t);
    if (g == 0.0 || (g_prev > 0.0) != (g > 0.0)) {
      const double root =
          g == 0.0 ? t : numerics::solve_monotone(G, t_prev, t, 0.0, 1e-15 * t).root;
      result = std::min(result, C * std::exp(-root));
    }
    t_prev = t;
    g_prev = g;
  }
  return result;
}

double rho_triangle(double d, double slope, double C, double alpha) {
  if (!(d > 0.0)) throw Error("rho_triangle needs d > 0");
  if (!(slope >= 0.0) || !std::isfinite(slope)) throw Error("rho_triangle needs slope >= 0");
  if (!(C > 0.0) || !(alpha > 0.0)) throw Error("rho_triangle needs C > 0 and alpha > 0");
  if (slope == 0.0 && d >= C) throw Error("no solution: d >= C with zero slope");
  auto lhs = [&](double rho) { return C * phi_alpha(rho, alpha) + rho * slope; };
  const double hi = slope > 0.0 ? d / slope : 2.0 * phi_alpha_inv(d, C, alpha);
  if (lhs(hi) == d) return hi;
  const auto root = numerics::solve_monotone(lhs, 0.0, hi, d,
                                             4.0 * std::numeric_limits<double>::epsilon() * hi);
  return root.root;
}

double exit_time(const ConvexDomainModel& domain, const CVector& z, const CVector& u_raw) {
  check_dimension(domain, z);
  check_dimension(domain, u_raw);
  const double un = u_raw.norm();
  if (!(un > 0.0)) throw Error("direction must be nonzero");
  if (!domain.in_closure(z)) throw Error("base point outside domain");
  const CVector u = u_raw / un;
  return std::visit(
      overloaded{
          [&](const Polydisc& p) {
            double t = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < z.size(); ++i) {
              if (u(i) == Complex(0.0)) continue;
              CVector zi(1), ui(1);
              zi(0) = z(i);
              ui(0) = u(i);
              t = std::min(t, sphere_exit(zi, ui, p.radii[i]));
            }
            return t;
          },
          [&](const Ball& b) { return sphere_exit(z - b.center, u, b.radius); },
          [&](const HalfspaceIntersection& h) {
            double t = std::numeric_limits<double>::infinity();
            for (const auto& hs : h.halfspaces) {
              const double rate = real_pairing(u, hs.a);
              if (rate > 0.0) t = std::min(t, std::max(0.0, (hs.b - real_pairing(z, hs.a)) / rate));
            }
            return t;
          },
          [&](const FlatModel& f) {
            return exit_flat(f.support, domain.bounding_radius(), z, u);
          }},
      domain.shape());
}

double exit_time_bisection(const ConvexDomainModel& domain, const CVector& z, const CVector& u_raw) {
  check_dimension(domain, z);
  check_dimension(domain, u_raw);
  const double un = u_raw.norm();
  if (!(un > 0.0)) throw Error("direction must be nonzero");
  if (!domain.in_closure(z)) throw Error("base point outside domain");
  const CVector u = u_raw / un;
  double lo = 0.0;
  double hi = std::max(1e-3, domain.bounding_radius() * 1e-3);
  while (domain.in_closure(z + hi * u)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 4.0 * domain.bounding_radius() + 2.0 * z.norm() + 1.0) {
      throw Error("exit time bracket failed");
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (domain.in_closure(z + mid * u) ? lo : hi) = mid;
  }
  return lo;
}

double boundary_distance(const ConvexDomainModel& domain, const CVector& z) {
  check_dimension(domain, z);
  if (!domain.in_closure(z)) throw Error("base point outside domain");
  return std::visit(
      overloaded{
          [&](const Polydisc& p) {
            double d = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < z.size(); ++i) d = std::min(d, p.radii[i] - std::abs(z(i)));
            return std::max(d, 0.0);
          },
          [&](const Ball& b) { return std::max(0.0, b.radius - (z - b.center).norm()); },
          [&](const HalfspaceIntersection& h) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& hs : h.halfspaces) {
              d = std::min(d, (hs.b - real_pairing(z, hs.a)) / hs.a.norm());
            }
            return std::max(d, 0.0);
          },
          [&](const FlatModel&) { return boundary_distance_search(domain, z); }},
      domain.shape());
}

double boundary_distance_search(const ConvexDomainModel& domain, const CVector& z) {
  check_dimension(domain, z);
  if (!domain.in_closure(z)) throw Error("base point outside domain");
  const Eigen::Index D = 2 * z.size();
  auto value = [&](const Eigen::VectorXd& x) { return exit_time(domain, z, from_real(x)); };

  std::vector<std::pair<double, Eigen::VectorXd>> samples;
  for (Eigen::Index j = 0; j < D; ++j) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(D);
      x(j) = sign;
      samples.emplace_back(value(x), x);
    }
  }
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  constexpr int kCoarse = 2048;
  for (int i = 0; i < kCoarse; ++i) {
    Eigen::VectorXd x(D);
    for (Eigen::Index j = 0; j < D; ++j) x(j) = normal(rng);
    x.normalize();
    samples.emplace_back(value(x), x);
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  constexpr std::size_t kStarts = 6;
  double best = samples.front().first;
  for (std::size_t i = 0; i < std::min(kStarts, samples.size()); ++i) {
    best = std::min(best, sphere_pattern_search(value, samples[i].second, samples[i].first).second);
  }
  return best;
}

double inscribed_disc_radius(const ConvexDomainModel& domain, const CVector& z, const CVector& v,
                             int coarse_n) {
  check_dimension(domain, z);
  check_dimension(domain, v);
  const double vn = v.norm();
  if (!(vn > 0.0)) throw Error("direction must be nonzero");
  if (!domain.in_closure(z)) throw Error("base point outside domain");
  const CVector unit = v / vn;
  auto h = [&](double theta) { return exit_time(domain, z, std::polar(1.0, theta) * unit); };
  return numerics::minimize_on_circle(h, coarse_n, 1e-12).value;
}

double support_function(const ConvexDomainModel& domain, const CVector& a) {
  check_dimension(domain, a);
  return std::visit(
      overloaded{
          [&](const Polydisc& p) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i) s += p.radii[i] * std::abs(a(i));
            return s;
          },
          [&](const Ball& b) { return real_pairing(b.center, a) + b.radius * a.norm(); },
          [&](const HalfspaceIntersection& h) {
            double s = -std::numeric_limits<double>::infinity();
            for (const auto& v : h.vertices) s = std::max(s, real_pairing(v, a));
            return s;
          },
          [&](const FlatModel& f) {
            const FlatSupport& s = f.support;
            const Eigen::Index n = a.size();
            const double ap = a.head(n - 1).norm();
            const Complex an = a(n - 1);
            // Largest |z'| whose graph height stays under the top cap.
            const double reach =
                s.s0 < s.C ? std::min(s.R0, phi_alpha_inv(s.s0, s.C, s.alpha)) : s.R0;
            const double walls = s.s0 * std::abs(an.real());
            if (an.imag() >= 0.0) return reach * ap + walls + s.s0 * an.imag();
            // Concave in the radius since phi_alpha is convex below the cap.
            auto negated = [&](double r) {
              return -(r * ap + an.imag() * s.C * phi_alpha(r, s.alpha));
            };
            const auto m = numerics::golden_section(negated, 0.0, reach, 1e-14);
            return std::max({-m.value, -negated(0.0), -negated(reach)}) + walls;
          }},
      domain.shape());
}

BoundaryFrame boundary_frame(const ConvexDomainModel& domain, const CVector& w) {
  const FlatSupport* s = domain.flat_support();
  if (!s) throw Error("boundary frame requires a flat model");
  check_dimension(domain, w);
  const Eigen::Index n = w.size();
  const CVector wp = w.head(n - 1);
  const double radius = wp.norm();
  const Complex wn = w(n - 1);
  const double height = s->C * phi_alpha(radius, s->alpha);
  if (!(radius < s->R0) || !(std::abs(wn.real()) < s->s0) || !(wn.imag() < s->s0) ||
      std::abs(wn.imag() - height) > 1e-10) {
    throw Error("frame undefined off the graph");
  }

  // Inward normal: minus the gradient of C phi(|z'|) - Im z_n.
  CVector nu(n);
  const double slope = s->C * phi_alpha_derivative(radius, s->alpha);
  nu.head(n - 1) = radius > 0.0 ? CVector(-(slope / radius) * wp) : CVector::Zero(n - 1);
  nu(n - 1) = Complex(0.0, 1.0);
  nu.normalize();

  // Columns: an orthonormal basis of nu^perp, then -i nu. U is the adjoint.
  CMatrix W(n, n);
  const CVector last = Complex(0.0, -1.0) * nu;
  int filled = 0;
  for (Eigen::Index k = 0; k < n && filled < n - 1; ++k) {
    CVector e = CVector::Zero(n);
    e(k) = 1.0;
    e -= last * last.dot(e);
    for (int j = 0; j < filled; ++j) e -= W.col(j) * W.col(j).dot(e);
    const double norm = e.norm();
    if (norm < 1e-8) continue;
    W.col(filled++) = e / norm;
  }
  if (filled != n - 1) throw Error("frame completion failed");
  W.col(n - 1) = last;

  BoundaryFrame frame;
  frame.w = w;
  frame.inward_normal = nu;
  frame.U = W.adjoint();
  return frame;
}

RestBoundReport rest_bound_check(const ConvexDomainModel& domain, const CVector& z, const CVector& v,
                                 double tol) {
  const FlatSupport* s = domain.flat_support();
  if (!s) throw Error("rest bound check requires a flat model");
  const double d = boundary_distance(domain, z);
  const double x0 = x0_cap(s->C, s->alpha);
  if (!(d > 0.0) || d >= std::min(s->s0, x0)) throw Error("point not in the boundary zone");
  RestBoundReport report;
  report.d = d;
  report.r = inscribed_disc_radius(domain, z, v);
  report.bound = 2.0 * phi_alpha_inv(d, s->C, s->alpha);
  report.margin = report.bound - report.r;
  report.holds = report.r <= report.bound + tol;
  return report;
}

}  // namespace cxgeo::geom
