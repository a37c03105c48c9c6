#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cxgeo/types.hpp"

namespace cxgeo::geom {

/// Absolute membership tolerance in model coordinates.
inline constexpr double kMembershipTol = 1e-12;

enum class Membership { inside, boundary, outside };

/// Constants of the outer support C phi_alpha(|z'|) of the flat model.
struct FlatSupport {
  double C = 1.0;
  double alpha = 0.5;
  double R0 = 0.1;
  double s0 = 0.1;

  /// Largest radius on which x -> C phi_alpha(x) is convex:
  /// (alpha / (alpha + 1))^(1 / alpha).
  static double convexity_cap(double alpha);
  /// Validates the constants; a non-positive or NaN R0 selects the cap.
  static FlatSupport make(double C, double alpha, double R0, double s0);
};

struct Polydisc {
  std::vector<double> radii;
};

struct Ball {
  CVector center;
  double radius = 1.0;
};

/// Re<z, a> <= b with <z, a> = sum z_i conj(a_i).
struct Halfspace {
  CVector a;
  double b = 0.0;
};

struct HalfspaceIntersection {
  std::vector<Halfspace> halfspaces;
  /// Vertices of the polytope in C^n, found at construction.
  std::vector<CVector> vertices;
};

/// {|z'| < R0, |Re z_n| < s0, C phi_alpha(|z'|) < Im z_n < s0}. The graph
/// part is the hypersurface Im z_n = C phi_alpha(|z'|) with the cap and wall
/// faces added for boundedness.
struct FlatModel {
  FlatSupport support;
};

/// A bounded convex domain in C^n. Immutable after construction.
class ConvexDomainModel {
public:
  using Shape = std::variant<Polydisc, Ball, HalfspaceIntersection, FlatModel>;

  static ConvexDomainModel polydisc(std::vector<double> radii);
  static ConvexDomainModel unit_polydisc(int n);
  static ConvexDomainModel ball(CVector center, double radius);
  /// Throws when the halfspaces do not cut out a bounded polytope.
  static ConvexDomainModel halfspace_intersection(std::vector<Halfspace> halfspaces);
  static ConvexDomainModel flat_model(const FlatSupport& support, int n = 2);

  int dimension() const { return dim_; }
  const Shape& shape() const { return shape_; }
  std::string kind_name() const;
  /// Present only for the flat model.
  const FlatSupport* flat_support() const;

  Membership membership(const CVector& z) const;
  bool contains(const CVector& z) const { return membership(z) == Membership::inside; }
  bool in_closure(const CVector& z) const { return membership(z) != Membership::outside; }

  /// Radius of a ball about the origin containing the domain.
  double bounding_radius() const { return bounding_radius_; }

private:
  ConvexDomainModel(Shape shape, int dim, double bounding_radius)
      : shape_(std::move(shape)), dim_(dim), bounding_radius_(bounding_radius) {}

  Shape shape_;
  int dim_ = 0;
  double bounding_radius_ = 0.0;
};

/// e^(-1 / x^alpha) for x > 0 and 0 at x = 0.
double phi_alpha(double x, double alpha);
/// d/dx phi_alpha.
double phi_alpha_derivative(double x, double alpha);
/// (C phi_alpha)^-1(d) = [log(C / d)]^(-1 / alpha) for 0 < d < C.
double phi_alpha_inv(double d, double C, double alpha);

/// min of C/2 and all x in (0, C) with x = [log(C/x)]^(-1/alpha).
///
/// Roots are located by a sign-change scan on scan_n log-spaced points and
/// polished by bisection. In t = log(C/x) the equation reads
/// t - log(t)/alpha = log C, whose left side is convex, so there are at most
/// two roots; the scan range is widened until it covers the larger one.
double x0_cap(double C, double alpha, int scan_n = 100000);

/// The rho > 0 with C phi_alpha(rho) + rho * slope = d.
double rho_triangle(double d, double slope, double C, double alpha);

/// sup{t >= 0 : z + t u in closure}, for u normalized to unit length.
double exit_time(const ConvexDomainModel& domain, const CVector& z, const CVector& u);
/// Model-independent exit time by bracket growth and bisection on
/// membership.
double exit_time_bisection(const ConvexDomainModel& domain, const CVector& z, const CVector& u);

/// Euclidean distance from z to the boundary.
double boundary_distance(const ConvexDomainModel& domain, const CVector& z);
/// Minimum of the exit time over the unit sphere of C^n = R^2n: coarse
/// sampling followed by pattern search on the sphere from the best
/// candidates.
double boundary_distance_search(const ConvexDomainModel& domain, const CVector& z);

/// r(z; v): radius of the largest closed complex disc z + D(0, r) v/|v|
/// inside the closure.
double inscribed_disc_radius(const ConvexDomainModel& domain, const CVector& z,
                             const CVector& v, int coarse_n = 64);

/// sup over the closure of Re<z, a>.
double support_function(const ConvexDomainModel& domain, const CVector& a);

/// Unitary normalization at a boundary point of the graph part of the flat
/// model: U(nu) = (0, ..., 0, i) and U maps the complex tangent space onto
/// {v_n = 0}.
struct BoundaryFrame {
  CVector w;
  CVector inward_normal;
  CMatrix U;

  /// v -> U (v - w)
  CVector apply(const CVector& v) const { return U * (v - w); }
};

BoundaryFrame boundary_frame(const ConvexDomainModel& domain, const CVector& w);

struct RestBoundReport {
  double d = 0.0;
  double r = 0.0;
  /// 2 [log(C / d)]^(-1 / alpha)
  double bound = 0.0;
  double margin = 0.0;
  bool holds = false;
};

/// Checks r(z; v) <= 2 [log(C/d)]^(-1/alpha) for a point of the flat model
/// with d = d(z) < min(s0, x0).
RestBoundReport rest_bound_check(const ConvexDomainModel& domain, const CVector& z,
                                 const CVector& v, double tol = 1e-9);

}  // namespace cxgeo::geom
