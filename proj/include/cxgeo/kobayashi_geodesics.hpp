#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cxgeo/convex_geometry.hpp"
#include "cxgeo/disc_analysis.hpp"
#include "cxgeo/hardy_littlewood.hpp"

namespace cxgeo::kob {

using disc::UnitDiscFunction;
using geom::ConvexDomainModel;

// ---------------------------------------------------------------------------
// Hyperbolic geometry of the disc, normalized so that the infinitesimal
// metric at zeta is |v| / (1 - |zeta|^2).

double poincare_distance(Complex z1, Complex z2);
double poincare_metric(Complex zeta, Complex v);

/// zeta -> e^{i phi} (zeta - a) / (1 - conj(a) zeta), with derivative.
UnitDiscFunction disc_automorphism(Complex a, double phi);

/// Kobayashi distance of a polydisc: the largest coordinate distance after
/// scaling each coordinate to the unit disc.
double polydisc_distance(const CVector& z, const CVector& w, const std::vector<double>& radii);
double polydisc_distance(const CVector& z, const CVector& w);

/// Kobayashi distance of a Euclidean ball.
double ball_distance(const CVector& z, const CVector& w, const CVector& center, double radius);

struct MetricBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// ||v|| / (2 r) <= kappa(z; v) <= ||v|| / r with r = r(z; v).
MetricBounds graham_bounds(const ConvexDomainModel& domain, const CVector& z, const CVector& v);

// ---------------------------------------------------------------------------
// Candidate geodesics.

enum class CandidateTag { polydisc_explicit, ball_affine, custom };

std::string tag_name(CandidateTag tag);
CandidateTag parse_tag(const std::string& name);

struct GeodesicCandidate {
  UnitDiscFunction map;
  ConvexDomainModel domain;
  CandidateTag tag = CandidateTag::custom;

  /// Checks the dimensions and that the image of circles up to radius
  /// 0.999 lies in the domain.
  static GeodesicCandidate make(UnitDiscFunction map, ConvexDomainModel domain, CandidateTag tag);
};

/// (zeta, exp((1 + zeta) / (zeta - 1)) / 2) in the unit bidisc.
GeodesicCandidate nonextending_geodesic();

/// Comparison of p(zeta1, zeta2) with the Kobayashi distance of the images.
///
/// For polydiscs and balls the distance is exact and lower = upper. For
/// other models [lower, upper] encloses it: the upper end integrates the
/// Graham upper metric along the straight segment and along the image of
/// the hyperbolic segment, the lower end is the best half-plane projection
/// bound over a family of complex linear functionals.
struct GeodesicDefect {
  double disc_distance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  /// Distance from disc_distance to [lower, upper].
  double defect = 0.0;
};

GeodesicDefect geodesic_defect(const GeodesicCandidate& g, Complex zeta1, Complex zeta2);

// ---------------------------------------------------------------------------
// Boundary behaviour.

enum class ExtensionVerdict { extends, fails, inconclusive };

std::string verdict_name(ExtensionVerdict v);

struct ProbeOptions {
  int n_theta = 8192;
  std::vector<double> r_schedule = disc::default_radial_schedule();
  /// Empty selects h 2^j for j = 0..10 with h = 2 pi / n_theta.
  std::vector<double> deltas;
  double tol_ext = 1e-3;
  double radial_tol = 1e-6;
};

struct ProbeReport {
  ExtensionVerdict verdict = ExtensionVerdict::inconclusive;
  std::vector<double> deltas;
  std::vector<double> omegas;
  double omega_min_delta = 0.0;
  /// Smallest omega over the four finest deltas.
  double plateau = 0.0;
  double cauchy_fraction = 0.0;
};

/// Empirical modulus of the radial boundary values on the finest deltas.
///  - extends: omega(delta_min) < tol_ext and omega nondecreasing in delta
///    over the four finest deltas;
///  - fails: omega(delta_min) > 10 tol_ext and those four values stay
///    within a factor 3/4 of each other;
///  - inconclusive otherwise.
/// Deltas below the sample spacing are rejected.
ProbeReport boundary_extension_probe(const GeodesicCandidate& g, const ProbeOptions& options = {});

struct GrowthProfile {
  std::vector<double> gaps;            ///< 1 - r
  std::vector<double> max_derivative;  ///< max over theta of ||f'||
  /// max over theta of 4 r(f; f') / (1 - r); NaN when f' vanishes.
  std::vector<double> graham_bound;
  /// max over theta of ||f'|| - 4 r(f; f') / (1 - r).
  std::vector<double> bound_excess;
};

/// Uses the analytic derivative when present unless force_cauchy is set.
GrowthProfile derivative_growth_profile(const GeodesicCandidate& g, const std::vector<double>& r_grid,
                                        int n_theta, bool with_bound = true,
                                        bool force_cauchy = false);

struct MercerFit {
  double C1 = 0.0;
  double C2 = 0.0;
  double beta = 1.0;
  /// Largest violation of C1 (1 - r) <= d <= C2 (1 - r)^(1/beta) on the
  /// samples (0 when they hold).
  double residual = 0.0;
  /// The unconstrained slope asked for beta < 1.
  bool clamped = false;
  int samples = 0;
};

/// C1 = min d / (1 - r); the slope s = 1/beta is the least-squares slope of
/// log d against log(1 - r), capped at 1 (and snapped to 1 within 1e-12);
/// C2 = max d / (1 - r)^s. Samples are r_grid x n_theta equispaced angles.
MercerFit mercer_fit(const GeodesicCandidate& g, const std::vector<double>& r_grid, int n_theta = 16);

// ---------------------------------------------------------------------------
// The extension pipeline on the flat model.

struct PipelineOptions {
  std::vector<double> r_grid = {1.0 - 1.0 / 16, 1.0 - 1.0 / 32, 1.0 - 1.0 / 64, 1.0 - 1.0 / 128,
                                1.0 - 1.0 / 256, 1.0 - 1.0 / 512, 1.0 - 1.0 / 1024,
                                1.0 - 1.0 / 2048};
  int n_theta = 16;
  double properness_radius = 0.999;
  double properness_threshold = 0.05;
  /// Upper end of the majorant range, reduced below K2 when needed.
  double r0 = 0.5;
  /// Replaces the domain alpha in the majorant.
  std::optional<double> alpha_override;
  ProbeOptions probe;
};

enum class StageStatus { passed, failed, skipped, not_run };

std::string status_name(StageStatus s);

struct StageReport {
  std::string name;
  StageStatus status = StageStatus::not_run;
  std::string message;
};

struct PipelineReport {
  std::vector<StageReport> stages;
  double properness_max_distance = 0.0;
  int rest_points = 0;
  int rest_violations = 0;
  double rest_worst_margin = 0.0;
  MercerFit fit;
  double K1 = 0.0;
  double K2 = 0.0;
  double alpha = 0.0;
  double r0 = 0.0;
  /// max of ||f'|| - Phi(1 - r) on the fit grid inside the majorant range.
  double majorant_violation = 0.0;
  numerics::QuadratureResult l1;
  ProbeReport probe;

  bool all_passed() const;
};

/// Runs (i) properness, (ii) the inscribed-radius bound in the boundary
/// zone, (iii) the derivative majorant from the Mercer fit, (iv) its
/// integrability and (v) the extension probe. Stage failures stop the run
/// only at (i); thrown errors are rethrown prefixed with the stage name.
PipelineReport theorem_pipeline(const ConvexDomainModel& domain, const UnitDiscFunction& map,
                                const PipelineOptions& options = {});

/// zeta -> (R0 zeta, 0, ..., 0, i C phi_alpha(R0)), a proper disc in the flat
/// model ending on the rim of the graph.
UnitDiscFunction flat_model_disc(const geom::FlatSupport& support, int n = 2);

}  // namespace cxgeo::kob
