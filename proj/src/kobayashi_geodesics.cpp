#include "cxgeo/kobayashi_geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "cxgeo/error.hpp"

namespace cxgeo::kob {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double one_minus_sq(double x) { return (1.0 - x) * (1.0 + x); }

void require_in_disc(Complex z) {
  if (!(std::abs(z) < 1.0)) throw Error("point outside the unit disc");
}

CVector derivative_of(const UnitDiscFunction& f, Complex zeta, bool force_cauchy = false) {
  if (f.has_derivative() && !force_cauchy) return f.derivative(zeta);
  return disc::derivative_cauchy(f, zeta);
}

// Composite 20-point Gauss-Legendre on [0, 1].
template <class F>
double integrate_unit(F&& f, int panels) {
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    sum += boost::math::quadrature::gauss<double, 20>::integrate(
        f, static_cast<double>(k) / panels, static_cast<double>(k + 1) / panels);
  }
  return sum;
}

double upper_metric_length(const ConvexDomainModel& domain,
                           const std::function<std::pair<CVector, CVector>(double)>& path) {
  constexpr int kPanels = 4;
  return integrate_unit(
      [&](double t) {
        const auto [z, dz] = path(t);
        const double speed = dz.norm();
        if (speed == 0.0) return 0.0;
        return speed / geom::inscribed_disc_radius(domain, z, dz);
      },
      kPanels);
}

/// Distance in {Re lambda < h} between two of its points, normalized like
/// the disc.
double halfplane_distance(Complex l1, Complex l2, double h) {
  const Complex m1 = h - l1;
  const Complex m2 = h - l2;
  if (!(m1.real() > 0.0) || !(m2.real() > 0.0)) return 0.0;
  const double x = std::abs(m1 - m2) / std::abs(m1 + std::conj(m2));
  return std::atanh(std::min(x, 1.0 - std::numeric_limits<double>::epsilon()));
}

double projection_lower_bound(const ConvexDomainModel& domain, const CVector& z1, const CVector& z2) {
  const Eigen::Index n = z1.size();
  std::vector<CVector> bases;
  if ((z2 - z1).norm() > 0.0) bases.push_back(z2 - z1);
  for (Eigen::Index j = 0; j < n; ++j) {
    CVector e = CVector::Zero(n);
    e(j) = 1.0;
    bases.push_back(e);
  }
  constexpr int kPhases = 32;
  double best = 0.0;
  for (const auto& base : bases) {
    for (int k = 0; k < kPhases; ++k) {
      const CVector a = std::polar(1.0, 2.0 * kPi * k / kPhases) * base;
      const double h = geom::support_function(domain, a);
      best = std::max(best, halfplane_distance(a.dot(z1), a.dot(z2), h));
    }
  }
  return best;
}

ExtensionVerdict classify(const std::vector<double>& omegas, double tol_ext) {
  // omegas are ordered by increasing delta.
  const double w_min = omegas.front();
  bool monotone = true;
  for (std::size_t i = 1; i < 4; ++i) monotone = monotone && omegas[i] >= omegas[i - 1];
  if (w_min < tol_ext && monotone) return ExtensionVerdict::extends;
  const double lo = *std::min_element(omegas.begin(), omegas.begin() + 4);
  const double hi = *std::max_element(omegas.begin(), omegas.begin() + 4);
  if (w_min > 10.0 * tol_ext && lo >= 0.75 * hi) return ExtensionVerdict::fails;
  return ExtensionVerdict::inconclusive;
}

}  // namespace

double poincare_distance(Complex z1, Complex z2) {
  require_in_disc(z1);
  require_in_disc(z2);
  const double num = std::abs(z1 - z2);
  if (num == 0.0) return 0.0;
  const double den = std::abs(1.0 - std::conj(z2) * z1);
  // artanh(num / den), using den^2 - num^2 = (1 - |z1|^2)(1 - |z2|^2).
  return std::log(den + num) - 0.5 * std::log(one_minus_sq(std::abs(z1))) -
         0.5 * std::log(one_minus_sq(std::abs(z2)));
}

double poincare_metric(Complex zeta, Complex v) {
  require_in_disc(zeta);
  return std::abs(v) / one_minus_sq(std::abs(zeta));
}

UnitDiscFunction disc_automorphism(Complex a, double phi) {
  if (!(std::abs(a) < 1.0)) throw Error("automorphism needs |a| < 1");
  const Complex rot = std::polar(1.0, phi);
  const double scale = one_minus_sq(std::abs(a));
  return disc::scalar_function(
      [a, rot](Complex z) { return rot * (z - a) / (1.0 - std::conj(a) * z); },
      [a, rot, scale](Complex z) {
        const Complex den = 1.0 - std::conj(a) * z;
        return rot * scale / (den * den);
      });
}

double polydisc_distance(const CVector& z, const CVector& w, const std::vector<double>& radii) {
  if (z.size() != w.size() || z.size() != static_cast<Eigen::Index>(radii.size())) {
    throw Error("dimension mismatch");
  }
  double d = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const Complex a = z(i) / radii[i];
    const Complex b = w(i) / radii[i];
    if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) throw Error("point outside polydisc");
    d = std::max(d, poincare_distance(a, b));
  }
  return d;
}

double polydisc_distance(const CVector& z, const CVector& w) {
  return polydisc_distance(z, w, std::vector<double>(static_cast<std::size_t>(z.size()), 1.0));
}

double ball_distance(const CVector& z, const CVector& w, const CVector& center, double radius) {
  const CVector a = (z - center) / radius;
  const CVector b = (w - center) / radius;
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na < 1.0) || !(nb < 1.0)) throw Error("point outside ball");
  if ((a - b).norm() == 0.0) return 0.0;
  const Complex ab = b.dot(a);
  // 1 - x^2 with x the pseudo-distance.
  const double q = one_minus_sq(na) * one_minus_sq(nb) / std::norm(1.0 - ab);
  const double x = std::sqrt(std::max(0.0, 1.0 - q));
  return std::log1p(x) - 0.5 * std::log(q);
}

MetricBounds graham_bounds(const ConvexDomainModel& domain, const CVector& z, const CVector& v) {
  if (!domain.contains(z)) throw Error("base point outside domain");
  const double vn = v.norm();
  if (vn == 0.0) return {0.0, 0.0};
  const double r = geom::inscribed_disc_radius(domain, z, v);
  return {vn / (2.0 * r), vn / r};
}

std::string tag_name(CandidateTag tag) {
  switch (tag) {
    case CandidateTag::polydisc_explicit: return "polydisc_explicit";
    case CandidateTag::ball_affine: return "ball_affine";
    case CandidateTag::custom: return "custom";
  }
  return "custom";
}

CandidateTag parse_tag(const std::string& name) {
  if (name == "polydisc_explicit") return CandidateTag::polydisc_explicit;
  if (name == "ball_affine") return CandidateTag::ball_affine;
  if (name == "custom") return CandidateTag::custom;
  throw Error("unknown candidate tag '" + name + "'");
}

GeodesicCandidate GeodesicCandidate::make(UnitDiscFunction map, ConvexDomainModel domain,
                                          CandidateTag tag) {
  if (map.dimension != domain.dimension()) throw Error("map and domain dimensions differ");
  constexpr int kAngles = 64;
  for (double r : {0.0, 0.5, 0.9, 0.99, 0.999}) {
    for (int k = 0; k < kAngles; ++k) {
      if (!domain.contains(map(std::polar(r, 2.0 * kPi * k / kAngles)))) {
        throw Error("image outside domain");
      }
    }
  }
  return GeodesicCandidate{std::move(map), std::move(domain), tag};
}

GeodesicCandidate nonextending_geodesic() {
  return GeodesicCandidate::make(disc::stack({disc::identity_map(), disc::singular_inner_map(0.5)}),
                                 ConvexDomainModel::unit_polydisc(2),
                                 CandidateTag::polydisc_explicit);
}

GeodesicDefect geodesic_defect(const GeodesicCandidate& g, Complex zeta1, Complex zeta2) {
  GeodesicDefect out;
  out.disc_distance = poincare_distance(zeta1, zeta2);
  const CVector z1 = g.map(zeta1);
  const CVector z2 = g.map(zeta2);
  if (!g.domain.contains(z1) || !g.domain.contains(z2)) throw Error("image outside domain");

  if (const auto* p = std::get_if<geom::Polydisc>(&g.domain.shape())) {
    out.lower = out.upper = polydisc_distance(z1, z2, p->radii);
    out.exact = true;
  } else if (const auto* b = std::get_if<geom::Ball>(&g.domain.shape())) {
    out.lower = out.upper = ball_distance(z1, z2, b->center, b->radius);
    out.exact = true;
  } else if ((z2 - z1).norm() == 0.0) {
    out.exact = true;
  } else {
    const CVector step = z2 - z1;
    const double straight = upper_metric_length(
        g.domain, [&](double t) { return std::make_pair(CVector(z1 + t * step), step); });
    // Image of the hyperbolic segment: t -> m^-1(t m(zeta2)) with m the
    // automorphism sending zeta1 to 0.
    const Complex w = (zeta2 - zeta1) / (1.0 - std::conj(zeta1) * zeta2);
    const double s = one_minus_sq(std::abs(zeta1));
    const double along_image = upper_metric_length(g.domain, [&](double t) {
      const Complex den = 1.0 + std::conj(zeta1) * t * w;
      const Complex gamma = (t * w + zeta1) / den;
      const Complex dgamma = w * s / (den * den);
      return std::make_pair(g.map(gamma), CVector(derivative_of(g.map, gamma) * dgamma));
    });
    out.upper = std::min(straight, along_image);
    out.lower = std::min(projection_lower_bound(g.domain, z1, z2), out.upper);
  }
  const double p = out.disc_distance;
  out.defect = p < out.lower ? out.lower - p : (p > out.upper ? p - out.upper : 0.0);
  return out;
}

std::string verdict_name(ExtensionVerdict v) {
  switch (v) {
    case ExtensionVerdict::extends: return "extends";
    case ExtensionVerdict::fails: return "fails";
    case ExtensionVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ProbeReport boundary_extension_probe(const GeodesicCandidate& g, const ProbeOptions& options) {
  if (options.n_theta < 16) throw Error("probe needs at least 16 angles");
  if (!(options.tol_ext > 0.0)) throw Error("tol_ext must be positive");
  const double h = 2.0 * kPi / options.n_theta;
  ProbeReport report;
  report.deltas = options.deltas;
  if (report.deltas.empty()) {
    for (int j = 0; j <= 10; ++j) report.deltas.push_back(h * std::ldexp(1.0, j));
  }
  if (report.deltas.size() < 4) throw Error("probe needs at least 4 deltas");
  if (!std::is_sorted(report.deltas.begin(), report.deltas.end())) {
    throw Error("probe deltas must increase");
  }
  if (report.deltas.front() < h * (1.0 - 1e-12)) throw Error("delta finer than the sample spacing");

  const auto samples = disc::boundary_samples(g.map, options.n_theta, options.r_schedule,
                                              options.radial_tol);
  const auto profile = disc::modulus_profile(samples, report.deltas);
  report.omegas = profile.omegas;
  report.cauchy_fraction = samples.cauchy_fraction;
  report.omega_min_delta = report.omegas.front();
  report.plateau = *std::min_element(report.omegas.begin(), report.omegas.begin() + 4);
  report.verdict = classify(report.omegas, options.tol_ext);
  return report;
}

GrowthProfile derivative_growth_profile(const GeodesicCandidate& g, const std::vector<double>& r_grid,
                                        int n_theta, bool with_bound, bool force_cauchy) {
  if (n_theta < 1) throw Error("n_theta must be positive");
  GrowthProfile out;
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) throw Error("radius outside (0, 1)");
    double max_d = 0.0;
    double max_bound = kNaN;
    double max_excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_theta; ++k) {
      const Complex zeta = std::polar(r, 2.0 * kPi * k / n_theta);
      const CVector d = derivative_of(g.map, zeta, force_cauchy);
      const double dn = d.norm();
      max_d = std::max(max_d, dn);
      if (with_bound && dn > 0.0) {
        const double bound =
            4.0 * geom::inscribed_disc_radius(g.domain, g.map(zeta), d) / (1.0 - r);
        max_bound = std::isnan(max_bound) ? bound : std::max(max_bound, bound);
        max_excess = std::max(max_excess, dn - bound);
      }
    }
    out.gaps.push_back(1.0 - r);
    out.max_derivative.push_back(max_d);
    out.graham_bound.push_back(max_bound);
    out.bound_excess.push_back(std::isfinite(max_excess) ? max_excess : kNaN);
  }
  return out;
}

MercerFit mercer_fit(const GeodesicCandidate& g, const std::vector<double>& r_grid, int n_theta) {
  if (r_grid.size() < 8) throw Error("mercer fit needs at least 8 radii");
  if (n_theta < 1) throw Error("n_theta must be positive");
  std::vector<double> xs;
  std::vector<double> ds;
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) throw Error("radius outside (0, 1)");
    for (int k = 0; k < n_theta; ++k) {
      const double d = geom::boundary_distance(g.domain, g.map(std::polar(r, 2.0 * kPi * k / n_theta)));
      if (!(d > 0.0)) throw Error("image touches boundary");
      xs.push_back(1.0 - r);
      ds.push_back(d);
    }
  }
  const std::size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(xs[i]);
    my += std::log(ds[i]);
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ds[i]) - my);
  }
  if (!(sxx > 0.0)) throw Error("mercer fit needs distinct radii");
  double slope = sxy / sxx;

  MercerFit fit;
  fit.samples = static_cast<int>(m);
  if (!(slope > 0.0)) throw Error("distance does not decay along the grid");
  if (std::abs(slope - 1.0) <= 1e-12) {
    slope = 1.0;
  } else if (slope > 1.0) {
    slope = 1.0;
    fit.clamped = true;
  }
  fit.beta = 1.0 / slope;
  fit.C1 = std::numeric_limits<double>::infinity();
  fit.C2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    fit.C1 = std::min(fit.C1, ds[i] / xs[i]);
    fit.C2 = std::max(fit.C2, ds[i] / std::pow(xs[i], slope));
  }
  for (std::size_t i = 0; i < m; ++i) {
    fit.residual = std::max({fit.residual, fit.C1 * xs[i] - ds[i],
                             ds[i] - fit.C2 * std::pow(xs[i], slope)});
  }
  return fit;
}

std::string status_name(StageStatus s) {
  switch (s) {
    case StageStatus::passed: return "passed";
    case StageStatus::failed: return "failed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::not_run: return "not_run";
  }
  return "not_run";
}

bool PipelineReport::all_passed() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageReport& s) {
    return s.status == StageStatus::passed || s.status == StageStatus::skipped;
  });
}

UnitDiscFunction flat_model_disc(const geom::FlatSupport& support, int n) {
  if (n < 2) throw Error("flat model needs n >= 2");
  std::vector<UnitDiscFunction> parts;
  parts.push_back(disc::polynomial_map({Complex(0.0), Complex(support.R0)}));
  for (int j = 1; j < n - 1; ++j) parts.push_back(disc::constant_map(0.0));
  parts.push_back(
      disc::constant_map(Complex(0.0, support.C * geom::phi_alpha(support.R0, support.alpha))));
  return disc::stack(parts);
}

PipelineReport theorem_pipeline(const ConvexDomainModel& domain, const UnitDiscFunction& map,
                                const PipelineOptions& options) {
  const geom::FlatSupport* support = domain.flat_support();
  if (!support) throw Error("pipeline requires a flat model");
  PipelineReport report;
  report.stages = {{"properness", StageStatus::not_run, ""},
                   {"rest_bound", StageStatus::not_run, ""},
                   {"majorant", StageStatus::not_run, ""},
                   {"integrability", StageStatus::not_run, ""},
                   {"extension_probe", StageStatus::not_run, ""}};
  auto tagged = [](const std::string& stage, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      throw Error("stage " + stage + ": " + e.what());
    }
  };

  std::optional<GeodesicCandidate> candidate;
  tagged("(i) properness", [&] {
    candidate = GeodesicCandidate::make(map, domain, CandidateTag::custom);
    const double r = options.properness_radius;
    double worst = 0.0;
    for (int k = 0; k < options.n_theta; ++k) {
      worst = std::max(worst, geom::boundary_distance(
                                  domain, map(std::polar(r, 2.0 * kPi * k / options.n_theta))));
    }
    report.properness_max_distance = worst;
    auto& st = report.stages[0];
    st.status = worst < options.properness_threshold ? StageStatus::passed : StageStatus::failed;
    st.message = st.status == StageStatus::passed ? "distance to boundary small on the test circle"
                                                  : "map is not proper";
  });
  if (report.stages[0].status != StageStatus::passed) return report;

  tagged("(ii) rest bound", [&] {
    const double zone = std::min(support->s0, geom::x0_cap(support->C, support->alpha));
    report.rest_worst_margin = std::numeric_limits<double>::infinity();
    for (double r : options.r_grid) {
      for (int k = 0; k < options.n_theta; ++k) {
        const Complex zeta = std::polar(r, 2.0 * kPi * k / options.n_theta);
        const CVector z = map(zeta);
        const double d = geom::boundary_distance(domain, z);
        if (!(d > 0.0 && d < zone)) continue;
        const CVector v = derivative_of(map, zeta);
        if (v.norm() == 0.0) continue;
        const auto check = geom::rest_bound_check(domain, z, v);
        ++report.rest_points;
        if (!check.holds) ++report.rest_violations;
        report.rest_worst_margin = std::min(report.rest_worst_margin, check.margin);
      }
    }
    auto& st = report.stages[1];
    if (report.rest_points == 0) {
      st.status = StageStatus::skipped;
      st.message = "no sample in the boundary zone";
      report.rest_worst_margin = 0.0;
    } else {
      st.status = report.rest_violations == 0 ? StageStatus::passed : StageStatus::failed;
      st.message = std::to_string(report.rest_violations) + " of " +
                   std::to_string(report.rest_points) + " samples violate the bound";
    }
  });

  hl::Majorant phi;
  tagged("(iii) majorant", [&] {
    report.fit = mercer_fit(*candidate, options.r_grid, options.n_theta);
    report.alpha = options.alpha_override.value_or(support->alpha);
    report.K1 = 4.0 * std::pow(report.fit.beta, 1.0 / report.alpha);
    report.K2 = std::pow(support->C / report.fit.C2, report.fit.beta);
    report.r0 = std::min({options.r0, 0.5 * report.K2, 0.5});
    const auto family = hl::DerivMajorantFamily::make(report.K1, report.K2, report.alpha, report.r0);
    phi = family.majorant();
    std::vector<double> radii;
    for (double r : options.r_grid) {
      if (1.0 - r < report.r0) radii.push_back(r);
    }
    std::vector<double> angles;
    for (int k = 0; k < options.n_theta; ++k) angles.push_back(2.0 * kPi * k / options.n_theta);
    auto& st = report.stages[2];
    if (radii.empty()) {
      st.status = StageStatus::skipped;
      st.message = "no fit radius inside the majorant range";
      return;
    }
    report.majorant_violation = hl::verify_majorant(map, phi, radii, angles).max_violation;
    st.status = report.majorant_violation <= 0.0 ? StageStatus::passed : StageStatus::failed;
    st.message = st.status == StageStatus::passed ? "derivative below the majorant on the grid"
                                                  : "derivative exceeds the majorant on the grid";
  });

  tagged("(iv) integrability", [&] {
    report.l1 = hl::phi_log_l1(phi, 0);
    auto& st = report.stages[3];
    st.status = report.l1.converged ? StageStatus::passed : StageStatus::failed;
    st.message = report.l1.converged ? "majorant integrable" : "majorant not integrable";
  });

  tagged("(v) extension probe", [&] {
    report.probe = boundary_extension_probe(*candidate, options.probe);
    auto& st = report.stages[4];
    st.status = report.probe.verdict == ExtensionVerdict::extends ? StageStatus::passed
                                                                   : StageStatus::failed;
    st.message = verdict_name(report.probe.verdict);
  });
  return report;
}

}  // namespace cxgeo::kob
