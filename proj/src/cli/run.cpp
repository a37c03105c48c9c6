#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>

#include "params.hpp"

namespace cxgeo::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

/// Non-finite doubles have no JSON literal; they are spelled out instead.
json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

int check_code(bool ok) { return ok ? 0 : 2; }

std::vector<double> angle_grid(int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(2.0 * kPi * k / n);
  return out;
}

int positive_int(const Params& p, const std::string& key, long long fallback, long long min = 1) {
  const long long v = p.integer(key, fallback);
  if (v < min || v > (1LL << 26)) {
    throw ConfigError("key '" + p.key_path(key) + "' is out of range");
  }
  return static_cast<int>(v);
}

using Handler = std::function<RunResult(const Params&, std::uint64_t)>;

RunResult hl_verify(const Params& p, std::uint64_t) {
  const auto f = build_map(p.object("map"));
  const auto phi = build_majorant(p.object("majorant"));
  const auto r_grid = p.numbers("r_grid");
  const auto angles = angle_grid(positive_int(p, "n_theta", 64));
  const double tol = p.number("tol", 0.0);
  p.finish();
  const auto check = hl::verify_majorant(f, phi, r_grid, angles);
  RunResult out;
  const bool holds = check.max_violation <= tol;
  out.report = {{"max_violation", check.max_violation}, {"worst_r", check.worst_r},
                {"worst_theta", check.worst_theta},     {"holds", holds},
                {"nonincreasing", phi.nonincreasing}};
  out.exit_code = check_code(holds);
  return out;
}

RunResult hl_bound(const Params& p, std::uint64_t) {
  const auto phi = build_majorant(p.object("majorant"));
  const double delta = p.number("delta");
  p.finish();
  const double w = hl::omega_bound(phi, delta);
  RunResult out;
  out.report = {{"omega_bound", number_json(w)}, {"diverged", !std::isfinite(w)}};
  out.exit_code = check_code(std::isfinite(w));
  return out;
}

RunResult hl_l1(const Params& p, std::uint64_t) {
  const auto phi = build_majorant(p.object("majorant"));
  const int n = positive_int(p, "n", 0, 0);
  const double tol = p.number("tol", 1e-10);
  p.finish();
  const auto q = hl::phi_log_l1(phi, n, tol);
  RunResult out;
  out.report = {{"value", q.value},
                {"converged", q.converged},
                {"refinement_levels", q.refinement_levels},
                {"estimated_error", number_json(q.estimated_error)}};
  out.exit_code = check_code(q.converged);
  return out;
}

RunResult mod_cont(const Params& p, std::uint64_t) {
  const auto f = build_map(p.object("map"));
  const int n = positive_int(p, "n", 1024, 16);
  const auto deltas = p.numbers("deltas");
  const auto schedule = p.numbers("r_schedule", disc::default_radial_schedule());
  const double tol = p.number("tol", 1e-6);
  p.finish();
  const auto samples = disc::boundary_samples(f, n, schedule, tol);
  const auto profile = disc::modulus_profile(samples, deltas);
  RunResult out;
  out.report = {{"cauchy_fraction", samples.cauchy_fraction},
                {"radius_used", samples.radius_used},
                {"deltas", profile.deltas},
                {"omegas", profile.omegas}};
  io::Table t{{"delta", "omega"}, {}};
  for (std::size_t i = 0; i < profile.deltas.size(); ++i) {
    t.rows.push_back({profile.deltas[i], profile.omegas[i]});
  }
  out.table = std::move(t);
  return out;
}

RunResult conjugate(const Params& p, std::uint64_t) {
  const int n = positive_int(p, "n", 512, 4);
  const auto a = p.numbers("cos", {});
  const auto b = p.numbers("sin", {});
  p.finish();
  auto g = [&](double theta) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::cos(k * theta);
    for (std::size_t k = 0; k < b.size(); ++k) s += b[k] * std::sin((k + 1) * theta);
    return s;
  };
  const auto samples = disc::BoundarySamples::from_real(g, n);
  const auto conj = disc::conjugate_function(samples);
  RunResult out;
  io::Table t{{"theta", "value", "conjugate"}, {}};
  std::vector<double> values;
  for (int k = 0; k < n; ++k) {
    const double v = conj.values[k](0).real();
    values.push_back(v);
    t.rows.push_back({samples.theta(k), samples.values[k](0).real(), v});
  }
  out.report = {{"n", n}, {"conjugate", values}};
  out.table = std::move(t);
  return out;
}

RunResult pz_bound(const Params& p, std::uint64_t) {
  const auto omega = build_modulus(p.object("modulus"));
  const double delta = p.number("delta");
  const double K = p.number("K", 1.0);
  p.finish();
  const double v = disc::pz_bound(omega, delta, K);
  RunResult out;
  out.report = {{"pz_bound", number_json(v)}, {"diverged", !std::isfinite(v)}};
  out.exit_code = check_code(std::isfinite(v));
  return out;
}

RunResult log_dini(const Params& p, std::uint64_t) {
  const auto omega = build_modulus(p.object("modulus"));
  const int n_max = positive_int(p, "n_max", 6, 0);
  const double tol = p.number("tol", 1e-10);
  p.finish();
  const auto rep = disc::log_dini_test(omega, n_max, tol);
  RunResult out;
  io::Table t{{"n", "value", "converged"}, {}};
  json per_n = json::array();
  for (std::size_t i = 0; i < rep.per_n.size(); ++i) {
    const auto& q = rep.per_n[i];
    t.rows.push_back({static_cast<long long>(i), q.value, std::string(q.converged ? "true" : "false")});
    per_n.push_back({{"n", i}, {"value", q.value}, {"converged", q.converged}});
  }
  out.report = {{"log_dini", rep.log_dini}, {"per_n", per_n}};
  out.report["first_divergent"] = rep.first_divergent ? json(*rep.first_divergent) : json(nullptr);
  out.table = std::move(t);
  out.exit_code = check_code(rep.log_dini);
  return out;
}

RunResult domain_distance(const Params& p, std::uint64_t) {
  const auto domain = build_domain(p.object("domain"));
  const CVector z = p.cvector("z");
  const std::string method = p.string("method", "auto");
  p.finish();
  double d = 0.0;
  if (method == "auto") {
    d = geom::boundary_distance(domain, z);
  } else if (method == "search") {
    d = geom::boundary_distance_search(domain, z);
  } else {
    throw ConfigError("key 'params.method' must be auto or search");
  }
  RunResult out;
  out.report = {{"distance", d}, {"domain", domain.kind_name()}};
  return out;
}

RunResult domain_radius(const Params& p, std::uint64_t) {
  const auto domain = build_domain(p.object("domain"));
  const CVector z = p.cvector("z");
  const CVector v = p.cvector("v");
  const int coarse = positive_int(p, "coarse_n", 64, 8);
  p.finish();
  RunResult out;
  out.report = {{"radius", geom::inscribed_disc_radius(domain, z, v, coarse)},
                {"domain", domain.kind_name()}};
  return out;
}

RunResult flat_x0(const Params& p, std::uint64_t) {
  const double C = p.number("C");
  const double alpha = p.number("alpha");
  const int scan_n = positive_int(p, "scan_n", 100000, 16);
  p.finish();
  RunResult out;
  out.report = {{"x0", geom::x0_cap(C, alpha, scan_n)}};
  return out;
}

RunResult flat_rho(const Params& p, std::uint64_t) {
  const double d = p.number("d");
  const double slope = p.number("slope");
  const double C = p.number("C");
  const double alpha = p.number("alpha");
  p.finish();
  RunResult out;
  out.report = {{"rho", geom::rho_triangle(d, slope, C, alpha)}};
  if (d < C) out.report["phi_inverse"] = geom::phi_alpha_inv(d, C, alpha);
  return out;
}

RunResult rest_check(const Params& p, std::uint64_t) {
  const auto domain = build_domain(p.object("domain"));
  const CVector z = p.cvector("z");
  const CVector v = p.cvector("v");
  const double tol = p.number("tol", 1e-9);
  p.finish();
  const auto rep = geom::rest_bound_check(domain, z, v, tol);
  RunResult out;
  out.report = {{"d", rep.d},           {"r", rep.r},         {"bound", rep.bound},
                {"margin", rep.margin}, {"holds", rep.holds}};
  out.exit_code = check_code(rep.holds);
  return out;
}

RunResult graham(const Params& p, std::uint64_t) {
  const auto domain = build_domain(p.object("domain"));
  const CVector z = p.cvector("z");
  const CVector v = p.cvector("v");
  p.finish();
  const auto b = kob::graham_bounds(domain, z, v);
  RunResult out;
  out.report = {{"lower", b.lower}, {"upper", b.upper}};
  return out;
}

RunResult geodesic_defect(const Params& p, std::uint64_t seed) {
  const auto g = build_candidate(p, "candidate");
  std::vector<std::pair<Complex, Complex>> pairs;
  if (p.has("pairs")) {
    const json& list = p.raw("pairs");
    if (!list.is_array()) throw ConfigError("key 'params.pairs' must be an array");
    for (const auto& item : list) {
      if (!item.is_array() || item.size() != 2) {
        throw ConfigError("key 'params.pairs' entries must be [zeta1, zeta2]");
      }
      pairs.emplace_back(complex_from(item[0], "params.pairs"), complex_from(item[1], "params.pairs"));
    }
  } else {
    const int n_pairs = positive_int(p, "n_pairs", 100);
    const double radius = p.number("radius", 0.95);
    if (!(radius > 0.0 && radius < 1.0)) throw ConfigError("key 'params.radius' must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] { return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng)); };
    for (int i = 0; i < n_pairs; ++i) {
      const Complex a = draw();
      const Complex b = draw();
      pairs.emplace_back(a, b);
    }
  }
  const double tol = p.number("tol", 1e-10);
  p.finish();

  RunResult out;
  io::Table t{{"zeta1_re", "zeta1_im", "zeta2_re", "zeta2_im", "disc_distance", "lower", "upper",
               "defect"},
              {}};
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const auto d = kob::geodesic_defect(g, a, b);
    worst = std::max(worst, d.defect);
    t.rows.push_back({a.real(), a.imag(), b.real(), b.imag(), d.disc_distance, d.lower, d.upper,
                      d.defect});
  }
  out.report = {{"pairs", pairs.size()},
                {"max_defect", worst},
                {"tag", kob::tag_name(g.tag)},
                {"holds", worst <= tol}};
  out.table = std::move(t);
  out.exit_code = check_code(worst <= tol);
  return out;
}

kob::ProbeOptions probe_options(const Params& p, const std::string& n_key) {
  kob::ProbeOptions o;
  o.n_theta = positive_int(p, n_key, o.n_theta, 16);
  o.deltas = p.numbers("deltas", {});
  o.tol_ext = p.number("tol_ext", o.tol_ext);
  o.r_schedule = p.numbers("r_schedule", o.r_schedule);
  return o;
}

json probe_json(const kob::ProbeReport& r) {
  return {{"verdict", kob::verdict_name(r.verdict)},
          {"omega_min_delta", r.omega_min_delta},
          {"plateau", r.plateau},
          {"cauchy_fraction", r.cauchy_fraction},
          {"deltas", r.deltas},
          {"omegas", r.omegas}};
}

RunResult geodesic_probe(const Params& p, std::uint64_t) {
  const auto g = build_candidate(p, "candidate");
  const auto options = probe_options(p, "n_theta");
  p.finish();
  const auto rep = kob::boundary_extension_probe(g, options);
  RunResult out;
  out.report = probe_json(rep);
  io::Table t{{"delta", "omega"}, {}};
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) t.rows.push_back({rep.deltas[i], rep.omegas[i]});
  out.table = std::move(t);
  out.exit_code = rep.verdict == kob::ExtensionVerdict::fails ? 2 : 0;
  return out;
}

RunResult mercer(const Params& p, std::uint64_t) {
  const auto g = build_candidate(p, "candidate");
  const auto r_grid = p.numbers("r_grid");
  const int n_theta = positive_int(p, "n_theta", 16);
  p.finish();
  const auto fit = kob::mercer_fit(g, r_grid, n_theta);
  RunResult out;
  out.report = {{"C1", fit.C1},           {"C2", fit.C2},           {"beta", fit.beta},
                {"residual", fit.residual}, {"clamped", fit.clamped}, {"samples", fit.samples}};
  return out;
}

RunResult pipeline(const Params& p, std::uint64_t) {
  const auto domain = build_domain(p.object("domain"));
  const auto map = build_map(p.object("map"));
  kob::PipelineOptions o;
  o.r_grid = p.numbers("r_grid", o.r_grid);
  o.n_theta = positive_int(p, "n_theta", o.n_theta);
  o.r0 = p.number("r0", o.r0);
  if (p.has("alpha_override")) o.alpha_override = p.number("alpha_override");
  o.probe = probe_options(p, "n_theta_probe");
  p.finish();

  const auto rep = kob::theorem_pipeline(domain, map, o);
  json stages = json::array();
  io::Table t{{"stage", "status", "message"}, {}};
  for (const auto& s : rep.stages) {
    stages.push_back({{"name", s.name}, {"status", kob::status_name(s.status)}, {"message", s.message}});
    t.rows.push_back({s.name, kob::status_name(s.status), s.message});
  }
  RunResult out;
  out.report = {{"stages", stages},
                {"all_passed", rep.all_passed()},
                {"properness_max_distance", rep.properness_max_distance},
                {"rest_points", rep.rest_points},
                {"rest_violations", rep.rest_violations},
                {"rest_worst_margin", rep.rest_worst_margin},
                {"mercer", {{"C1", rep.fit.C1}, {"C2", rep.fit.C2}, {"beta", rep.fit.beta},
                            {"residual", rep.fit.residual}}},
                {"K1", rep.K1},
                {"K2", rep.K2},
                {"alpha", rep.alpha},
                {"r0", rep.r0},
                {"majorant_violation", rep.majorant_violation},
                {"l1_value", rep.l1.value},
                {"l1_converged", rep.l1.converged},
                {"probe", probe_json(rep.probe)}};
  out.table = std::move(t);
  out.exit_code = check_code(rep.all_passed());
  return out;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"hl-verify", hl_verify},
      {"hl-bound", hl_bound},
      {"hl-l1", hl_l1},
      {"mod-cont", mod_cont},
      {"conjugate", conjugate},
      {"pz-bound", pz_bound},
      {"log-dini", log_dini},
      {"domain-distance", domain_distance},
      {"domain-radius", domain_radius},
      {"flat-x0", flat_x0},
      {"flat-rho", flat_rho},
      {"rest-check", rest_check},
      {"graham", graham},
      {"geodesic-defect", geodesic_defect},
      {"geodesic-probe", geodesic_probe},
      {"mercer-fit", mercer},
      {"pipeline", pipeline}};
  return table;
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult out;
  try {
    const auto it = handlers().find(config.command);
    if (it == handlers().end()) throw ConfigError("key 'command' has unknown value '" + config.command + "'");
    const Params params(config.params, "params");
    out = it->second(params, config.seed);
  } catch (const std::exception& e) {
    out = RunResult{};
    out.exit_code = 1;
    out.diagnostic = e.what();
    out.report = {{"error", out.diagnostic}};
  }
  json full = {{"command", config.command}, {"seed", config.seed}, {"exit_code", out.exit_code}};
  full.update(out.report);
  out.report = std::move(full);
  return out;
}

std::string render(const RunResult& result, Format format) {
  if (format == Format::json) return result.report.dump(2) + "\n";
  if (result.table) return io::to_csv(*result.table);
  // Scalar fields as key,value rows.
  io::Table t{{"key", "value"}, {}};
  for (const auto& item : result.report.items()) {
    const json& v = item.value();
    if (v.is_number_integer()) {
      t.rows.push_back({item.key(), static_cast<long long>(v.get<std::int64_t>())});
    } else if (v.is_number()) {
      t.rows.push_back({item.key(), v.get<double>()});
    } else if (v.is_string()) {
      t.rows.push_back({item.key(), v.get<std::string>()});
    } else if (v.is_boolean()) {
      t.rows.push_back({item.key(), std::string(v.get<bool>() ? "true" : "false")});
    }
  }
  return io::to_csv(t);
}

int execute(const RunConfig& config) {
  RunResult result = run(config);
  if (!result.diagnostic.empty()) std::cerr << "error: " << result.diagnostic << "\n";
  const std::string text = render(result, config.format);
  try {
    if (config.output.empty()) {
      std::cout << text;
    } else {
      io::write_atomic(config.output, text);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return result.exit_code;
}

}  // namespace cxgeo::cli
