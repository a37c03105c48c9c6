#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "params.hpp"

namespace cxgeo::cli {

using nlohmann::json;

Params::Params(const json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) throw ConfigError("key '" + path_ + "' must be an object");
}

std::string Params::key_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool Params::has(const std::string& key) const { return object_.contains(key); }

const json& Params::at(const std::string& key) const {
  if (!object_.contains(key)) throw ConfigError("missing key '" + key_path(key) + "'");
  used_.insert(key);
  return object_.at(key);
}

double Params::number(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError("key '" + key_path(key) + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("key '" + key_path(key) + "' must be finite");
  return x;
}

double Params::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long Params::integer(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError("key '" + key_path(key) + "' must be an integer");
  return v.get<long long>();
}

long long Params::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Params::string(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError("key '" + key_path(key) + "' must be a string");
  return v.get<std::string>();
}

std::string Params::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool Params::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError("key '" + key_path(key) + "' must be a boolean");
  return v.get<bool>();
}

Complex complex_from(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("key '" + path + "' must be a complex number [re, im]");
}

Complex Params::complex(const std::string& key) const { return complex_from(at(key), key_path(key)); }

CVector Params::cvector(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array() || v.empty()) throw ConfigError("key '" + key_path(key) + "' must be a nonempty array");
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = complex_from(v[i], key_path(key));
  }
  return out;
}

std::vector<double> Params::numbers(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError("key '" + key_path(key) + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("key '" + key_path(key) + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> Params::numbers(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

const json& Params::raw(const std::string& key) const { return at(key); }

Params Params::object(const std::string& key) const { return Params(at(key), key_path(key)); }

void Params::finish() const {
  for (const auto& item : object_.items()) {
    if (!used_.count(item.key())) throw ConfigError("unknown key '" + key_path(item.key()) + "'");
  }
}

disc::UnitDiscFunction build_map(const Params& node) {
  const std::string kind = node.string("kind");
  disc::UnitDiscFunction f;
  if (kind == "identity") {
    f = disc::identity_map();
  } else if (kind == "constant") {
    f = disc::constant_map(node.complex("value"));
  } else if (kind == "polynomial") {
    const CVector c = node.cvector("coeffs");
    f = disc::polynomial_map(std::vector<Complex>(c.data(), c.data() + c.size()));
  } else if (kind == "singular_inner") {
    f = disc::singular_inner_map(node.number("scale", 1.0));
  } else if (kind == "automorphism") {
    f = kob::disc_automorphism(node.complex("a"), node.number("phi", 0.0));
  } else if (kind == "nonextending_geodesic") {
    f = kob::nonextending_geodesic().map;
  } else if (kind == "flat_disc") {
    const auto s = geom::FlatSupport::make(node.number("C", 1.0), node.number("alpha", 0.5),
                                           node.number("R0", 0.0), node.number("s0", 0.1));
    f = kob::flat_model_disc(s, static_cast<int>(node.integer("n", 2)));
  } else if (kind == "stack") {
    const json& comps = node.raw("components");
    if (!comps.is_array() || comps.empty()) {
      throw ConfigError("key '" + node.key_path("components") + "' must be a nonempty array");
    }
    std::vector<disc::UnitDiscFunction> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      Params sub(comps[i], node.key_path("components") + "[" + std::to_string(i) + "]");
      parts.push_back(build_map(sub));
    }
    f = disc::stack(parts);
  } else {
    throw ConfigError("key '" + node.key_path("kind") + "' has unknown map kind '" + kind + "'");
  }
  node.finish();
  return f;
}

geom::ConvexDomainModel build_domain(const Params& node) {
  const std::string kind = node.string("kind");
  auto finish = [&](geom::ConvexDomainModel m) {
    node.finish();
    return m;
  };
  if (kind == "polydisc") {
    if (node.has("radii")) return finish(geom::ConvexDomainModel::polydisc(node.numbers("radii")));
    return finish(geom::ConvexDomainModel::unit_polydisc(static_cast<int>(node.integer("n"))));
  }
  if (kind == "ball") {
    return finish(geom::ConvexDomainModel::ball(node.cvector("center"), node.number("radius", 1.0)));
  }
  if (kind == "halfspaces") {
    const json& list = node.raw("halfspaces");
    if (!list.is_array()) {
      throw ConfigError("key '" + node.key_path("halfspaces") + "' must be an array");
    }
    std::vector<geom::Halfspace> hs;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Params sub(list[i], node.key_path("halfspaces") + "[" + std::to_string(i) + "]");
      hs.push_back({sub.cvector("a"), sub.number("b")});
      sub.finish();
    }
    return finish(geom::ConvexDomainModel::halfspace_intersection(std::move(hs)));
  }
  if (kind == "flat_model") {
    const auto s = geom::FlatSupport::make(node.number("C", 1.0), node.number("alpha", 0.5),
                                           node.number("R0", 0.0), node.number("s0", 0.1));
    return finish(geom::ConvexDomainModel::flat_model(s, static_cast<int>(node.integer("n", 2))));
  }
  throw ConfigError("key '" + node.key_path("kind") + "' has unknown domain kind '" + kind + "'");
}

hl::Majorant build_majorant(const Params& node) {
  const std::string kind = node.string("kind");
  hl::Majorant m;
  if (kind == "constant") {
    m = hl::constant_majorant(node.number("value"), node.number("r0", 0.5));
  } else if (kind == "power") {
    m = hl::power_majorant(node.number("coeff"), node.number("exponent"), node.number("r0", 0.5));
  } else if (kind == "deriv_family") {
    m = hl::DerivMajorantFamily::make(node.number("K1"), node.number("K2"), node.number("alpha"),
                                      node.number("r0", 0.5))
            .majorant();
  } else {
    throw ConfigError("key '" + node.key_path("kind") + "' has unknown majorant kind '" + kind + "'");
  }
  node.finish();
  return m;
}

disc::ModulusFunction build_modulus(const Params& node) {
  const std::string kind = node.string("kind");
  disc::ModulusFamily family;
  if (kind == "holder") {
    family = disc::ModulusFamily::holder(node.number("a"));
  } else if (kind == "log_reciprocal") {
    family = disc::ModulusFamily::log_reciprocal();
  } else if (kind == "stretched_exponential") {
    family = disc::ModulusFamily::stretched_exponential(node.number("Cc", 1.0), node.number("epsilon"));
  } else {
    throw ConfigError("key '" + node.key_path("kind") + "' has unknown modulus kind '" + kind + "'");
  }
  node.finish();
  return disc::ModulusFunction::from(family);
}

kob::GeodesicCandidate build_candidate(const Params& parent, const std::string& key) {
  const json& v = parent.raw(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "nonextending_geodesic") return kob::nonextending_geodesic();
    throw ConfigError("key '" + parent.key_path(key) + "' names an unknown candidate");
  }
  const Params node = parent.object(key);
  auto map = build_map(node.object("map"));
  auto domain = build_domain(node.object("domain"));
  const auto tag = kob::parse_tag(node.string("tag", "custom"));
  node.finish();
  return kob::GeodesicCandidate::make(std::move(map), std::move(domain), tag);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "hl-verify",       "hl-bound",       "hl-l1",       "mod-cont",      "conjugate",
      "pz-bound",        "log-dini",       "domain-distance", "domain-radius", "flat-x0",
      "flat-rho",        "rest-check",     "graham",      "geodesic-defect", "geodesic-probe",
      "mercer-fit",      "pipeline"};
  return names;
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ConfigError("key 'format' must be csv or json");
}

RunConfig parse_config(const json& doc) {
  const Params top(doc, "");
  RunConfig config;
  config.command = top.string("command");
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), config.command) == names.end()) {
    throw ConfigError("key 'command' has unknown value '" + config.command + "'");
  }
  if (top.has("params")) {
    const json& p = top.raw("params");
    if (!p.is_object()) throw ConfigError("key 'params' must be an object");
    config.params = p;
  }
  if (top.has("seed")) {
    const json& s = top.raw("seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      throw ConfigError("key 'seed' must be a nonnegative integer");
    }
    config.seed = s.get<std::uint64_t>();
  }
  config.format = parse_format(top.string("format", "json"));
  config.output = top.string("output", "");
  top.finish();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace cxgeo::cli
