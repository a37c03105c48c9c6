#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxgeo/cli/cli.hpp"
#include "cxgeo/convex_geometry.hpp"
#include "cxgeo/disc_analysis.hpp"
#include "cxgeo/hardy_littlewood.hpp"
#include "cxgeo/kobayashi_geodesics.hpp"
#include "cxgeo/types.hpp"

namespace cxgeo::cli {

/// Typed access to a JSON object that remembers which keys were read, so
/// leftovers can be rejected by name.
class Params {
public:
  Params(const nlohmann::json& object, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  Complex complex(const std::string& key) const;
  CVector cvector(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  const nlohmann::json& raw(const std::string& key) const;
  Params object(const std::string& key) const;

  /// Throws ConfigError naming the first key never read.
  void finish() const;

  std::string key_path(const std::string& key) const;

private:
  const nlohmann::json& at(const std::string& key) const;

  const nlohmann::json& object_;
  std::string path_;
  mutable std::set<std::string> used_;
};

Complex complex_from(const nlohmann::json& value, const std::string& path);

disc::UnitDiscFunction build_map(const Params& node);
geom::ConvexDomainModel build_domain(const Params& node);
hl::Majorant build_majorant(const Params& node);
disc::ModulusFunction build_modulus(const Params& node);
/// Either the string "nonextending_geodesic" or {map, domain, tag}.
kob::GeodesicCandidate build_candidate(const Params& parent, const std::string& key);

}  // namespace cxgeo::cli
