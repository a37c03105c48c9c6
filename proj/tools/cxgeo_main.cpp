#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cxgeo/cli/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cxgeo: boundary regularity experiments for complex geodesics"};
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "report path (overrides the config)");
  app.add_option("--format", format, "csv or json (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "random seed (overrides the config)");
  CLI11_PARSE(app, argc, argv);

  cxgeo::cli::RunConfig config;
  try {
    config = cxgeo::cli::load_config(config_path);
    if (out_path) config.output = *out_path;
    if (format) config.format = cxgeo::cli::parse_format(*format);
    if (seed) config.seed = *seed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return cxgeo::cli::execute(config);
}
