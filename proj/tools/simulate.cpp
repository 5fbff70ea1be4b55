#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hykin/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hybrid kinetic/fluid solver"};
  std::string config_file;
  std::vector<std::string> overrides;
  app.add_option("config", config_file, "Configuration file (key=value lines)")->required();
  app.add_option("--override,-o", overrides, "Override a configuration key (key=value)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  hykin::RunConfig config;
  try {
    config = hykin::load_config(config_file);
    for (const auto& o : overrides) {
      const auto [key, value] = hykin::split_assignment(o);
      hykin::apply_setting(config, key, value);
    }
    hykin::validate(config);
  } catch (const hykin::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }
  return hykin::run(config, std::cerr).status;
}
