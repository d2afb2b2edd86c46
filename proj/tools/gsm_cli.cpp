#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gsm/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete sigma model with gravitino on the torus"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "eval | check | residual | solve | morrey")
      ->required()
      ->check(CLI::IsMember(gsm::commands()));
  app.add_option("--config", config_path, "INI run configuration")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "overrides [run] seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << gsm::error_json("usage", e.what()).dump() << '\n';
    return 2;
  }

  gsm::RunConfig config;
  try {
    config = gsm::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << gsm::error_json("config", e.what()).dump() << '\n';
    return 2;
  }
  if (seed) config.seed = *seed;
  config.out_dir = out_dir;
  return gsm::run(config, command, std::cerr);
}
