// pellel: solve i partial dbar u = f on convex domains and verify the weighted estimates.
//
//   pellel run --config cfg.json [--mode M] [--h H] [--out DIR] [--seed S]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 invalid configuration,
// 3 a solver stage or I/O failed.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pellel/pipeline.hpp"
#include "pellel/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Poincare-Lelong solver and estimate checks"};
  app.require_subcommand(1);

  std::string config_path, mode, out;
  double h = 0.0;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "execute one configured run");
  run->set_help_flag("--help", "print this help message and exit");
  run->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* mode_opt = run->add_option("--mode", mode, "pipeline | poincare | dbar | verify | converge");
  auto* h_opt = run->add_option("--h", h, "grid spacing");
  auto* out_opt = run->add_option("--out", out, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      try {
        is >> j;
      } catch (const nlohmann::json::parse_error& e) {
        throw pellel::ConfigError("config", std::string("not valid JSON: ") + e.what());
      }
    }
    pellel::RunConfig cfg = pellel::parse_config(j);
    if (*mode_opt) cfg.mode = mode;
    if (*h_opt) cfg.h = h;
    if (*out_opt) cfg.out = out;
    if (*seed_opt) cfg.seed = seed;

    const pellel::RunReport rep = pellel::run(cfg);
    for (const auto& c : rep.json.at("checks")) {
      std::cout << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
                << ' ' << c.at("value").dump() << ' ' << c.at("relation").get<std::string>() << ' '
                << c.at("threshold").dump() << '\n';
    }
    std::cout << "wrote " << cfg.out << "/report.json\n";
    return rep.pass ? 0 : 1;
  } catch (const pellel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const pellel::StageError& e) {
    std::cerr << "stage error [" << e.stage() << "]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
