// pwinterp <command> --config <path> [--out <dir>] [--seed <int>] [--samples <int>] [--r <float>...]

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pwinterp/types.hpp"
#include "run_config.hpp"

namespace cli = pwinterp::cli;

int main(int argc, char** argv) {
  CLI::App app{"Piecewise affine interpolation experiments on translated Kuhn triangulations"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<double> rs;
  app.add_option("command", command, "lemma1 | lemma2 | converge | bv | locate-demo")
      ->required()
      ->check(CLI::IsMember(cli::command_names()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  auto* samples_opt = app.add_option("--samples", samples, "sample count (overrides the config)");
  auto* r_opt = app.add_option("--r", rs, "scale schedule (overrides the config)")->expected(1, -1);
  app.footer("Threads: PWINTERP_THREADS. Kernels: PWINTERP_KERNELS=scalar|avx2|auto.\n"
             "Exit status: 0 pass, 1 runtime error, 2 invalid config, 3 tolerance failure.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitInvalidConfig;
  }

  cli::RunConfig config;
  try {
    config = cli::load_config(config_path);
    if (!config.command.empty() && config.command != command) {
      throw cli::ConfigError("config is for command '" + config.command + "', not '" + command + "'");
    }
    config.command = command;
    if (*out_opt) config.out = out_dir;
    if (*seed_opt) config.seed = seed;
    if (*samples_opt) config.samples = samples;
    if (*r_opt) config.r = rs;
    cli::validate(config);
  } catch (const cli::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return cli::kExitInvalidConfig;
  }

  try {
    const auto outcome = cli::execute(config);
    for (const auto& c : outcome.checks) {
      std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << ": " << c.value << ' ' << c.relation << ' '
                << c.limit << '\n';
    }
    std::cout << "report: " << config.out << "/report.json\n";
    return outcome.passed() ? cli::kExitOk : cli::kExitToleranceFailure;
  } catch (const cli::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return cli::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitRuntimeError;
  }
}
