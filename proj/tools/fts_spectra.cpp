#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fts/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis and CLT experiments for functional time series"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<std::string> out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output path");
  };
  CLI::App* run = app.add_subcommand("run", "run an experiment and check its thresholds");
  add_common(run);
  CLI::App* spectrum = app.add_subcommand("spectrum", "write the spectral density table");
  add_common(spectrum);
  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("config", config_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const fts::cli::RunOptions options{seed, threads, out};
  if (run->parsed()) return fts::cli::run_command(config_path, options, std::cout, std::cerr);
  if (spectrum->parsed()) return fts::cli::spectrum_command(config_path, options, std::cout, std::cerr);
  return fts::cli::validate_command(config_path, std::cout, std::cerr);
}
