// Command-line driver: `dce_sim run <config.ini>` and `dce_sim reproduce <figure>`.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dce/experiments.hpp"

#ifndef DCE_CONFIG_DIR
#define DCE_CONFIG_DIR "configs"
#endif

namespace {

struct CommonFlags {
  std::string out;
  int workers = 0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--workers", f.workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "master seed (overrides the config)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Rabi / quantum-trajectory simulator"};
  app.set_version_flag("--version", DCE_VERSION);
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment described by an INI config");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  add_common(run, run_flags);

  CommonFlags fig_flags;
  int figure = 0;
  std::string config_dir = DCE_CONFIG_DIR;
  bool strict = false;
  auto* reproduce = app.add_subcommand("reproduce", "run a shipped figure config and check its claims");
  reproduce->add_option("figure", figure, "figure id: 2 3 4 5 6 7 9")->required();
  reproduce->add_option("--configs", config_dir, "directory holding fig<N>.ini")->check(CLI::ExistingDirectory);
  reproduce->add_flag("--strict", strict, "exit with status 4 if any check fails");
  add_common(reproduce, fig_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      dce::ExperimentConfig c = dce::load_config(config_path);
      if (run_flags.workers > 0) c.workers = run_flags.workers;
      if (run_flags.seed >= 0) c.master_seed = static_cast<std::uint64_t>(run_flags.seed);
      const std::string out =
          run_flags.out.empty() ? "out/" + dce::fs::path(config_path).stem().string() : run_flags.out;
      dce::run_experiment(c, out);
      std::cout << "wrote " << out << "\n";
      return 0;
    }
    const std::string out = fig_flags.out.empty() ? "out/fig" + std::to_string(figure) : fig_flags.out;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    if (fig_flags.workers > 0) workers = fig_flags.workers;
    if (fig_flags.seed >= 0) seed = static_cast<std::uint64_t>(fig_flags.seed);
    const auto checks = dce::reproduce_figure(figure, config_dir, out, workers, seed);
    std::cout << dce::format_checks(figure, checks) << "wrote " << out << "\n";
    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    return strict && !all ? 4 : 0;
  } catch (const dce::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
