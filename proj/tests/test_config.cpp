#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "dce/experiments.hpp"

using namespace dce;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kMinimal = R"(
[experiment]
kind = trajectory
[model]
g = 0.001
gamma_a = 1e-9
gamma_b = 2e-9
)";

std::string error_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const config_error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped figure configs parse") {
  for (int fig : known_figures()) {
    INFO("figure " << fig);
    ExperimentConfig c = load_config(figure_config_path(fig, DCE_CONFIG_DIR).string());
    CHECK_NOTHROW(resolve_defaults(c));
    CHECK(c.space().dim() == 48);
  }
  CHECK_THROWS_AS(figure_config_path(8, DCE_CONFIG_DIR), std::invalid_argument);
}

TEST_CASE("defaults and resonance") {
  ExperimentConfig c = parse_config_string(kMinimal);
  CHECK(c.kind == ExperimentKind::trajectory);
  CHECK(c.omega_c_resonant);
  CHECK(c.model.omega_c == resonant_omega_c(1e-3));
  CHECK(c.master_seed == 42);
  CHECK(c.n_cav == 6);
  CHECK_FALSE(c.trajectory.t_final);
  resolve_defaults(c);
  CHECK(*c.trajectory.t_final == Catch::Approx(5e9));
  CHECK(*c.trajectory.dt == Catch::Approx(default_rotating_dt(c.model)));
}

TEST_CASE("field-path errors") {
  CHECK_THAT(error_of("[experiment]\nkind = qfi\n"), ContainsSubstring("model.g"));
  CHECK_THAT(error_of("[model]\ng = 0.001\n"), ContainsSubstring("experiment.kind"));
  CHECK_THAT(error_of(std::string(kMinimal) + "colour = red\n"), ContainsSubstring("unknown field 'model.colour'"));
  CHECK_THAT(error_of(std::string(kMinimal) + "[trajectory]\nn_traj = -3\n"), ContainsSubstring("trajectory.n_traj"));
  CHECK_THAT(error_of(std::string(kMinimal) + "[trajectory]\ninitial = 7,0\n"), ContainsSubstring("trajectory.initial"));
  CHECK_THAT(error_of(std::string(kMinimal) + "[trajectory]\nframe = lab\n"), ContainsSubstring("trajectory.frame"));
  CHECK_THAT(error_of(std::string(kMinimal) + "omega_m = 2\n"), ContainsSubstring("model.omega_m"));
  CHECK_THAT(error_of("[experiment]\nkind = spectra\n[model]\ng = 0.001\n"), ContainsSubstring("experiment.kind"));
  CHECK_THAT(error_of("[experiment]\nkind = qfi\n[model]\ng = 0.5\n"), ContainsSubstring("model.omega_c"));
  CHECK_THROWS_AS(load_config("/nonexistent/dir/x.ini"), config_error);

  ExperimentConfig zero = parse_config_string("[experiment]\nkind = trajectory\n[model]\ng = 0.001\ngamma_a = 1e-9\n");
  CHECK_THROWS_WITH(resolve_defaults(zero), ContainsSubstring("trajectory.t_final"));
}

TEST_CASE("resolved config round-trips") {
  ExperimentConfig c = parse_config_string(kMinimal);
  resolve_defaults(c);
  const std::string ini = to_ini(c);
  ExperimentConfig back = parse_config_string(ini);
  CHECK(to_ini(back) == ini);
  CHECK(back.model == c.model);
  CHECK(*back.trajectory.dt == *c.trajectory.dt);

  std::string text = kMinimal;
  text.replace(text.find("trajectory"), 10, "emission");
  ExperimentConfig e = parse_config_string(text + "[emission]\nratios = 5, 1, 0.2\n");
  const ExperimentConfig e_back = parse_config_string(to_ini(e));
  CHECK(e_back.emission.ratios == std::vector<double>{5, 1, 0.2});
  CHECK(to_ini(e_back) == to_ini(e));
}

TEST_CASE("running an experiment writes its outputs and manifest") {
  const fs::path dir = fs::temp_directory_path() / "dce_test_config_spectrum";
  fs::remove_all(dir);
  ExperimentConfig c = parse_config_string(
      "[experiment]\nkind = spectrum\nname = tiny\n[model]\ng = 0.001\n[space]\nn_cav = 4\nn_mech = 5\n"
      "[spectrum]\nratio_lo = 1.4999\nratio_hi = 1.5001\nn_samples = 21\n");
  const json summary = run_experiment(c, dir);
  CHECK(summary["n_samples"] == 21);
  std::ifstream m(dir / "manifest.json");
  const json manifest = json::parse(m);
  CHECK(manifest["kind"] == "spectrum");
  CHECK(manifest["name"] == "tiny");
  CHECK(manifest["rng"] == kRngAlgorithm);
  CHECK(manifest["outputs"].size() == 3);
  CHECK(parse_config_string(manifest["resolved_config"].get<std::string>()).spectrum.n_samples == 21);
  std::ifstream csv(dir / "spectrum.csv");
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 22);
  CHECK(fs::exists(dir / "resolved_config.ini"));

  OutputDir out(dir);
  CHECK_THROWS_AS(out.open("../escape.txt"), std::invalid_argument);
  fs::remove_all(dir);
}
