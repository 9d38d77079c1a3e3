#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "bswap/errors.hpp"
#include "bswap/harness.hpp"

namespace h = bswap::harness;

int main(int argc, char** argv) {
  CLI::App app{"bswap: two-transmon bSWAP laboratory"};
  app.set_version_flag("--version", BSWAP_VERSION);

  h::ExperimentConfig cfg;
  std::string catalog;
  for (const auto& n : h::scenario_names()) catalog += (catalog.empty() ? "" : ", ") + n;

  app.add_option("scenario", cfg.scenario, "Scenario to run: " + catalog)->required();
  app.add_option("--device", cfg.device_path, "Device file")->required();
  cfg.out_dir = "bswap-out";
  app.add_option("--out", cfg.out_dir, "Output directory")->envname("BSWAP_OUT_DIR")->capture_default_str();
  app.add_option("--format", cfg.format, "Data file format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, h::OutputFormat>{{"csv", h::OutputFormat::csv},
                                                                                 {"json", h::OutputFormat::json}}))
      ->default_str("csv");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required when --shots > 0)");
  app.add_option("--shots", cfg.shots, "Shots per tomography record; 0 gives exact expectations")
      ->check(CLI::NonNegativeNumber);
  double dt_ns = cfg.dt * 1e9;
  app.add_option("--dt-ns", dt_ns, "Propagation step (ns)")->check(CLI::PositiveNumber)->capture_default_str();
  int levels = 0;
  auto* levels_opt = app.add_option("--levels", levels, "Levels per transmon (overrides the device file)")
                         ->check(CLI::Range(2, 8));
  double tphi = 0, tphi1 = 0, tphi2 = 0;
  auto* tphi_opt = app.add_option("--tphi-us", tphi, "Pure dephasing time of both transmons (us)")
                       ->check(CLI::PositiveNumber);
  auto* tphi1_opt = app.add_option("--tphi1-us", tphi1, "Pure dephasing time of transmon 1 (us)")
                        ->check(CLI::PositiveNumber);
  auto* tphi2_opt = app.add_option("--tphi2-us", tphi2, "Pure dephasing time of transmon 2 (us)")
                        ->check(CLI::PositiveNumber);
  std::string calibration;
  auto* cal_opt = app.add_option("--calibration", calibration, "Manifest of an earlier calibrate run to reuse")
                      ->check(CLI::ExistingFile);
  app.add_flag("--recalibrate", cfg.recalibrate, "Recompute the calibration even when --calibration is given");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*seed_opt) cfg.seed = seed;
  cfg.dt = dt_ns * 1e-9;
  if (*levels_opt) cfg.levels = levels;
  if (*tphi_opt) cfg.tphi_q1 = cfg.tphi_q2 = tphi * 1e-6;
  if (*tphi1_opt) cfg.tphi_q1 = tphi1 * 1e-6;
  if (*tphi2_opt) cfg.tphi_q2 = tphi2 * 1e-6;
  if (*cal_opt) cfg.calibration_path = calibration;

  try {
    const h::RunManifest m = h::run_scenario(cfg);
    std::cout << m.scenario << ": wrote " << m.outputs.size() << " files to " << cfg.out_dir << " in "
              << m.wall_seconds << " s\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "bswap: error: " << e.what() << '\n';
    return h::exit_code_for(e);
  }
}
