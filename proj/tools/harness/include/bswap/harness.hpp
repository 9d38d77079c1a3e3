#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bswap/device_config.hpp"
#include "bswap/dynamics.hpp"
#include "bswap/experiments.hpp"
#include "bswap/tomography.hpp"

namespace bswap::harness {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  std::string scenario;
  std::string device_path;
  std::string out_dir;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::uint64_t> seed;
  long shots = 0;
  double dt = kDefaultDt;
  std::optional<int> levels;
  std::optional<double> tphi_q1;  // seconds
  std::optional<double> tphi_q2;
  /// Cached manifest of a previous "calibrate" run; ignored with recalibrate.
  std::optional<std::string> calibration_path;
  bool recalibrate = false;

  /// Throws ConfigError: unknown scenario, shots > 0 without a seed, bad dt.
  void validate() const;
};

const std::vector<std::string>& scenario_names();

/// A calibrated constant with the target it was fitted to.
struct Constant {
  std::string name;
  double value = 0.0;
  std::string unit;
  std::string provenance;
};

struct RunManifest {
  std::string scenario;
  std::string version;
  nlohmann::json parameters;
  std::vector<Constant> constants;
  std::vector<std::string> outputs;  // relative to out_dir
  nlohmann::json summary;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
};

/// Device, fitted J and the sqrt(bSWAP) drive settings.
struct Calibration {
  DeviceConfig config;
  OperatingPoint closed_form;
  OperatingPoint fine;
};

Calibration calibrate(const DeviceConfig& config, double dt = kDefaultDt);
nlohmann::json calibration_to_json(const Calibration& cal);
/// Rebuilds a calibration from a manifest, rejecting one made for another device.
Calibration calibration_from_json(const nlohmann::json& manifest, const DeviceConfig& config);

/// Process fidelity of a drive-only gate: phase corrections are fitted on the
/// noiseless block, then reused for the noisy channel.
struct GateStudy {
  PauliTransferMatrix ideal;
  PauliTransferMatrix linear;
  PauliTransferMatrix mle;
  bool has_mle = false;
  double fidelity_linear = 0.0;
  double fidelity_mle = 0.0;
  double correction_overlap = 0.0;
};

enum class Gate { sqrt_bswap, bswap };

GateStudy study_gate(const DeviceParams& dev, const OperatingPoint& op, Gate gate, const NoiseParams& noise,
                     const ReadoutModel& readout, long shots, std::uint64_t seed, bool with_mle, double dt = kDefaultDt);

/// Pure dephasing giving T2* = t2star on each qubit, T1 taken from the device file.
NoiseParams dephasing_for_t2star(const DeviceConfig& config, double t2star);

/// Loads the device, runs the scenario, writes data files and manifest.json.
RunManifest run_scenario(const ExperimentConfig& config);

/// CLI exit status for an exception escaping run_scenario.
int exit_code_for(const std::exception& e);

}  // namespace bswap::harness
