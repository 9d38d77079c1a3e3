#include "bswap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bswap/effective.hpp"
#include "bswap/errors.hpp"
#include "bswap/process.hpp"
#include "bswap/units.hpp"

namespace bswap::harness {

namespace {

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300}); }

nlohmann::json op_to_json(const OperatingPoint& op) {
  return {{"omega", op.omega},
          {"delta", op.delta},
          {"gate_time", op.gate_time},
          {"ramp", op.ramp},
          {"omega_B_formula", op.omega_B_formula},
          {"delta_closed", op.delta_closed}};
}

OperatingPoint op_from_json(const nlohmann::json& j) {
  OperatingPoint op;
  op.omega = j.at("omega").get<double>();
  op.delta = j.at("delta").get<double>();
  op.gate_time = j.at("gate_time").get<double>();
  op.ramp = j.at("ramp").get<double>();
  op.omega_B_formula = j.at("omega_B_formula").get<double>();
  op.delta_closed = j.at("delta_closed").get<double>();
  return op;
}

nlohmann::json device_to_json(const DeviceParams& dev) {
  return {{"q1_omega01", dev.q1.omega01}, {"q1_delta", dev.q1.delta}, {"q2_omega01", dev.q2.omega01},
          {"q2_delta", dev.q2.delta},     {"J", dev.J},               {"lambda", dev.lambda},
          {"levels", dev.space.levels()}};
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"calibrate", "spectrum", "fig2a",  "fig2b",  "fig2c",
                                              "fig3",      "fig4",     "limits", "swcheck"};
  return names;
}

void ExperimentConfig::validate() const {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + scenario + "'; valid scenarios: " + list);
  }
  if (device_path.empty()) throw ConfigError("no device file given");
  if (out_dir.empty()) throw ConfigError("no output directory given");
  if (shots < 0) throw ConfigError("shots must be non-negative");
  if (shots > 0 && !seed) throw ConfigError("a seed is required when shots > 0");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  for (const auto& t : {tphi_q1, tphi_q2})
    if (t && !(*t > 0)) throw ConfigError("Tphi must be positive");
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["version"] = version;
  j["parameters"] = parameters;
  j["constants"] = nlohmann::json::array();
  for (const auto& c : constants)
    j["constants"].push_back({{"name", c.name}, {"value", c.value}, {"unit", c.unit}, {"provenance", c.provenance}});
  j["outputs"] = outputs;
  j["summary"] = summary;
  j["wall_seconds"] = wall_seconds;
  return j;
}

Calibration calibrate(const DeviceConfig& config, double dt) {
  Calibration cal;
  cal.config = config;
  cal.closed_form = closed_form_operating_point(config.device);
  cal.fine = fine_calibrate(config.device, cal.closed_form, dt);
  return cal;
}

nlohmann::json calibration_to_json(const Calibration& cal) {
  return {{"device", device_to_json(cal.config.device)},
          {"closed_form", op_to_json(cal.closed_form)},
          {"fine", op_to_json(cal.fine)}};
}

Calibration calibration_from_json(const nlohmann::json& manifest, const DeviceConfig& config) {
  const nlohmann::json& j = manifest.contains("calibration") ? manifest.at("calibration") : manifest;
  try {
    const nlohmann::json cached = j.at("device");
    const nlohmann::json current = device_to_json(config.device);
    for (const char* key : {"q1_omega01", "q1_delta", "q2_omega01", "q2_delta", "J", "lambda"})
      if (!close(cached.at(key).get<double>(), current.at(key).get<double>(), 1e-9))
        throw ConfigError(std::string("calibration cache was made for another device (") + key + " differs)");
    if (cached.at("levels").get<int>() != config.device.space.levels())
      throw ConfigError("calibration cache was made with a different level count");
    Calibration cal;
    cal.config = config;
    cal.closed_form = op_from_json(j.at("closed_form"));
    cal.fine = op_from_json(j.at("fine"));
    return cal;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration cache is malformed: ") + e.what());
  }
}

NoiseParams dephasing_for_t2star(const DeviceConfig& config, double t2star) {
  NoiseParams n;
  n.t1_q1 = config.t1_q1.value_or(n.t1_q1);
  n.t1_q2 = config.t1_q2.value_or(n.t1_q2);
  n.tphi_q1 = NoiseParams::tphi_for_t2star(t2star, n.t1_q1);
  n.tphi_q2 = NoiseParams::tphi_for_t2star(t2star, n.t1_q2);
  return n;
}

GateStudy study_gate(const DeviceParams& dev, const OperatingPoint& op, Gate gate, const NoiseParams& noise,
                     const ReadoutModel& readout, long shots, std::uint64_t seed, bool with_mle, double dt) {
  const double duration = gate == Gate::sqrt_bswap ? op.gate_time : 2 * op.gate_time;
  const double omega_B = std::numbers::pi / (2 * op.gate_time);
  const Schedule sched = bswap_schedule(dev, op, 0.0, duration);
  const CMatrix ideal_u = u_bell(omega_B, duration, 0.0);
  const CMatrix block = computational_block(dev, propagate_unitary(dev, sched, dt).mat());
  const PhaseCorrection corr = fit_phase_corrections(block, ideal_u);

  GateStudy out;
  out.ideal = ptm_of_unitary(ideal_u);
  out.correction_overlap = corr.overlap;
  // Leakage leaves the block with trace < 1; the estimators see the renormalized state.
  const Channel raw = gate_channel(dev, sched, noise, corr, dt);
  const auto channel = [&raw](const CMatrix& rho) {
    const CMatrix out = raw(rho);
    return CMatrix(out / out.trace().real());
  };
  const ProcessTomographyResult res = process_tomography(channel, readout, shots, seed, with_mle);
  out.linear = res.linear;
  out.fidelity_linear = gate_fidelity(res.linear, out.ideal);
  if (res.has_mle) {
    out.mle = res.mle;
    out.has_mle = true;
    out.fidelity_mle = gate_fidelity(res.mle, out.ideal);
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const CalibrationError*>(&e) || dynamic_cast<const SingularityError*>(&e) ||
      dynamic_cast<const DegeneracyError*>(&e) || dynamic_cast<const NoOscillationError*>(&e))
    return 3;
  if (dynamic_cast<const EstimationError*>(&e)) return 4;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 2;
  return 1;
}

}  // namespace bswap::harness
