#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bswap/errors.hpp"
#include "bswap/harness.hpp"
#include "bswap/serialize.hpp"
#include "reference_values.hpp"

using namespace bswap;
using namespace bswap::harness;
namespace fs = std::filesystem;

namespace {

std::string device_file() {
  const char* env = std::getenv("BSWAP_DEVICE_FILE");
  REQUIRE_MESSAGE(env != nullptr, "BSWAP_DEVICE_FILE must point at the reference device file");
  return env;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("bswap_harness_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& sub) const { return (path / sub).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig config_for(const std::string& scenario, const std::string& out) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.device_path = device_file();
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("serialization format") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-1.25e-7) == "-1.25e-07");
  const Table t{{"a", "b"}, {{1.0, 0.5}, {2.0, 1.0 / 3.0}}};
  CHECK(t.to_csv() == "a,b\n1,0.5\n2,0.333333333333\n");
  CHECK(t.to_json()["b"][1].get<double>() == doctest::Approx(1.0 / 3.0));

  TempDir dir;
  write_file_atomic(dir / "x.txt", "hello");
  CHECK(slurp(dir / "x.txt") == "hello");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("configuration checks") {
  CHECK(scenario_names().size() == 9);
  ExperimentConfig c = config_for("fig9", "/tmp/unused");
  try {
    c.validate();
    FAIL("unknown scenario accepted");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto& n : scenario_names()) CHECK(msg.find(n) != std::string::npos);
    CHECK(exit_code_for(e) == 2);
  }
  c.scenario = "fig3";
  c.shots = 100;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("seed"), ConfigError);
  c.seed = 1;
  CHECK_NOTHROW(c.validate());
  c.dt = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.dt = kDefaultDt;
  c.tphi_q1 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  TempDir dir;
  ExperimentConfig missing = config_for("spectrum", dir / "out");
  missing.device_path = dir / "absent.cfg";
  CHECK_THROWS_AS(run_scenario(missing), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(DomainError("x")) == 2);
  CHECK(exit_code_for(CalibrationError("x")) == 3);
  CHECK(exit_code_for(SingularityError("x")) == 3);
  CHECK(exit_code_for(NoOscillationError("x")) == 3);
  CHECK(exit_code_for(EstimationError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("spectrum scenario") {
  TempDir dir;
  const RunManifest m = run_scenario(config_for("spectrum", dir / "out"));
  const std::string csv = slurp(dir / "out/spectrum.csv");
  CHECK(csv.rfind("transition,photons,frequency_GHz,ambiguous\n", 0) == 0);
  CHECK(csv.find("\n00->11,2,") != std::string::npos);
  CHECK(csv.find("\n00->10,1,") != std::string::npos);

  for (const auto& f : m.outputs) CHECK(fs::exists(dir.path / "out" / f));
  CHECK(std::find(m.outputs.begin(), m.outputs.end(), "manifest.json") != m.outputs.end());
  REQUIRE(!m.constants.empty());
  CHECK(m.constants[0].name == "J");
  CHECK(m.constants[0].value == doctest::Approx(oracle::kJ3).epsilon(1e-6));
  CHECK(!m.constants[0].provenance.empty());

  const auto j = nlohmann::json::parse(slurp(dir / "out/manifest.json"));
  CHECK(j["scenario"] == "spectrum");
  CHECK(j["parameters"]["levels"] == 3);
  CHECK(j["outputs"].size() == m.outputs.size());
}

TEST_CASE("fig2b scenario") {
  TempDir dir;
  run_scenario(config_for("fig2b", dir / "out"));
  std::ifstream in(dir / "out/amplitude_sweep.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "omega_MHz,omega_B_sim_kHz,omega_B_formula_kHz");
  int rows = 0;
  double first_ratio = 0, last_ratio = 0;
  while (std::getline(in, line)) {
    double om, sim, formula;
    char c1, c2;
    std::istringstream ss(line);
    REQUIRE((ss >> om >> c1 >> sim >> c2 >> formula));
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    (rows == 0 ? first_ratio : last_ratio) = sim / formula;
    ++rows;
  }
  CHECK(rows == 24);
  CHECK(first_ratio == doctest::Approx(1.0).epsilon(0.02));
  CHECK(last_ratio < 1.0);
}

TEST_CASE("determinism") {
  TempDir dir;
  auto run = [&](const std::string& sub, std::uint64_t seed) {
    ExperimentConfig c = config_for("fig3", dir / sub);
    c.shots = 500;
    c.seed = seed;
    c.format = OutputFormat::json;
    return run_scenario(c);
  };
  const RunManifest a = run("a", 7), b = run("b", 7);
  run("c", 8);
  REQUIRE(a.outputs == b.outputs);
  bool records_differ = false;
  for (const auto& f : a.outputs) {
    if (f == "manifest.json") continue;
    CHECK_MESSAGE(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f), f);
    if (f.rfind("records_", 0) == 0) records_differ = records_differ || slurp(dir.path / "a" / f) != slurp(dir.path / "c" / f);
  }
  CHECK(records_differ);
  const auto rec = nlohmann::json::parse(slurp(dir.path / "a" / "records_phi0.json"));
  CHECK(rec.size() == 36);
}

TEST_CASE("calibration cache") {
  TempDir dir;
  run_scenario(config_for("calibrate", dir / "cal"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "cal/manifest.json"));
  const DeviceConfig dc = load_device_config(device_file());
  const Calibration cal = calibration_from_json(manifest, dc);
  const Calibration fresh = calibrate(dc);
  CHECK(cal.fine.omega == doctest::Approx(fresh.fine.omega).epsilon(1e-11));
  CHECK(cal.fine.delta == doctest::Approx(fresh.fine.delta).epsilon(1e-11));
  CHECK(cal.closed_form.omega == doctest::Approx(oracle::kOmegaOp).epsilon(1e-6));

  CHECK_THROWS_AS(calibration_from_json(manifest, load_device_config(device_file(), 4)), ConfigError);
  CHECK_THROWS_AS(calibration_from_json(nlohmann::json{{"calibration", {{"device", 1}}}}, dc), ConfigError);

  ExperimentConfig reuse = config_for("fig2a", dir / "reuse");
  reuse.calibration_path = dir / "cal/manifest.json";
  const RunManifest m = run_scenario(reuse);
  CHECK(m.parameters["calibration_source"] == reuse.calibration_path.value());
  reuse.recalibrate = true;
  CHECK(run_scenario(reuse).parameters["calibration_source"] == "computed");
}

TEST_CASE("gate study") {
  const DeviceConfig dc = load_device_config(device_file());
  const Calibration cal = calibrate(dc);
  const GateStudy s = study_gate(dc.device, cal.fine, Gate::sqrt_bswap, NoiseParams{}, ReadoutModel{}, 0, 0, false);
  CHECK(s.fidelity_linear >= 0.98);
  CHECK(s.correction_overlap > 0.99);
  CHECK(!s.has_mle);

  const NoiseParams n = dephasing_for_t2star(dc, 4e-6);
  CHECK(1 / n.tphi_q1 + 1 / (2 * n.t1_q1) == doctest::Approx(1 / 4e-6));
  CHECK(1 / n.tphi_q2 + 1 / (2 * n.t1_q2) == doctest::Approx(1 / 4e-6));
}
