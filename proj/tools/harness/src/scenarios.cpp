#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "bswap/effective.hpp"
#include "bswap/errors.hpp"
#include "bswap/harness.hpp"
#include "bswap/pauli.hpp"
#include "bswap/process.hpp"
#include "bswap/schrieffer_wolff.hpp"
#include "bswap/serialize.hpp"
#include "bswap/units.hpp"

#ifndef BSWAP_VERSION
#define BSWAP_VERSION "unknown"
#endif

namespace bswap::harness {

namespace {

using namespace bswap::units;
constexpr double pi = std::numbers::pi;

/// Rows with a leading text column; numbers are written with format_number.
struct LabeledTable {
  std::vector<std::string> header;  // header[0] names the label column
  std::vector<std::pair<std::string, std::vector<double>>> rows;

  std::string to_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& [label, values] : rows) {
      os << label;
      for (double v : values) os << ',' << format_number(v);
      os << '\n';
    }
    return os.str();
  }
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [label, values] : rows) {
      nlohmann::json o;
      o[header[0]] = label;
      for (std::size_t c = 0; c < values.size(); ++c) o[header[c + 1]] = values[c];
      arr.push_back(o);
    }
    return arr;
  }
};

class Writer {
 public:
  Writer(std::string dir, OutputFormat fmt) : dir_(std::move(dir)), fmt_(fmt) {
    std::filesystem::create_directories(dir_);
  }

  template <class T>
  void table(const std::string& stem, const T& t) {
    if (fmt_ == OutputFormat::csv)
      write(stem + ".csv", t.to_csv());
    else
      write(stem + ".json", dump_json(t.to_json()) + "\n");
  }
  void write(const std::string& name, const std::string& content) {
    write_file_atomic((std::filesystem::path(dir_) / name).string(), content);
    files.push_back(name);
  }

  std::vector<std::string> files;

 private:
  std::string dir_;
  OutputFormat fmt_;
};

struct Context {
  const ExperimentConfig& cfg;
  DeviceConfig device;
  Writer out;
  RunManifest manifest;
  std::optional<Calibration> cal;

  const DeviceParams& dev() const { return device.device; }

  const Calibration& calibration() {
    if (cal) return *cal;
    if (cfg.calibration_path && !cfg.recalibrate) {
      std::ifstream in(*cfg.calibration_path);
      if (!in) throw ConfigError("cannot read calibration cache " + *cfg.calibration_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("calibration cache " + *cfg.calibration_path + " is not JSON: " + e.what());
      }
      cal = calibration_from_json(j, device);
      manifest.parameters["calibration_source"] = *cfg.calibration_path;
    } else {
      cal = calibrate(device, cfg.dt);
      manifest.parameters["calibration_source"] = "computed";
    }
    record_calibration();
    return *cal;
  }

  /// T1 from the device plus any Tphi given on the command line; noiseless otherwise.
  NoiseParams configured_noise() const {
    NoiseParams n;
    if (!cfg.tphi_q1 && !cfg.tphi_q2) return n;
    n.t1_q1 = device.t1_q1.value_or(n.t1_q1);
    n.t1_q2 = device.t1_q2.value_or(n.t1_q2);
    n.tphi_q1 = cfg.tphi_q1.value_or(n.tphi_q1);
    n.tphi_q2 = cfg.tphi_q2.value_or(n.tphi_q2);
    return n;
  }

  std::uint64_t seed() const { return cfg.seed.value_or(0); }

 private:
  void record_calibration() {
    const Calibration& c = *cal;
    auto& k = manifest.constants;
    k.push_back({"omega_closed_form", c.closed_form.omega, "rad/s",
                 "closed-form Omega_B gives pi/2 at gate_time = " + format_number(c.closed_form.gate_time) + " s"});
    k.push_back({"delta_closed_form", c.closed_form.delta_closed, "rad/s", "alpha_IZ + alpha_ZI = 0 at omega_closed_form"});
    k.push_back({"delta_resonance", c.fine.delta, "rad/s", "minimum RWA |00>,|11> splitting at omega_fine"});
    k.push_back({"omega_fine", c.fine.omega, "rad/s",
                 "simulated |00>->|11> rotation = pi/2 within 1e-5 rad at dt = " + format_number(cfg.dt) + " s"});
  }
};

nlohmann::json noise_json(const NoiseParams& n) {
  auto v = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"t1_q1", v(n.t1_q1)}, {"t1_q2", v(n.t1_q2)}, {"tphi_q1", v(n.tphi_q1)}, {"tphi_q2", v(n.tphi_q2)}};
}

Table density_table(const CMatrix& rho) {
  Table t{{"row", "col", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
      t.rows.push_back({double(i), double(j), rho(i, j).real(), rho(i, j).imag()});
  return t;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, double(k) / (n - 1)));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo + (hi - lo) * k / (n - 1));
  return g;
}

void run_calibrate(Context& ctx) {
  const Calibration& cal = ctx.calibration();
  LabeledTable t{{"name", "si_value", "display_value"}, {}};
  t.rows.push_back({"J_MHz", {ctx.dev().J, to_mhz(ctx.dev().J)}});
  t.rows.push_back({"static_zz_kHz", {static_zz(ctx.dev()), to_khz(static_zz(ctx.dev()))}});
  t.rows.push_back({"omega_closed_form_MHz", {cal.closed_form.omega, to_mhz(cal.closed_form.omega)}});
  t.rows.push_back({"delta_closed_form_kHz", {cal.closed_form.delta_closed, to_khz(cal.closed_form.delta_closed)}});
  t.rows.push_back({"omega_fine_MHz", {cal.fine.omega, to_mhz(cal.fine.omega)}});
  t.rows.push_back({"delta_resonance_kHz", {cal.fine.delta, to_khz(cal.fine.delta)}});
  t.rows.push_back({"omega_B_formula_at_fine_kHz", {cal.fine.omega_B_formula, to_khz(cal.fine.omega_B_formula)}});
  ctx.out.table("calibration", t);
}

void run_spectrum(Context& ctx) {
  const TransitionTable tt = spectrum(ctx.dev());
  LabeledTable t{{"transition", "photons", "frequency_GHz", "ambiguous"}, {}};
  for (const auto& r : tt.rows)
    t.rows.push_back({r.from + "->" + r.to, {double(r.photons), to_ghz(r.frequency), r.ambiguous ? 1.0 : 0.0}});
  ctx.out.table("spectrum", t);
  ctx.manifest.summary["static_zz_kHz"] = to_khz(static_zz(ctx.dev()));
  ctx.manifest.summary["any_ambiguous"] = tt.any_ambiguous;
}

void run_fig2a(Context& ctx) {
  const OperatingPoint& op = ctx.calibration().fine;
  const std::vector<double> durations = linear_grid(0.0, 8 * op.gate_time, 321);
  const Trace tr = rabi_experiment(ctx.dev(), op.omega, op.omega_d(ctx.dev()), durations);
  ctx.out.table("rabi", trace_table(tr));
  const FrequencyEstimate f = extract_frequency(tr, "P11");
  ctx.manifest.summary["omega_B_fit_kHz"] = to_khz(f.omega);
  ctx.manifest.summary["omega_B_fit_err_kHz"] = to_khz(f.uncertainty);
  ctx.manifest.summary["omega_B_formula_kHz"] = to_khz(op.omega_B_formula);
}

void run_fig2b(Context& ctx) {
  const std::vector<double> amps = [] {
    std::vector<double> a;
    for (double f : geometric_grid(1.0, 60.0, 24)) a.push_back(mhz(f));
    return a;
  }();
  Table t{{"omega_MHz", "omega_B_sim_kHz", "omega_B_formula_kHz"}, {}};
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& r : amplitude_sweep(ctx.dev(), amps)) {
    if (!r.ok) {
      failed.push_back({{"omega_MHz", to_mhz(r.omega)}, {"error", r.error}});
      continue;
    }
    t.rows.push_back({to_mhz(r.omega), to_khz(r.omega_B_sim), to_khz(r.omega_B_formula)});
  }
  ctx.out.table("amplitude_sweep", t);
  ctx.manifest.summary["failed_points"] = failed;
}

void run_fig2c(Context& ctx) {
  const OperatingPoint& op = ctx.calibration().fine;
  const NoiseParams noise = ctx.configured_noise();
  const double ramp = mhz(0.5);
  const EchoResult echo = bell_echo(ctx.dev(), noise, linear_grid(0.0, 4e-6, 41), ramp, op, ctx.cfg.dt);
  ctx.out.table("bell_echo", trace_table(echo.trace));
  ctx.manifest.parameters["noise"] = noise_json(noise);
  ctx.manifest.parameters["phase_ramp_MHz"] = to_mhz(ramp);
  ctx.manifest.summary["fringe_MHz"] = to_mhz(echo.fit.omega);
  ctx.manifest.summary["decay_time_us"] =
      std::isfinite(echo.fit.decay_time) ? nlohmann::json(to_us(echo.fit.decay_time)) : nlohmann::json(nullptr);
  ctx.manifest.summary["visibility"] = 2 * echo.fit.amplitude;
}

void run_fig3(Context& ctx) {
  const OperatingPoint& op = ctx.calibration().fine;
  const NoiseParams noise = ctx.configured_noise();
  const CMatrix comp = dressed_basis(ctx.dev()).computational(ctx.dev().space);
  const CMatrix rho0 = comp.col(0) * comp.col(0).adjoint();
  const ReadoutModel readout;

  Table summary{{"drive_phase", "bell_phase", "leakage", "fidelity_true", "fidelity_linear", "fidelity_mle",
                 "min_eig_linear"},
                {}};
  LabeledTable paulis{{"state"}, {}};
  for (int i = 0; i < 16; ++i) paulis.header.push_back(pauli_label(i));

  const std::pair<double, std::string> phases[] = {{0.0, "phi0"}, {pi / 4, "phi_pi4"}};
  std::uint64_t stream = 0;
  for (const auto& [phi, tag] : phases) {
    const CMatrix full = propagate_density(ctx.dev(), bswap_schedule(ctx.dev(), op, phi), noise, rho0, ctx.cfg.dt);
    CMatrix rho = comp.adjoint() * full * comp;
    const double kept = rho.trace().real();
    rho = (0.5 * (rho + rho.adjoint()) / kept).eval();
    const double bell_phase = std::arg(rho(3, 0));
    CVector target = CVector::Zero(4);
    target(0) = 1 / std::sqrt(2.0);
    target(3) = std::exp(I_unit * bell_phase) / std::sqrt(2.0);

    const auto records = simulate_readout(rho, readout, ctx.cfg.shots, ctx.seed() + stream++);
    const CMatrix lin = state_linear_inversion(records, readout);
    const CMatrix mle = state_mle(records, readout);
    summary.rows.push_back({phi, bell_phase, 1 - kept, state_fidelity(rho, target), state_fidelity(lin, target),
                            state_fidelity(mle, target), min_eigenvalue(lin)});
    ctx.out.table("rho_" + tag + "_true", density_table(rho));
    ctx.out.table("rho_" + tag + "_linear", density_table(lin));
    ctx.out.table("rho_" + tag + "_mle", density_table(mle));
    const std::pair<const char*, const CMatrix*> estimates[] = {{"true", &rho}, {"linear", &lin}, {"mle", &mle}};
    for (const auto& [name, m] : estimates) {
      const RVector p = pauli_vector(*m);
      paulis.rows.emplace_back(tag + "_" + name, std::vector<double>(p.data(), p.data() + p.size()));
    }
    if (ctx.cfg.format == OutputFormat::json) ctx.out.write("records_" + tag + ".json", dump_json(records_to_json(records)) + "\n");
  }
  ctx.out.table("bell_states", summary);
  ctx.out.table("bell_paulis", paulis);

  std::vector<double> phis = linear_grid(0.0, 2 * pi, 73);
  Table sweep{{"phi"}, {}};
  for (int i = 1; i < 16; ++i) sweep.header.push_back(pauli_label(i));
  for (const auto& row : pauli_phase_sweep(phis)) {
    std::vector<double> r{row.phi};
    for (int i = 1; i < 16; ++i) r.push_back(row.expectation(i));
    sweep.rows.push_back(r);
  }
  ctx.out.table("phase_sweep", sweep);
  ctx.manifest.parameters["noise"] = noise_json(noise);
}

void run_fig4(Context& ctx) {
  const OperatingPoint& op = ctx.calibration().fine;
  NoiseParams dephased = dephasing_for_t2star(ctx.device, 4e-6);
  if (ctx.cfg.tphi_q1 || ctx.cfg.tphi_q2) dephased = ctx.configured_noise();
  const std::pair<NoiseParams, std::string> variants[] = {{NoiseParams{}, "noiseless"}, {dephased, "dephased"}};
  const std::pair<Gate, std::string> gates[] = {{Gate::sqrt_bswap, "sqrt_bswap"}, {Gate::bswap, "bswap"}};

  LabeledTable summary{{"case", "fidelity_linear", "fidelity_mle", "min_choi_eig_linear", "correction_overlap"}, {}};
  std::uint64_t stream = 0;
  for (const auto& [gate, gname] : gates) {
    bool ideal_written = false;
    for (const auto& [noise, vname] : variants) {
      const GateStudy s =
          study_gate(ctx.dev(), op, gate, noise, ReadoutModel{}, ctx.cfg.shots, ctx.seed() + stream++, true, ctx.cfg.dt);
      if (!ideal_written) {
        ctx.out.table("ptm_" + gname + "_ideal", ptm_table(s.ideal));
        ideal_written = true;
      }
      ctx.out.table("ptm_" + gname + "_" + vname + "_linear", ptm_table(s.linear));
      ctx.out.table("ptm_" + gname + "_" + vname + "_mle", ptm_table(s.mle));
      summary.rows.push_back({gname + "_" + vname,
                              {s.fidelity_linear, s.fidelity_mle, min_eigenvalue(choi_from_ptm(s.linear)),
                               s.correction_overlap}});
      ctx.manifest.summary[gname + "_" + vname] = {{"fidelity_linear", s.fidelity_linear},
                                                   {"fidelity_mle", s.fidelity_mle}};
    }
  }
  ctx.out.table("gate_fidelity", summary);
  ctx.manifest.parameters["noise_dephased"] = noise_json(dephased);
}

void run_limits(Context& ctx) {
  const DeviceParams& dev = ctx.dev();
  const double om = solve_drive_for_omega_B(dev, pi / (2 * 800e-9));
  const double D = std::abs(dev.Delta());

  Table ratios{{"anharmonicity_over_Delta", "omega_B_main_kHz", "omega_B_pure_qubit_kHz", "ratio"}, {}};
  for (double r : {10.0, 100.0, 1e3, 1e4, 1e5}) {
    DeviceParams d = dev;
    d.q1.delta = d.q2.delta = -r * D;
    const double main = omega_B_main(d, om), limit = omega_B_pure_qubit_limit(d, om);
    ratios.rows.push_back({r, to_khz(main), to_khz(limit), main / limit});
  }
  ctx.out.table("pure_qubit_limit", ratios);

  DeviceParams harmonic = dev;
  harmonic.q1.delta = harmonic.q2.delta = 0.0;
  const double d_cal = calibrate_delta(dev, om, dev.lambda * om);
  LabeledTable t{{"quantity", "value"}, {}};
  t.rows.push_back({"enhancement_factor", {enhancement_factor(dev)}});
  t.rows.push_back({"omega_B_harmonic", {omega_B_main(harmonic, om)}});
  t.rows.push_back({"omega_B_full_at_zero_delta_minus_main",
                    {omega_B_full(dev, om, dev.lambda * om, 0.0) - omega_B_main(dev, om)}});
  t.rows.push_back({"omega_B_full_calibrated_kHz", {to_khz(omega_B_full(dev, om, dev.lambda * om, d_cal))}});
  t.rows.push_back({"omega_B_two_level_kHz", {to_khz(omega_B_pure_qubit_limit(dev, om))}});
  t.rows.push_back({"drive_MHz", {to_mhz(om)}});
  ctx.out.table("limits", t);
  ctx.manifest.summary["enhancement_factor"] = enhancement_factor(dev);
}

void run_swcheck(Context& ctx) {
  const DeviceParams& dev = ctx.dev();
  const double om = solve_drive_for_omega_B(dev, pi / (2 * 800e-9));
  Table t{{"J_MHz", "omega_B_closed_kHz", "omega_B_numeric_kHz", "omega_B_numeric_pert_kHz", "rel_residual",
           "alpha_zz_closed_kHz"},
          {}};
  for (double f : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const DeviceParams d = dev.with_J(f * dev.J);
    const double de = calibrate_delta(d, om, d.lambda * om);
    const double closed = std::abs(omega_B_full(d, om, d.lambda * om, de));
    const double exact = numeric_bswap_rate(d, om, d.lambda * om, de);
    const double pert = numeric_bswap_rate(d, om, d.lambda * om, de, Dressing::perturbative);
    t.rows.push_back({to_mhz(d.J), to_khz(closed), to_khz(exact), to_khz(pert), (exact - closed) / closed,
                      to_khz(alpha_coeffs(d, om, d.lambda * om, de).alpha_zz)});
  }
  ctx.out.table("sw_check", t);
  ctx.manifest.parameters["drive_MHz"] = to_mhz(om);
}

const std::map<std::string, std::function<void(Context&)>>& catalog() {
  static const std::map<std::string, std::function<void(Context&)>> c{
      {"calibrate", run_calibrate}, {"spectrum", run_spectrum}, {"fig2a", run_fig2a},
      {"fig2b", run_fig2b},         {"fig2c", run_fig2c},       {"fig3", run_fig3},
      {"fig4", run_fig4},           {"limits", run_limits},     {"swcheck", run_swcheck}};
  return c;
}

nlohmann::json parameters_json(const ExperimentConfig& cfg, const DeviceConfig& dc) {
  auto opt = [](const auto& o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
  const DeviceParams& d = dc.device;
  return {{"device_file", cfg.device_path},
          {"format", cfg.format == OutputFormat::csv ? "csv" : "json"},
          {"seed", opt(cfg.seed)},
          {"shots", cfg.shots},
          {"dt", cfg.dt},
          {"levels", d.space.levels()},
          {"tphi_q1", opt(cfg.tphi_q1)},
          {"tphi_q2", opt(cfg.tphi_q2)},
          {"recalibrate", cfg.recalibrate},
          {"device",
           {{"q1_omega01", d.q1.omega01},
            {"q1_delta", d.q1.delta},
            {"q2_omega01", d.q2.omega01},
            {"q2_delta", d.q2.delta},
            {"J", d.J},
            {"lambda", d.lambda},
            {"t1_q1", opt(dc.t1_q1)},
            {"t1_q2", opt(dc.t1_q2)}}}};
}

}  // namespace

RunManifest run_scenario(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  Context ctx{config, load_device_config(config.device_path, config.levels), Writer(config.out_dir, config.format), {},
              std::nullopt};
  ctx.manifest.scenario = config.scenario;
  ctx.manifest.version = BSWAP_VERSION;
  ctx.manifest.parameters = parameters_json(config, ctx.device);
  if (ctx.device.target_zz)
    ctx.manifest.constants.push_back({"J", ctx.dev().J, "rad/s",
                                      "static ZZ = " + format_number(to_khz(*ctx.device.target_zz)) +
                                          " kHz within 10 Hz"});

  catalog().at(config.scenario)(ctx);

  ctx.manifest.outputs = ctx.out.files;
  ctx.manifest.outputs.push_back("manifest.json");
  ctx.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json j = ctx.manifest.to_json();
  if (ctx.cal) j["calibration"] = calibration_to_json(*ctx.cal);
  ctx.out.write("manifest.json", dump_json(j) + "\n");
  return ctx.manifest;
}

}  // namespace bswap::harness
