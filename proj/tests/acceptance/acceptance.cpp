// One PASS/FAIL line per criterion; --criterion N runs a single one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bswap/device_config.hpp"
#include "bswap/effective.hpp"
#include "bswap/errors.hpp"
#include "bswap/experiments.hpp"
#include "bswap/harness.hpp"
#include "bswap/invariants.hpp"
#include "bswap/process.hpp"
#include "bswap/schrieffer_wolff.hpp"
#include "bswap/tomography.hpp"
#include "bswap/units.hpp"

using namespace bswap;
using namespace bswap::units;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string device_path;

DeviceConfig device(int levels = 3) { return load_device_config(device_path, levels); }

CVector evolve_from_ground(const DeviceParams& dev, const OperatingPoint& op, double dt = kDefaultDt) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  return comp.adjoint() * propagate_state(dev, bswap_schedule(dev, op), comp.col(0), dt);
}

double zz_from_free_evolution(const DeviceParams& dev, double t, double dt) {
  Schedule s;
  s.then(PulseSegment::idle(t));
  const CMatrix u = computational_block(dev, propagate_unitary(dev, s, dt).mat());
  const double phase = std::arg(u(3, 3) * u(0, 0) / (u(1, 1) * u(2, 2)));
  return -phase / t;
}

Outcome c1_zz_calibration() {
  const DeviceConfig d3 = device(3), d4 = device(4);
  const double target = khz(90.0);
  const double zz = static_zz(d3.device);
  const double j_rel = std::abs(d4.device.J / d3.device.J - 1);
  const double zz_a = zz_from_free_evolution(d3.device, 2e-6, 0.1e-9);
  const double zz_b = zz_from_free_evolution(d3.device, 2e-6, 0.05e-9);
  const double dyn_rel = std::max(std::abs(zz_a / target - 1), std::abs(zz_b / target - 1));
  const bool pass = std::abs(zz - target) < hz(10.0) && j_rel < 1e-3 && dyn_rel < 1e-3;
  return {pass, fmt("ZZ = %.4f kHz (|err| = %.3g Hz, tol 10 Hz); J = %.6f MHz, |J(d=4)/J(d=3) - 1| = %.2g (tol 1e-3); "
                    "ZZ from free evolution at dt 0.1/0.05 ns = %.4f/%.4f kHz",
                    to_khz(zz), std::abs(zz - target) / (2 * pi), to_mhz(d3.device.J), j_rel, to_khz(zz_a),
                    to_khz(zz_b))};
}

Outcome c2_enhancement() {
  const double f = enhancement_factor(device().device);
  return {f >= 12 && f <= 16, fmt("enhancement factor = %.4f (window [12, 16])", f)};
}

struct SweepSummary {
  double slope = 0;
  double worst_ratio_formula_gate = 1;  // over points with formula Omega_B <= 100 kHz
  double worst_ratio_sim_gate = 1;      // over points with simulated Omega_B <= 100 kHz
  double last_ratio = 0;
  int failed = 0;
};

SweepSummary sweep_summary(const DeviceParams& dev) {
  std::vector<double> amps;
  for (int k = 0; k < 24; ++k) amps.push_back(mhz(1.0 * std::pow(60.0, k / 23.0)));
  const auto rows = amplitude_sweep(dev, amps);
  SweepSummary s;
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    const double ratio = r.omega_B_sim / r.omega_B_formula;
    if (r.omega <= mhz(10.0) * (1 + 1e-12)) {
      x.push_back(std::log(r.omega));
      y.push_back(std::log(r.omega_B_sim));
    }
    if (r.omega_B_formula <= khz(100.0))
      s.worst_ratio_formula_gate = std::abs(ratio - 1) > std::abs(s.worst_ratio_formula_gate - 1) ? ratio : s.worst_ratio_formula_gate;
    if (r.omega_B_sim <= khz(100.0))
      s.worst_ratio_sim_gate = std::abs(ratio - 1) > std::abs(s.worst_ratio_sim_gate - 1) ? ratio : s.worst_ratio_sim_gate;
    s.last_ratio = ratio;
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return s;
}

Outcome c3_quadratic_scaling() {
  const SweepSummary s = sweep_summary(device(4).device);
  const SweepSummary s3 = sweep_summary(device(3).device);
  const bool pass = s.failed == 0 && std::abs(s.slope - 2) <= 0.05 && s.worst_ratio_formula_gate >= 0.9 &&
                    s.worst_ratio_formula_gate <= 1.1 && s.last_ratio < 1;
  return {pass, fmt("d=4, 1-60 MHz (24 pts): slope over 1-10 MHz = %.4f (2 +- 0.05); worst sim/formula where "
                    "formula <= 100 kHz = %.4f ([0.9, 1.1]); at 60 MHz ratio = %.3f (< 1); "
                    "[info] worst ratio where sim <= 100 kHz = %.4f; d=3 slope = %.4f",
                    s.slope, s.worst_ratio_formula_gate, s.last_ratio, s.worst_ratio_sim_gate, s3.slope)};
}

Outcome c4_operating_point() {
  const DeviceParams dev = device().device;
  const OperatingPoint closed = closed_form_operating_point(dev);
  double phase_closed = 0, phase_fine = 0;
  const CVector a = evolve_from_ground(dev, closed);
  const double f_closed = bell_fidelity(a, false, &phase_closed);
  const OperatingPoint fine = fine_calibrate(dev, closed);
  const CVector b = evolve_from_ground(dev, fine);
  const double f_fine = bell_fidelity(b, false, &phase_fine);
  const bool pass = f_closed >= 0.98 && f_fine >= 0.99;
  return {pass, fmt("closed-form drive %.4f MHz: rotation %.4f rad (pi/2 = 1.5708), Bell fidelity %.4f (>= 0.98); "
                    "recalibrated drive %.4f MHz: Bell fidelity %.5f (>= 0.99), phi' = %.4f rad",
                    to_mhz(closed.omega), bswap_rotation_angle(a), f_closed, to_mhz(fine.omega), f_fine, phase_fine)};
}

harness::Calibration operating_calibration() { return harness::calibrate(device()); }

Outcome c5_tomography_round_trip() {
  const CMatrix u = u_bell(1.0, pi, 0.0);
  const PauliTransferMatrix ideal = ptm_of_unitary(u);
  const auto res = process_tomography([&](const CMatrix& r) { return CMatrix(u * r * u.adjoint()); }, ReadoutModel{},
                                      0, 0, true);
  const double f_ideal_lin = gate_fidelity(res.linear, ideal), f_ideal_mle = gate_fidelity(res.mle, ideal);

  const harness::Calibration cal = operating_calibration();
  const harness::GateStudy g = harness::study_gate(cal.config.device, cal.fine, harness::Gate::sqrt_bswap,
                                                   NoiseParams{}, ReadoutModel{}, 0, 0, true);
  const bool pass = std::abs(f_ideal_lin - 1) < 1e-6 && std::abs(f_ideal_mle - 1) < 1e-6 && g.fidelity_linear >= 0.98 &&
                    g.fidelity_mle >= 0.98;
  return {pass, fmt("ideal bSWAP: F_g linear %.9f, MLE %.9f (1 within 1e-6); simulated sqrt(bSWAP): F_g linear %.5f, "
                    "MLE %.5f (>= 0.98)",
                    f_ideal_lin, f_ideal_mle, g.fidelity_linear, g.fidelity_mle)};
}

Outcome c6_decoherence() {
  const harness::Calibration cal = operating_calibration();
  const NoiseParams noise = harness::dephasing_for_t2star(cal.config, 4e-6);
  const harness::GateStudy g =
      harness::study_gate(cal.config.device, cal.fine, harness::Gate::sqrt_bswap, noise, ReadoutModel{}, 0, 0, true);
  const auto in = [](double f) { return f >= 0.82 && f <= 0.92; };
  return {in(g.fidelity_linear) && in(g.fidelity_mle),
          fmt("T2* = 4 us (Tphi = %.3f/%.3f us, T1 = %.0f/%.0f us): F_g linear %.4f, MLE %.4f (window [0.82, 0.92])",
              to_us(noise.tphi_q1), to_us(noise.tphi_q2), to_us(noise.t1_q1), to_us(noise.t1_q2), g.fidelity_linear,
              g.fidelity_mle)};
}

Outcome c7_sw_cross_validation() {
  const DeviceParams dev = device().device;
  const double om = solve_drive_for_omega_B(dev, pi / (2 * 800e-9));
  const double de = calibrate_delta(dev, om, dev.lambda * om);
  const double closed = std::abs(omega_B_full(dev, om, dev.lambda * om, de));
  const double numeric = numeric_bswap_rate(dev, om, dev.lambda * om, de);
  const DeviceParams half = dev.with_J(dev.J / 2);
  const double closed_half = std::abs(omega_B_full(half, om, half.lambda * om, de));
  const double numeric_half = numeric_bswap_rate(half, om, half.lambda * om, de);
  const double rel = std::abs(numeric / closed - 1);
  const double shrink = std::abs(numeric - closed) / std::abs(numeric_half - closed_half);
  return {rel < 0.1 && shrink >= 6,
          fmt("drive %.4f MHz: numeric %.4f kHz vs closed form %.4f kHz (rel %.4f, tol 0.1); residual ratio J -> J/2 = "
              "%.1f (>= 6)",
              to_mhz(om), to_khz(numeric), to_khz(closed), rel, shrink)};
}

Outcome c8_properties() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const DeviceParams dev = device().device;
  const double om = mhz(20.0);

  DeviceParams harmonic = dev;
  harmonic.q1.delta = harmonic.q2.delta = 0.0;
  check(omega_B_main(harmonic, om) == 0.0, "harmonic limit");

  double prev = 1;
  for (double r : {1e3, 1e4, 1e5}) {
    DeviceParams d = dev;
    d.q1.delta = d.q2.delta = -r * std::abs(dev.Delta());
    const double dev_r = std::abs(omega_B_main(d, om) / omega_B_pure_qubit_limit(d, om) - 1);
    check(dev_r < 1e-2 / r && dev_r < prev, fmt("pure-qubit limit at %g", r));
    prev = dev_r;
  }
  const double full0 = omega_B_full(dev, om, dev.lambda * om, 0.0), main = omega_B_main(dev, om);
  check(std::abs(full0 - main) <= 1e-12 * std::abs(main), "omega_B_full(delta = 0) == omega_B_main");

  const double wb = 1.3e6;
  const CMatrix id = CMatrix::Identity(4, 4);
  CMatrix flip = CMatrix::Identity(4, 4);
  flip(0, 0) = flip(3, 3) = -1;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double t = 3 * u01(rng) / wb, phi = 2 * pi * u01(rng);
    check(max_abs(u_bell(wb, t, phi) * u_bell(wb, -t, phi) - id) < 1e-10, "u_bell inverse");
    check(max_abs(u_bell(wb, 4 * pi / wb, phi) - id) < 1e-10, "u_bell period 4pi");
    check(max_abs(u_bell(wb, 2 * pi / wb, phi) - flip) < 1e-10, "u_bell half period");
    const CMatrix ub = u_bell(wb, t, phi), fc = u_frame_corrections(2.1e5, -3.3e5, t);
    check(max_abs(ub * fc - fc * ub) < 1e-12, "frame corrections commute with u_bell");
  }
  check(locally_equivalent(u_bell(wb, pi / wb, 0.0), iswap_gate()), "bSWAP ~ iSWAP");
  check(locally_equivalent(u_bell(wb, pi / (2 * wb), 0.0), sqrt_iswap_gate()), "sqrt(bSWAP) ~ sqrt(iSWAP)");

  auto random_unitary = [&](int n) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return expm_hermitian(CMatrix(0.5 * (m + m.adjoint())), 1.0);
  };
  for (int k = 0; k < 5; ++k) {
    const CMatrix a = random_unitary(4), b = random_unitary(4);
    const RMatrix ra = ptm_of_unitary(a), rb = ptm_of_unitary(b);
    check((ra.transpose() * ra - RMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9, "PTM orthogonality");
    check((ptm_of_unitary(CMatrix(a * b)) - ra * rb).cwiseAbs().maxCoeff() < 1e-9, "PTM homomorphism");
  }

  const ReadoutModel model;
  for (int k = 0; k < 5; ++k) {
    const CMatrix v = random_unitary(4).leftCols(1 + k % 4);
    CMatrix rho = v * v.adjoint();
    rho /= rho.trace().real();
    check(max_abs(state_linear_inversion(simulate_readout(rho, model, 0, 0), model) - rho) < 1e-9,
          "linear inversion round trip");
    const CMatrix mle = state_mle(simulate_readout(rho, model, 200, 100 + k), model);
    check(min_eigenvalue(mle) >= -1e-14 && std::abs(mle.trace() - 1.0) < 1e-14, "MLE physicality");
  }

  std::string detail = failures.empty() ? "all limit, unitary, PTM and estimator identities hold" : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bswap acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
  device_path = BSWAP_DEVICE_FILE;
  app.add_option("--device", device_path, "Reference device file")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"ZZ calibration", c1_zz_calibration},
      {"enhancement factor", c2_enhancement},
      {"quadratic scaling", c3_quadratic_scaling},
      {"sqrt(bSWAP) operating point", c4_operating_point},
      {"tomography round trip", c5_tomography_round_trip},
      {"decoherence-limited fidelity", c6_decoherence},
      {"Schrieffer-Wolff cross-validation", c7_sw_cross_validation},
      {"limit identities and properties", c8_properties},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] C%zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
