#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bswap/dynamics.hpp"
#include "bswap/model.hpp"
#include "bswap/pulse.hpp"
#include "bswap/signal.hpp"

namespace bswap {

/// Two-photon resonance located numerically: the drive offset delta (w_d =
/// (w1+w2)/2 - delta) minimizing the splitting of the RWA eigenpair that
/// carries the dressed |00>, |11> weight.
struct Resonance {
  double delta = 0.0;
  double splitting = 0.0;   // rad/s, the simulated Omega_B at resonance
  double visibility = 0.0;  // max P(11) of the resonant two-level dynamics
};

/// Searches around `seed` (default: closed-form delta* shifted by -zeta/2).
Resonance find_resonance(const DeviceParams& dev, double omega, std::optional<double> seed = std::nullopt);

/// Populations vs square-pulse duration at fixed (omega, w_d), from dressed |00>.
Trace rabi_experiment(const DeviceParams& dev, double omega, double omega_d, const std::vector<double>& durations,
                      double phi = 0.0);

struct SweepRow {
  double omega = 0.0;
  double omega_B_sim = 0.0;
  double omega_B_sim_err = 0.0;
  double omega_B_formula = 0.0;
  double delta_closed = 0.0;
  double delta_used = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepOptions {
  double periods = 4.0;
  int samples = 400;
};

/// One row per amplitude; a failing row is flagged and the sweep continues.
std::vector<SweepRow> amplitude_sweep(const DeviceParams& dev, const std::vector<double>& amplitudes,
                                      const SweepOptions& opts = {});

/// Drive settings of the sqrt(bSWAP) pulse.
struct OperatingPoint {
  double omega = 0.0;
  double delta = 0.0;
  double gate_time = 800e-9;
  double ramp = 10e-9;
  double omega_B_formula = 0.0;
  double delta_closed = 0.0;

  double omega_d(const DeviceParams& dev) const;
};

/// Omega from the closed form so that pi/(2 Omega_B) = gate_time; delta from find_resonance.
OperatingPoint closed_form_operating_point(const DeviceParams& dev, double gate_time = 800e-9, double ramp = 10e-9);
/// Rescales Omega (re-locating the resonance each time) until the simulated
/// |00> -> |11> rotation at gate_time is pi/2 within `tol` rad.
OperatingPoint fine_calibrate(const DeviceParams& dev, const OperatingPoint& start, double dt = kDefaultDt,
                              double tol = 1e-5);

/// Flat two-photon pulse of the given duration, in the frame rotating at w_d.
Schedule bswap_schedule(const DeviceParams& dev, const OperatingPoint& op, double phi = 0.0,
                        std::optional<double> duration = std::nullopt);

/// C^dag X C with C the dressed computational columns.
CMatrix computational_block(const DeviceParams& dev, const CMatrix& full);

/// max over phi' of |<Bell(phi')|psi>|^2 for psi on {00,01,10,11}.
double bell_fidelity(const CVector& comp, bool renormalize, double* best_phase = nullptr);

/// Rotation angle of the {|00>,|11>} Bloch vector reached from |00>.
double bswap_rotation_angle(const CVector& comp);

/// Diagonal phase corrections (post: ZZ and local Z; pre: local Z) maximizing
/// |tr(ideal^dag post m pre)|.
struct PhaseCorrection {
  CMatrix pre = CMatrix::Identity(4, 4);
  CMatrix post = CMatrix::Identity(4, 4);
  double overlap = 0.0;  // |tr(ideal^dag post m pre)| / 4
};
PhaseCorrection fit_phase_corrections(const CMatrix& m, const CMatrix& ideal);

using Channel = std::function<CMatrix(const CMatrix&)>;
/// rho4 -> post C^dag S(C pre rho4 pre^dag C^dag) C post^dag, S the schedule's superoperator.
Channel gate_channel(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise,
                     const PhaseCorrection& corr, double dt = kDefaultDt);

struct EchoResult {
  Trace trace;  // time = total delay, column P00
  DampedFit fit;
};

/// sqrt(bSWAP) - tau/2 - bSWAP - tau/2 - sqrt(bSWAP)(phi = ramp * tau), from dressed |00>.
EchoResult bell_echo(const DeviceParams& dev, const NoiseParams& noise, const std::vector<double>& total_delays,
                     double phase_ramp_rate, const OperatingPoint& op, double dt = kDefaultDt);

enum class Axis { X, Y };

/// Gaussian (sigma = 50 ns, 200 ns) pulse on one transmon's local line,
/// resonant with its dressed 0 -> 1 line; the schedule frame is that line.
/// Angle 0 yields an idle of the same length. Throws CalibrationError when
/// leakage exceeds 1%.
Schedule single_qubit_gate(const DeviceParams& dev, int qubit, Axis axis, double angle, double sigma = 50e-9,
                           double dt = kDefaultDt);

}  // namespace bswap
