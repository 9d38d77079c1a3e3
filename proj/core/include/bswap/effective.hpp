#pragma once

#include "bswap/hilbert.hpp"
#include "bswap/model.hpp"

namespace bswap {

/// Second-order coefficients of the two-qubit effective Hamiltonian
///   H = a_IZ/2 IZ + a_ZI/2 ZI + a_ZZ/4 ZZ + W_B/4 (cos2phi (XX-YY) + sin2phi (XY+YX)) + W_S/2 (XX+YY)
/// in the frame rotating at w_d = (w1+w2)/2 - delta_cal.
struct EffectiveCoefficients {
  double omega_B = 0.0;
  double omega_S = 0.0;
  double alpha_zz = 0.0;
  double alpha_sum = 0.0;   // (a_IZ + a_ZI)/2
  double alpha_diff = 0.0;  // (a_IZ - a_ZI)/2
  double delta_cal = 0.0;
};

using TwoQubitUnitary = CMatrix;  // 4x4, order |00>,|01>,|10>,|11>

double omega_B_main(const DeviceParams& dev, double omega);
double omega_B_full(const DeviceParams& dev, double omega1, double omega2, double delta);
double omega_S(const DeviceParams& dev, double omega1, double omega2, double delta);

struct AlphaCoefficients {
  double alpha_zz = 0.0;
  double alpha_sum = 0.0;
  double alpha_diff = 0.0;
};
AlphaCoefficients alpha_coeffs(const DeviceParams& dev, double omega1, double omega2, double delta);

/// Root of alpha_sum(delta) in |delta| < |Delta|/4, continued from delta = 0 at zero drive.
double calibrate_delta(const DeviceParams& dev, double omega1, double omega2);

/// Everything above evaluated at delta = calibrate_delta(dev, omega1, omega2).
EffectiveCoefficients effective_coefficients(const DeviceParams& dev, double omega1, double omega2);

/// Drive amplitude Omega_1 (with Omega_2 = lambda Omega_1) whose calibrated
/// |omega_B_full| equals `target_omega_B`.
double solve_drive_for_omega_B(const DeviceParams& dev, double target_omega_B);

/// delta_2 / (2 (delta_2 - Delta)).
double enhancement_factor(const DeviceParams& dev);
/// -2 J Omega^2 (1 + lambda) / Delta^2.
double omega_B_pure_qubit_limit(const DeviceParams& dev, double omega);

TwoQubitUnitary u_bell(double omega_B, double t, double phi);
/// exp(-i a_zz ZZ t/4) exp(-i a_minus (IZ - ZI) t/4), a_minus = a_IZ - a_ZI.
TwoQubitUnitary u_frame_corrections(double alpha_zz, double alpha_minus, double t);

/// Effective Hamiltonian assembled from the coefficients (4x4).
CMatrix effective_hamiltonian(const EffectiveCoefficients& c, double phi);

}  // namespace bswap
