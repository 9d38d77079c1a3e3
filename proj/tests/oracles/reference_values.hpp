#pragma once

// Generated by reference_values.py; do not edit by hand.
namespace oracle {

// J fitted to 90 kHz static ZZ, d = 3 (rad/s)
inline constexpr double kJ3 = 3915490.504593316;
// same fit at d = 4 (rad/s)
inline constexpr double kJ4 = 3915490.504592929;
// drive amplitude for an 800 ns sqrt(bSWAP) from the closed form (rad/s)
inline constexpr double kOmegaOp = 137981798.0231708;
// closed-form calibrated delta at kOmegaOp (rad/s)
inline constexpr double kDeltaOp = -8227051.5809668768;
// delta2 / (2 (delta2 - Delta))
inline constexpr double kEnhancement = 13.952873563218727;
// 2|H_eff(00,11)| by block elimination at the operating point, d = 3 (rad/s)
inline constexpr double kBlockRateOp = 1950262.9316148215;
// |omega_B_full| at the operating point (rad/s)
inline constexpr double kFormulaRateOp = 1963495.4084936199;
// block-elimination rate at J/2, same drive (rad/s)
inline constexpr double kBlockRateHalfJ = 980671.46163839463;
// |omega_B_full| at J/2 (rad/s)
inline constexpr double kFormulaRateHalfJ = 980490.62676444952;
// numeric two-photon resonance at Omega/2pi = 10 MHz, d = 3 (rad/s)
inline constexpr double kResonanceDelta10MHz = -1912624.5196189641;
// dressed splitting at that resonance (rad/s)
inline constexpr double kResonanceSplit10MHz = 372409.86937864847;

}  // namespace oracle
