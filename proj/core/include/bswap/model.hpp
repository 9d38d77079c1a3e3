#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bswap/hilbert.hpp"

namespace bswap {

struct TransmonParams {
  double omega01 = 0.0;  // rad/s
  double delta = 0.0;    // anharmonicity E12 - E01, rad/s (negative for transmons)
};

struct DeviceParams {
  TransmonParams q1;
  TransmonParams q2;
  double J = 0.0;       // exchange coupling, rad/s
  double lambda = 1.0;  // drive coupling of transmon 2 relative to transmon 1
  FockSpace space{3};

  double Delta() const { return q1.omega01 - q2.omega01; }
  /// Throws DomainError for non-positive frequencies or non-finite entries.
  void validate() const;
  DeviceParams with_J(double j) const;
  DeviceParams with_levels(int d) const;
};

struct DriveParams {
  double amplitude = 0.0;  // Omega_1 on transmon 1, rad/s; transmon 2 sees lambda * amplitude
  double frequency = 0.0;  // omega_d, rad/s
  double phase = 0.0;      // radians, wrapped into [0, 2pi)

  void validate() const;
};

/// Table I (in-enclosure rows) with J left at zero; pair with fit_J.
DeviceParams reference_device_uncoupled(int levels = 3);
/// Reference device with J fitted to the 90 kHz static ZZ.
DeviceParams reference_device(int levels = 3);

Operator system_hamiltonian(const DeviceParams& dev);
/// Lab-frame drive term Omega cos(w_d t + phi)(a + a^dag + lambda (b + b^dag)).
Operator drive_hamiltonian(const DeviceParams& dev, const DriveParams& drv, double t);
/// Static RWA Hamiltonian in the frame rotating at the drive frequency.
Operator rwa_hamiltonian(const DeviceParams& dev, const DriveParams& drv);

/// a + lambda b: the lowering part of the drive coupling.
CMatrix drive_lowering(const DeviceParams& dev);

/// Dressed eigenbasis of H_sys, column k is the dressed state adiabatically
/// connected to bare state k (max modulus overlap), phase chosen so that
/// <k|dressed_k> is real positive.
struct DressedBasis {
  RVector energies;  // indexed by bare label
  CMatrix vectors;   // column k <-> bare label k
  std::vector<bool> ambiguous;
  bool any_ambiguous = false;

  /// Columns for |00>, |01>, |10>, |11>.
  CMatrix computational(const FockSpace& space) const;
};

DressedBasis dressed_basis(const DeviceParams& dev);

struct Transition {
  std::string from;
  std::string to;
  double frequency = 0.0;  // rad/s; two-photon lines report (E_f - E_i)/2
  int photons = 1;
  bool ambiguous = false;
};

struct TransitionTable {
  std::vector<Transition> rows;
  bool any_ambiguous = false;

  const Transition* find(const std::string& from, const std::string& to) const;
};

TransitionTable spectrum(const DeviceParams& dev);

/// E11 - E10 - E01 + E00 from exact dressed energies. Requires d >= 2; vanishes
/// identically for d = 2 with pure exchange coupling.
double static_zz(const DeviceParams& dev);

/// Smallest positive J with |static_zz - target| < 2pi * 10 Hz. Throws
/// CalibrationError if no sign change exists in (0, |Delta|/2).
double fit_J(const DeviceParams& dev_without_J, double target_zz);

}  // namespace bswap
