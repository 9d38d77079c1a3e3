#pragma once

#include <cstdint>
#include <vector>

#include "bswap/hilbert.hpp"
#include "bswap/pauli.hpp"

namespace bswap {

using DensityMatrix4 = CMatrix;
using PauliTransferMatrix = RMatrix;  // 16x16, rows/cols in pauli2 order

/// Joint readout observable M = b_II II + b_IZ IZ + b_ZI ZI + b_ZZ ZZ, with
/// Gaussian record noise of scale noise / sqrt(shots).
struct ReadoutModel {
  double beta_II = 0.0;
  double beta_IZ = 1.0 / 3.0;
  double beta_ZI = 1.0 / 3.0;
  double beta_ZZ = 1.0 / 3.0;
  double noise = 1.0;

  CMatrix observable() const;
  void validate() const;
};

struct MeasurementRecord {
  RotationPair setting;
  double mean = 0.0;
  long shots = 0;  // 0: exact expectation
};

/// Throws DomainError for an unphysical rho (eigenvalue < -1e-8, trace != 1).
std::vector<MeasurementRecord> simulate_readout(const DensityMatrix4& rho, const ReadoutModel& model, long shots,
                                                std::uint64_t seed);

/// 36x16 map from Pauli components to record means.
RMatrix tomography_design(const ReadoutModel& model, const std::vector<MeasurementRecord>& records);

/// Pseudo-inverse estimate with the II component fixed at 1. Not necessarily positive.
DensityMatrix4 state_linear_inversion(const std::vector<MeasurementRecord>& records, const ReadoutModel& model = {});

struct MleOptions {
  double grad_tol = 1e-8;
  int max_iterations = 20000;
};

/// Gaussian-likelihood estimate with rho = T^dag T / tr(T^dag T), T lower triangular.
DensityMatrix4 state_mle(const std::vector<MeasurementRecord>& records, const ReadoutModel& model = {},
                         const MleOptions& opts = {});

/// Closest density matrix in the 2-norm with the same eigenvectors (eigenvalue clipping with redistribution).
DensityMatrix4 nearest_physical_state(const CMatrix& rho);

double state_fidelity(const DensityMatrix4& rho, const CVector& target);
double min_eigenvalue(const CMatrix& hermitian);

PauliTransferMatrix ptm_of_unitary(const CMatrix& u);
/// R_ij = tr(P_i Lambda(P_j)) / 4 for a linear map given on 4x4 matrices.
template <class Map>
PauliTransferMatrix ptm_of_map(Map&& lambda) {
  PauliTransferMatrix r(16, 16);
  for (int j = 0; j < 16; ++j) {
    const CMatrix out = lambda(pauli2(j));
    for (int i = 0; i < 16; ++i) r(i, j) = (pauli2(i) * out).trace().real() / 4.0;
  }
  return r;
}

/// (tr(R_ideal^T R_measured) + 4) / 20
double gate_fidelity(const PauliTransferMatrix& measured, const PauliTransferMatrix& ideal);

/// Pauli expectations of u_bell(t = pi/(2 Omega_B), phi)|00> per phi; columns follow pauli2 order 1..15.
struct PhaseSweepRow {
  double phi = 0.0;
  RVector expectation;  // 16 entries, index 0 is II = 1
};
std::vector<PhaseSweepRow> pauli_phase_sweep(const std::vector<double>& phis);

}  // namespace bswap
