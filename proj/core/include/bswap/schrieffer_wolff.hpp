#pragma once

#include <vector>

#include "bswap/hilbert.hpp"
#include "bswap/model.hpp"

namespace bswap {

struct SwResult {
  RVector energies;  // E_p^(0) + E_p^(1) + E_p^(2), bare order
  CMatrix generator; // S = S^(1) + S^(2), transformation exp(-iS)
};

/// Perturbative diagonalization of H0 + V, H0 diagonal. `order` is 1 or 2.
/// Throws DegeneracyError when a coupled pair has |V_pq| >= |E_p - E_q| / 2.
SwResult sw_diagonalize(const Operator& h0, const Operator& v, int order);

/// Effective Hamiltonian on `low` after eliminating the complementary block.
/// Rows/columns follow the order of `low`.
CMatrix sw_block_eliminate(const Operator& h0, const Operator& v, const std::vector<std::size_t>& low, int order);

/// {|00>,|11>,|02>} or {|00>,|11>,|20>} depending on which two-photon
/// resonance (Delta ~ delta2 or Delta ~ -delta1) is closer.
std::vector<std::size_t> bswap_low_manifold(const DeviceParams& dev);

enum class Dressing { exact, perturbative };

/// |00>-|11> coupling (full rate, i.e. 2 |H_eff(00,11)|) of the RWA Hamiltonian
/// at (omega, delta), obtained by dressing the static part (exactly, or to
/// second order in J) and eliminating everything outside the low manifold.
double numeric_bswap_rate(const DeviceParams& dev, double omega1, double omega2, double delta,
                          Dressing dressing = Dressing::exact);

}  // namespace bswap
