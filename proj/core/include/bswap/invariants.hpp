#pragma once

#include <array>

#include "bswap/hilbert.hpp"

namespace bswap {

/// Local invariants (G1 complex, G2 real) of a two-qubit unitary, magic-basis form.
struct LocalInvariants {
  cplx g1;
  double g2 = 0.0;
};

LocalInvariants makhlin_invariants(const CMatrix& u);
bool locally_equivalent(const CMatrix& a, const CMatrix& b, double tol = 1e-9);

CMatrix iswap_gate();
CMatrix sqrt_iswap_gate();

}  // namespace bswap
