#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bswap/hilbert.hpp"

namespace bswap {

/// Two-qubit Pauli operator with index 4*i + j for sigma_i (x) sigma_j,
/// sigma_0..3 = I, X, Y, Z. Labels run II, IX, IY, IZ, XI, ..., ZZ.
const CMatrix& pauli2(int index);
const CMatrix& pauli1(int index);
std::string pauli_label(int index);
int pauli_index(const std::string& label);

/// Real 16-vector r_i = tr(P_i rho).
RVector pauli_vector(const CMatrix& rho);
/// rho = sum_i r_i P_i / 4.
CMatrix from_pauli_vector(const RVector& r);

/// Pre-measurement rotations of the tomography set.
enum class Rotation { I, Xpi, Xp2, Xm2, Yp2, Ym2 };
using RotationPair = std::pair<Rotation, Rotation>;

CMatrix rotation_matrix(Rotation r);               // 2x2
CMatrix rotation_matrix(const RotationPair& pair);  // 4x4, first qubit on the left factor
std::string rotation_label(Rotation r);
std::string rotation_label(const RotationPair& pair);

/// {I, Xpi, X+pi/2, X-pi/2, Y+pi/2, Y-pi/2}^2 with the second qubit fastest.
const std::vector<RotationPair>& measurement_set();

}  // namespace bswap
