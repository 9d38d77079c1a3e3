#include "bswap/pauli.hpp"

#include <cmath>
#include <numbers>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

std::array<CMatrix, 4> make_single() {
  std::array<CMatrix, 4> p;
  p[0] = CMatrix::Identity(2, 2);
  p[1] = CMatrix::Zero(2, 2);
  p[1] << 0, 1, 1, 0;
  p[2] = CMatrix::Zero(2, 2);
  p[2] << 0, -I_unit, I_unit, 0;
  p[3] = CMatrix::Zero(2, 2);
  p[3] << 1, 0, 0, -1;
  return p;
}

const std::array<CMatrix, 4>& singles() {
  static const auto p = make_single();
  return p;
}

std::array<CMatrix, 16> make_two() {
  std::array<CMatrix, 16> p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p[static_cast<std::size_t>(4 * i + j)] = kron(singles()[static_cast<std::size_t>(i)], singles()[static_cast<std::size_t>(j)]);
  return p;
}

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

}  // namespace

const CMatrix& pauli1(int index) {
  if (index < 0 || index > 3) throw DomainError("pauli1: index out of range");
  return singles()[static_cast<std::size_t>(index)];
}

const CMatrix& pauli2(int index) {
  static const auto p = make_two();
  if (index < 0 || index > 15) throw DomainError("pauli2: index out of range");
  return p[static_cast<std::size_t>(index)];
}

std::string pauli_label(int index) {
  if (index < 0 || index > 15) throw DomainError("pauli_label: index out of range");
  return {kLetters[index / 4], kLetters[index % 4]};
}

int pauli_index(const std::string& label) {
  for (int k = 0; k < 16; ++k)
    if (pauli_label(k) == label) return k;
  throw DomainError("pauli_index: unknown label '" + label + "'");
}

RVector pauli_vector(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DomainError("pauli_vector: expected 4x4");
  RVector r(16);
  for (int k = 0; k < 16; ++k) r(k) = (pauli2(k) * rho).trace().real();
  return r;
}

CMatrix from_pauli_vector(const RVector& r) {
  if (r.size() != 16) throw DomainError("from_pauli_vector: expected 16 components");
  CMatrix rho = CMatrix::Zero(4, 4);
  for (int k = 0; k < 16; ++k) rho += r(k) * pauli2(k);
  return rho / 4.0;
}

CMatrix rotation_matrix(Rotation r) {
  // exp(-i theta/2 sigma)
  auto rot = [](int axis, double theta) {
    return CMatrix(std::cos(theta / 2) * pauli1(0) - I_unit * std::sin(theta / 2) * pauli1(axis));
  };
  constexpr double pi = std::numbers::pi;
  switch (r) {
    case Rotation::I:
      return pauli1(0);
    case Rotation::Xpi:
      return rot(1, pi);
    case Rotation::Xp2:
      return rot(1, pi / 2);
    case Rotation::Xm2:
      return rot(1, -pi / 2);
    case Rotation::Yp2:
      return rot(2, pi / 2);
    case Rotation::Ym2:
      return rot(2, -pi / 2);
  }
  throw DomainError("rotation_matrix: unknown rotation");
}

CMatrix rotation_matrix(const RotationPair& pair) {
  return kron(rotation_matrix(pair.first), rotation_matrix(pair.second));
}

std::string rotation_label(Rotation r) {
  switch (r) {
    case Rotation::I:
      return "I";
    case Rotation::Xpi:
      return "Xpi";
    case Rotation::Xp2:
      return "X+pi/2";
    case Rotation::Xm2:
      return "X-pi/2";
    case Rotation::Yp2:
      return "Y+pi/2";
    case Rotation::Ym2:
      return "Y-pi/2";
  }
  return "?";
}

std::string rotation_label(const RotationPair& pair) {
  return rotation_label(pair.first) + "," + rotation_label(pair.second);
}

const std::vector<RotationPair>& measurement_set() {
  static const std::vector<RotationPair> set = [] {
    const Rotation all[6] = {Rotation::I, Rotation::Xpi, Rotation::Xp2, Rotation::Xm2, Rotation::Yp2, Rotation::Ym2};
    std::vector<RotationPair> s;
    for (Rotation a : all)
      for (Rotation b : all) s.emplace_back(a, b);
    return s;
  }();
  return set;
}

}  // namespace bswap
