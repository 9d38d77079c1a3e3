#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

namespace bswap {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

enum class Mode { first = 1, second = 2 };

/// Truncated Fock space of two d-level modes. Basis index of |n1 n2> is
/// n1 * d + n2 (mode 2 fastest); every module relies on this ordering.
class FockSpace {
 public:
  explicit FockSpace(int levels = 3);

  int levels() const { return levels_; }
  std::size_t dim() const { return static_cast<std::size_t>(levels_) * levels_; }
  std::size_t index(int n1, int n2) const;
  int n1_of(std::size_t k) const { return static_cast<int>(k) / levels_; }
  int n2_of(std::size_t k) const { return static_cast<int>(k) % levels_; }
  int excitations(std::size_t k) const { return n1_of(k) + n2_of(k); }
  std::string label(std::size_t k) const;

  bool operator==(const FockSpace&) const = default;

 private:
  int levels_;
};

/// Normalized state vector.
class Ket {
 public:
  /// Normalizes `amplitudes`; throws DomainError for a zero or non-finite vector.
  explicit Ket(CVector amplitudes);
  static Ket basis(std::size_t dim, std::size_t k);

  const CVector& vec() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  cplx operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

 private:
  CVector amps_;
};

/// Dense complex operator with a Hermiticity tag. The tag is only set after the
/// entries pass ||M - M^dag||_max < 1e-12 (relative to the largest entry).
class Operator {
 public:
  Operator() = default;
  explicit Operator(CMatrix m);

  /// Tags `m` as Hermitian after checking it; throws DomainError otherwise.
  static Operator hermitian(CMatrix m);
  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim);

  const CMatrix& mat() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  bool is_hermitian() const { return hermitian_; }
  cplx operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Operator adjoint() const;

 private:
  CMatrix m_;
  bool hermitian_ = false;
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, const Operator& a);
Operator operator*(double s, const Operator& a);
CVector operator*(const Operator& a, const CVector& v);

Operator commutator(const Operator& a, const Operator& b);
double max_abs(const CMatrix& m);
double hermiticity_defect(const CMatrix& m);

/// Single-mode lowering operator embedded as a (x) I or I (x) b.
Operator annihilation(const FockSpace& space, Mode mode);
Operator number(const FockSpace& space, Mode mode);
/// Total excitation number a^dag a + b^dag b.
Operator total_number(const FockSpace& space);

/// Lowering operator of a single d-level mode.
CMatrix single_mode_lowering(int levels);

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns, unitary
};

/// Hermitian eigendecomposition. Rejects operators without the Hermitian tag.
EigenSystem eigh(const Operator& op);

/// exp(scale * op). Hermitian operators with purely imaginary or purely real
/// scale go through eigh; everything else uses scaling-and-squaring with a Padé
/// approximant.
Operator expm(const Operator& op, cplx scale);

/// exp(-i t H) for Hermitian H via eigh, regardless of tag checks on scale.
CMatrix expm_hermitian(const CMatrix& h, double t);

/// General complex matrix exponential (scaling and squaring).
CMatrix expm_general(const CMatrix& m);

/// ||U^dag U - I||_max
double unitarity_defect(const CMatrix& u);

/// Kronecker product.
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace bswap
