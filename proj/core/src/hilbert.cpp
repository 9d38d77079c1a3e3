#include "bswap/hilbert.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

constexpr double kHermitianTol = 1e-12;

bool passes_hermitian_check(const CMatrix& m) {
  if (m.rows() != m.cols()) return false;
  return hermiticity_defect(m) <= kHermitianTol * std::max(1.0, max_abs(m));
}

}  // namespace

FockSpace::FockSpace(int levels) : levels_(levels) {
  if (levels < 2) throw DomainError("FockSpace: need at least 2 levels per mode, got " + std::to_string(levels));
}

std::size_t FockSpace::index(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= levels_ || n2 >= levels_)
    throw DomainError("FockSpace::index: level out of range");
  return static_cast<std::size_t>(n1 * levels_ + n2);
}

std::string FockSpace::label(std::size_t k) const {
  return std::to_string(n1_of(k)) + std::to_string(n2_of(k));
}

Ket::Ket(CVector amplitudes) : amps_(std::move(amplitudes)) {
  const double n = amps_.norm();
  if (!std::isfinite(n) || n == 0.0) throw DomainError("Ket: cannot normalize a zero or non-finite vector");
  amps_ /= n;
}

Ket Ket::basis(std::size_t dim, std::size_t k) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return Ket(std::move(v));
}

Operator::Operator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DomainError("Operator: matrix must be square");
}

Operator Operator::hermitian(CMatrix m) {
  if (!passes_hermitian_check(m)) throw DomainError("Operator::hermitian: matrix is not Hermitian");
  Operator op(std::move(m));
  op.hermitian_ = true;
  return op;
}

Operator Operator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return hermitian(CMatrix::Identity(n, n));
}

Operator Operator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return hermitian(CMatrix::Zero(n, n));
}

Operator Operator::adjoint() const {
  Operator out(m_.adjoint());
  out.hermitian_ = hermitian_;
  return out;
}

namespace {

Operator tagged(CMatrix m, bool try_hermitian) {
  if (try_hermitian && passes_hermitian_check(m)) return Operator::hermitian(std::move(m));
  return Operator(std::move(m));
}

}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  return tagged(a.mat() + b.mat(), a.is_hermitian() && b.is_hermitian());
}
Operator operator-(const Operator& a, const Operator& b) {
  return tagged(a.mat() - b.mat(), a.is_hermitian() && b.is_hermitian());
}
Operator operator*(const Operator& a, const Operator& b) { return Operator(a.mat() * b.mat()); }
Operator operator*(cplx s, const Operator& a) { return tagged(s * a.mat(), a.is_hermitian() && s.imag() == 0.0); }
Operator operator*(double s, const Operator& a) { return tagged(s * a.mat(), a.is_hermitian()); }
CVector operator*(const Operator& a, const CVector& v) { return a.mat() * v; }

Operator commutator(const Operator& a, const Operator& b) { return Operator(a.mat() * b.mat() - b.mat() * a.mat()); }

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& m) { return max_abs(m - m.adjoint()); }

CMatrix single_mode_lowering(int levels) {
  CMatrix a = CMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator annihilation(const FockSpace& space, Mode mode) {
  const int d = space.levels();
  const CMatrix a = single_mode_lowering(d);
  const CMatrix id = CMatrix::Identity(d, d);
  return Operator(mode == Mode::first ? kron(a, id) : kron(id, a));
}

Operator number(const FockSpace& space, Mode mode) {
  const CMatrix a = annihilation(space, mode).mat();
  return Operator::hermitian(a.adjoint() * a);
}

Operator total_number(const FockSpace& space) {
  return number(space, Mode::first) + number(space, Mode::second);
}

EigenSystem eigh(const Operator& op) {
  if (!op.is_hermitian()) throw DomainError("eigh: operator is not tagged Hermitian");
  // Symmetrize so rounding in the lower triangle cannot leak in.
  const CMatrix h = 0.5 * (op.mat() + op.mat().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw DomainError("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  const CMatrix& v = solver.eigenvectors();
  CVector phases(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-I_unit * t * solver.eigenvalues()(k));
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix expm_general(const CMatrix& m) { return m.exp(); }

Operator expm(const Operator& op, cplx scale) {
  if (!op.mat().allFinite() || !std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
    throw DomainError("expm: non-finite input");
  if (op.is_hermitian() && scale.real() == 0.0) {
    // exp(i s H) with real s: unitary, via eigendecomposition.
    return Operator(expm_hermitian(op.mat(), -scale.imag()));
  }
  if (op.is_hermitian() && scale.imag() == 0.0) {
    const EigenSystem es = eigh(op);
    const RVector e = (scale.real() * es.values.array()).exp();
    return Operator::hermitian(es.vectors * e.cast<cplx>().asDiagonal() * es.vectors.adjoint());
  }
  return Operator(expm_general(scale * op.mat()));
}

double unitarity_defect(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

}  // namespace bswap
