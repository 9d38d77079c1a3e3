#include "bswap/invariants.hpp"

#include <cmath>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

CMatrix magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix q(4, 4);
  q << 1, 0, 0, I_unit,  //
      0, I_unit, 1, 0,   //
      0, I_unit, -1, 0,  //
      1, 0, 0, -I_unit;
  return r * q;
}

}  // namespace

LocalInvariants makhlin_invariants(const CMatrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw DomainError("makhlin_invariants: expected a 4x4 unitary");
  const CMatrix q = magic_basis();
  const CMatrix ub = q.adjoint() * u * q;
  const CMatrix m = ub.transpose() * ub;
  const cplx det = u.determinant();
  const cplx tr = m.trace();
  const cplx tr2 = (m * m).trace();
  LocalInvariants out;
  out.g1 = tr * tr / (16.0 * det);
  out.g2 = ((tr * tr - tr2) / (4.0 * det)).real();
  return out;
}

bool locally_equivalent(const CMatrix& a, const CMatrix& b, double tol) {
  const LocalInvariants x = makhlin_invariants(a);
  const LocalInvariants y = makhlin_invariants(b);
  return std::abs(x.g1 - y.g1) < tol && std::abs(x.g2 - y.g2) < tol;
}

CMatrix iswap_gate() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1;
  u(3, 3) = 1;
  u(1, 2) = I_unit;
  u(2, 1) = I_unit;
  return u;
}

CMatrix sqrt_iswap_gate() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1;
  u(3, 3) = 1;
  u(1, 1) = r;
  u(2, 2) = r;
  u(1, 2) = I_unit * r;
  u(2, 1) = I_unit * r;
  return u;
}

}  // namespace bswap
