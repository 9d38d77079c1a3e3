#include "bswap/schrieffer_wolff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

RVector diagonal_of(const Operator& h0) {
  const CMatrix& m = h0.mat();
  const double off = max_abs(m - CMatrix(m.diagonal().asDiagonal()));
  if (off > 1e-12 * std::max(1.0, max_abs(m))) throw DomainError("Schrieffer-Wolff: H0 must be diagonal");
  return m.diagonal().real();
}

void require_separated(double coupling, double gap, std::size_t p, std::size_t q, const char* where) {
  if (std::abs(coupling) >= 0.5 * std::abs(gap))
    throw DegeneracyError(std::string(where) + ": states " + std::to_string(p) + " and " + std::to_string(q) +
                          " are coupled by " + std::to_string(std::abs(coupling)) + " across a gap of " +
                          std::to_string(std::abs(gap)));
}

// S_pq = -i X_pq / (E_p - E_q) for p != q, zero on the diagonal.
CMatrix generator_for(const RVector& e, const CMatrix& x, double floor, const char* where) {
  const Eigen::Index n = e.size();
  CMatrix s = CMatrix::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p == q || std::abs(x(p, q)) <= floor) continue;
      const double gap = e(p) - e(q);
      require_separated(std::abs(x(p, q)), gap, static_cast<std::size_t>(p), static_cast<std::size_t>(q), where);
      s(p, q) = -I_unit * x(p, q) / gap;
    }
  return s;
}

}  // namespace

SwResult sw_diagonalize(const Operator& h0, const Operator& v, int order) {
  if (order != 1 && order != 2) throw DomainError("sw_diagonalize: order must be 1 or 2");
  if (h0.dim() != v.dim()) throw DomainError("sw_diagonalize: dimension mismatch");
  const RVector e = diagonal_of(h0);
  const CMatrix& vm = v.mat();
  const CMatrix h0m = h0.mat();
  const double floor = 1e-14 * std::max(1.0, max_abs(vm));

  SwResult r;
  r.energies = e + vm.diagonal().real();
  CMatrix s1 = generator_for(e, vm, floor, "sw_diagonalize");
  r.generator = s1;
  if (order == 1) return r;

  // Second-order term of exp(iS) H exp(-iS).
  const CMatrix c1 = s1 * h0m - h0m * s1;
  const CMatrix h2 = I_unit * (s1 * vm - vm * s1) - 0.5 * (s1 * c1 - c1 * s1);
  r.energies += h2.diagonal().real();
  r.generator += generator_for(e, h2, floor * floor, "sw_diagonalize");
  return r;
}

CMatrix sw_block_eliminate(const Operator& h0, const Operator& v, const std::vector<std::size_t>& low, int order) {
  if (order != 1 && order != 2) throw DomainError("sw_block_eliminate: order must be 1 or 2");
  const RVector e = diagonal_of(h0);
  const CMatrix& vm = v.mat();
  const auto n = static_cast<std::size_t>(e.size());
  std::vector<bool> is_low(n, false);
  for (std::size_t k : low) {
    if (k >= n) throw DomainError("sw_block_eliminate: low index out of range");
    is_low[k] = true;
  }
  std::vector<std::size_t> high;
  for (std::size_t k = 0; k < n; ++k)
    if (!is_low[k]) high.push_back(k);

  const auto m = static_cast<Eigen::Index>(low.size());
  CMatrix heff = CMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto p = static_cast<Eigen::Index>(low[static_cast<std::size_t>(i)]);
    heff(i, i) += e(p);
    for (Eigen::Index j = 0; j < m; ++j) heff(i, j) += vm(p, static_cast<Eigen::Index>(low[static_cast<std::size_t>(j)]));
  }
  if (order == 1) return heff;

  const double floor = 1e-14 * std::max(1.0, max_abs(vm));
  for (std::size_t pl : low)
    for (std::size_t hh : high) {
      const cplx c = vm(static_cast<Eigen::Index>(pl), static_cast<Eigen::Index>(hh));
      if (std::abs(c) > floor)
        require_separated(std::abs(c), e(static_cast<Eigen::Index>(pl)) - e(static_cast<Eigen::Index>(hh)), pl, hh,
                          "sw_block_eliminate");
    }

  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto p = static_cast<Eigen::Index>(low[static_cast<std::size_t>(i)]);
      const auto q = static_cast<Eigen::Index>(low[static_cast<std::size_t>(j)]);
      cplx acc = 0;
      for (std::size_t hh : high) {
        const auto h = static_cast<Eigen::Index>(hh);
        acc += vm(p, h) * vm(h, q) * (1.0 / (e(p) - e(h)) + 1.0 / (e(q) - e(h)));
      }
      heff(i, j) += 0.5 * acc;
    }
  return heff;
}

std::vector<std::size_t> bswap_low_manifold(const DeviceParams& dev) {
  const FockSpace& s = dev.space;
  if (s.levels() < 3) return {s.index(0, 0), s.index(1, 1)};
  const double D = dev.Delta();
  const double miss_02 = std::abs(D - dev.q2.delta);
  const double miss_20 = std::abs(D + dev.q1.delta);
  if (miss_02 <= miss_20) return {s.index(0, 0), s.index(1, 1), s.index(0, 2)};
  return {s.index(0, 0), s.index(1, 1), s.index(2, 0)};
}

double numeric_bswap_rate(const DeviceParams& dev, double omega1, double omega2, double delta, Dressing dressing) {
  const FockSpace& s = dev.space;
  const double w_d = 0.5 * (dev.q1.omega01 + dev.q2.omega01) - delta;
  const CMatrix a = annihilation(s, Mode::first).mat();
  const CMatrix b = annihilation(s, Mode::second).mat();
  const CMatrix low_op = omega1 * a + omega2 * b;
  const CMatrix drive = 0.5 * (low_op + low_op.adjoint());
  const auto n = static_cast<Eigen::Index>(s.dim());

  RVector energies(n);
  CMatrix frame;
  if (dressing == Dressing::exact) {
    const DressedBasis db = dressed_basis(dev);
    if (db.any_ambiguous) throw DegeneracyError("numeric_bswap_rate: ambiguous dressed labels");
    frame = db.vectors;
    for (Eigen::Index k = 0; k < n; ++k) energies(k) = db.energies(k) - w_d * s.excitations(static_cast<std::size_t>(k));
  } else {
    const CMatrix nt = total_number(s).mat();
    const double w_ref = 0.5 * (dev.q1.omega01 + dev.q2.omega01);
    const CMatrix hs = system_hamiltonian(dev).mat() - w_ref * nt;
    CMatrix h0 = CMatrix(hs.diagonal().asDiagonal());
    const SwResult sw = sw_diagonalize(Operator::hermitian(h0), Operator::hermitian(hs - h0), 2);
    frame = expm_general(-I_unit * sw.generator);  // columns: perturbative dressed states
    for (Eigen::Index k = 0; k < n; ++k)
      energies(k) = sw.energies(k) + (w_ref - w_d) * s.excitations(static_cast<std::size_t>(k));
  }
  CMatrix v = frame.adjoint() * drive * frame;
  v = (0.5 * (v + v.adjoint())).eval();
  const CMatrix h0 = CMatrix(energies.cast<cplx>().asDiagonal());
  const auto low = bswap_low_manifold(dev);
  const CMatrix heff = sw_block_eliminate(Operator::hermitian(h0), Operator::hermitian(v), low, 2);
  return 2.0 * std::abs(heff(0, 1));
}

}  // namespace bswap
