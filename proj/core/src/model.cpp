#include "bswap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bswap/errors.hpp"
#include "bswap/units.hpp"

namespace bswap {

namespace {

bool finite(double x) { return std::isfinite(x); }

// H_sys - w_ref * N. N commutes with H_sys, so eigenvectors are shared and
// energy combinations with zero net excitation are unaffected.
CMatrix shifted_system(const DeviceParams& dev, double w_ref) {
  return system_hamiltonian(dev).mat() - w_ref * total_number(dev.space).mat();
}

}  // namespace

void DeviceParams::validate() const {
  if (!(q1.omega01 > 0) || !(q2.omega01 > 0)) throw DomainError("DeviceParams: transition frequencies must be positive");
  if (!finite(q1.delta) || !finite(q2.delta) || !finite(J) || !finite(lambda))
    throw DomainError("DeviceParams: non-finite parameter");
}

DeviceParams DeviceParams::with_J(double j) const {
  DeviceParams out = *this;
  out.J = j;
  return out;
}

DeviceParams DeviceParams::with_levels(int d) const {
  DeviceParams out = *this;
  out.space = FockSpace(d);
  return out;
}

void DriveParams::validate() const {
  if (!(amplitude >= 0) || !finite(amplitude)) throw DomainError("DriveParams: amplitude must be finite and >= 0");
  if (!finite(frequency) || !finite(phase)) throw DomainError("DriveParams: non-finite frequency or phase");
  if (phase < 0 || phase >= 2.0 * std::numbers::pi) throw DomainError("DriveParams: phase must lie in [0, 2pi)");
}

DeviceParams reference_device_uncoupled(int levels) {
  using units::ghz;
  DeviceParams dev;
  dev.q1 = {ghz(4.3796), ghz(4.1403 - 4.3796)};
  dev.q2 = {ghz(4.61368), ghz(4.3709 - 4.61368)};
  dev.J = 0.0;
  dev.lambda = 1.0;
  dev.space = FockSpace(levels);
  return dev;
}

DeviceParams reference_device(int levels) {
  DeviceParams dev = reference_device_uncoupled(levels);
  dev.J = fit_J(dev, units::khz(90.0));
  return dev;
}

Operator system_hamiltonian(const DeviceParams& dev) {
  const FockSpace& s = dev.space;
  const CMatrix a = annihilation(s, Mode::first).mat();
  const CMatrix b = annihilation(s, Mode::second).mat();
  const CMatrix na = a.adjoint() * a;
  const CMatrix nb = b.adjoint() * b;
  CMatrix h = (dev.q1.omega01 - dev.q1.delta / 2) * na + (dev.q1.delta / 2) * na * na +
              (dev.q2.omega01 - dev.q2.delta / 2) * nb + (dev.q2.delta / 2) * nb * nb +
              dev.J * (a.adjoint() * b + a * b.adjoint());
  h = (0.5 * (h + h.adjoint())).eval();
  return Operator::hermitian(std::move(h));
}

CMatrix drive_lowering(const DeviceParams& dev) {
  return annihilation(dev.space, Mode::first).mat() + dev.lambda * annihilation(dev.space, Mode::second).mat();
}

Operator drive_hamiltonian(const DeviceParams& dev, const DriveParams& drv, double t) {
  drv.validate();
  const CMatrix low = drive_lowering(dev);
  const double c = drv.amplitude * std::cos(drv.frequency * t + drv.phase);
  return Operator::hermitian(c * (low + low.adjoint()));
}

Operator rwa_hamiltonian(const DeviceParams& dev, const DriveParams& drv) {
  drv.validate();
  const CMatrix low = drive_lowering(dev);
  const cplx e = std::exp(I_unit * drv.phase);
  CMatrix h = system_hamiltonian(dev).mat() - drv.frequency * total_number(dev.space).mat() +
              (drv.amplitude / 2) * (e * low + std::conj(e) * low.adjoint());
  h = (0.5 * (h + h.adjoint())).eval();
  return Operator::hermitian(std::move(h));
}

CMatrix DressedBasis::computational(const FockSpace& space) const {
  CMatrix out(vectors.rows(), 4);
  out.col(0) = vectors.col(static_cast<Eigen::Index>(space.index(0, 0)));
  out.col(1) = vectors.col(static_cast<Eigen::Index>(space.index(0, 1)));
  out.col(2) = vectors.col(static_cast<Eigen::Index>(space.index(1, 0)));
  out.col(3) = vectors.col(static_cast<Eigen::Index>(space.index(1, 1)));
  return out;
}

DressedBasis dressed_basis(const DeviceParams& dev) {
  dev.validate();
  const double w_ref = 0.5 * (dev.q1.omega01 + dev.q2.omega01);
  const EigenSystem es = eigh(Operator::hermitian(shifted_system(dev, w_ref)));
  const auto n = static_cast<Eigen::Index>(dev.space.dim());

  DressedBasis out;
  out.energies = RVector::Zero(n);
  out.vectors = CMatrix::Zero(n, n);
  out.ambiguous.assign(static_cast<std::size_t>(n), false);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);

  for (Eigen::Index k = 0; k < n; ++k) {
    const RVector overlap = es.vectors.col(k).cwiseAbs();
    Eigen::Index best = 0;
    overlap.maxCoeff(&best);
    double second = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != best) second = std::max(second, overlap(j));
    const bool tie = overlap(best) - second < 1e-6;
    const auto bi = static_cast<std::size_t>(best);
    if (tie || taken[bi]) {
      out.ambiguous[bi] = true;
      out.any_ambiguous = true;
    }
    taken[bi] = true;
    const cplx c = es.vectors(best, k);
    out.vectors.col(best) = es.vectors.col(k) * (std::conj(c) / std::abs(c));
    out.energies(best) = es.values(k) + w_ref * dev.space.excitations(bi);
  }
  if (std::find(taken.begin(), taken.end(), false) != taken.end()) out.any_ambiguous = true;
  return out;
}

const Transition* TransitionTable::find(const std::string& from, const std::string& to) const {
  for (const auto& r : rows)
    if (r.from == from && r.to == to) return &r;
  return nullptr;
}

TransitionTable spectrum(const DeviceParams& dev) {
  const DressedBasis db = dressed_basis(dev);
  const FockSpace& s = dev.space;
  TransitionTable table;
  table.any_ambiguous = db.any_ambiguous;

  const std::size_t initial[] = {s.index(0, 0), s.index(0, 1), s.index(1, 0)};
  for (std::size_t i : initial) {
    for (std::size_t f = 0; f < s.dim(); ++f) {
      const int dn = s.excitations(f) - s.excitations(i);
      if (dn != 1 && dn != 2) continue;
      Transition t;
      t.from = s.label(i);
      t.to = s.label(f);
      t.photons = dn;
      t.frequency = (db.energies(static_cast<Eigen::Index>(f)) - db.energies(static_cast<Eigen::Index>(i))) / dn;
      t.ambiguous = db.ambiguous[i] || db.ambiguous[f];
      table.rows.push_back(t);
    }
  }
  return table;
}

double static_zz(const DeviceParams& dev) {
  if (dev.J == 0.0) return 0.0;
  const DressedBasis db = dressed_basis(dev);
  if (db.any_ambiguous) throw CalibrationError("static_zz: dressed-state labels are ambiguous at this J");
  const FockSpace& s = dev.space;
  const double w_ref = 0.5 * (dev.q1.omega01 + dev.q2.omega01);
  // Work with the frame-shifted energies; the combination has zero net excitation.
  auto e = [&](int n1, int n2) {
    const std::size_t k = s.index(n1, n2);
    return db.energies(static_cast<Eigen::Index>(k)) - w_ref * s.excitations(k);
  };
  return e(1, 1) - e(1, 0) - e(0, 1) + e(0, 0);
}

double fit_J(const DeviceParams& dev_without_J, double target_zz) {
  const DeviceParams& dev = dev_without_J;
  dev.validate();
  if (target_zz == 0.0) return 0.0;
  if (dev.space.levels() < 3) throw CalibrationError("fit_J: static ZZ vanishes for a two-level truncation");

  const double tol = units::hz(10.0);
  const double upper = std::abs(dev.Delta()) / 2;
  auto f = [&](double j) { return static_zz(dev.with_J(j)) - target_zz; };

  // Walk up geometrically from a tiny J and stop at the first sign change.
  double lo = upper * 1e-7;
  double flo = f(lo);
  double hi = lo;
  double fhi = flo;
  bool bracketed = false;
  while (hi < upper) {
    const double next = std::min(hi * 1.25, upper);
    double fnext = 0.0;
    try {
      fnext = f(next);
    } catch (const CalibrationError&) {
      break;
    }
    lo = hi;
    flo = fhi;
    hi = next;
    fhi = fnext;
    if (std::signbit(flo) != std::signbit(fhi)) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed)
    throw CalibrationError("fit_J: static ZZ never crosses target " + std::to_string(units::to_khz(target_zz)) +
                           " kHz for J in (0, " + std::to_string(units::to_mhz(upper)) + " MHz]");

  // Bisection with secant acceleration (Illinois variant keeps the bracket).
  for (int it = 0; it < 200; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) < tol * 1e-3 || (hi - lo) < 1e-12 * hi) return x;
    if (std::signbit(fx) == std::signbit(fhi)) {
      hi = x;
      fhi = fx;
      flo *= 0.5;
    } else {
      lo = x;
      flo = fx;
      fhi *= 0.5;
    }
  }
  const double x = 0.5 * (lo + hi);
  if (std::abs(f(x)) < tol) return x;
  throw CalibrationError("fit_J: root search did not converge");
}

}  // namespace bswap
