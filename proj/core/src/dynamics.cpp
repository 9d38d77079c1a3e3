#include "bswap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

// One unit of time evolution emitted by the schedule walker: either a constant
// Hamiltonian held for `tau`, or a precomputed unitary step of length `tau`.
struct Piece {
  bool constant = false;
  double tau = 0.0;
  CMatrix h;  // constant pieces
  CMatrix u;  // step pieces
};

CMatrix segment_lowering(const DeviceParams& dev, Target target) {
  switch (target) {
    case Target::q1:
      return annihilation(dev.space, Mode::first).mat();
    case Target::q2:
      return annihilation(dev.space, Mode::second).mat();
    case Target::both:
      break;
  }
  return drive_lowering(dev);
}

void check_dt(const Schedule& sched, double dt) {
  if (!(dt > 0)) throw DomainError("propagation: dt must be positive");
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& s : sched.segments) shortest = std::min(shortest, s.duration);
  if (dt > shortest / 10 * (1 + 1e-12))
    throw DomainError("propagation: dt = " + std::to_string(dt * 1e9) + " ns exceeds shortest segment / 10 (" +
                      std::to_string(shortest * 1e8) + " ns)");
}

// Uniform midpoint grid over [a, b) with step <= dt.
template <class F>
void for_each_step(double a, double b, double dt, F&& f) {
  const double len = b - a;
  if (len <= 0) return;
  const auto steps = static_cast<long>(std::ceil(len / dt * (1 - 1e-12)));
  const double h = len / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) f(a + (static_cast<double>(k) + 0.5) * h, h);
}

void walk(const DeviceParams& dev, const Schedule& sched, double dt, const std::function<void(const Piece&)>& emit) {
  sched.validate();
  check_dt(sched, dt);
  const double wf = sched.frame_frequency;
  const CMatrix h0 = system_hamiltonian(dev).mat() - wf * total_number(dev.space).mat();
  const auto n = h0.rows();

  double t0 = 0.0;
  for (const auto& seg : sched.segments) {
    if (seg.shape == Shape::idle || seg.drive.amplitude == 0.0) {
      emit(Piece{true, seg.duration, h0, {}});
      t0 += seg.duration;
      continue;
    }
    const CMatrix low = segment_lowering(dev, seg.target);
    const DriveParams& drv = seg.drive;

    if (seg.frame == Frame::lab) {
      // Symmetric split: free half step, drive kick with X = L + L^dag diagonalized once, free half step.
      const EigenSystem ex = eigh(Operator::hermitian(low + low.adjoint()));
      CMatrix half;
      double half_h = -1;
      for_each_step(0.0, seg.duration, dt, [&](double tm, double h) {
        if (h != half_h) {
          half = expm_hermitian(h0, h / 2);
          half_h = h;
        }
        const double c = drv.amplitude * seg.envelope(tm) * std::cos(drv.frequency * (t0 + tm) + drv.phase);
        CVector ph(n);
        for (Eigen::Index k = 0; k < n; ++k) ph(k) = std::exp(-I_unit * c * ex.values(k) * h);
        Piece p;
        p.tau = h;
        p.u = half * ex.vectors * ph.asDiagonal() * ex.vectors.adjoint() * half;
        emit(p);
      });
      t0 += seg.duration;
      continue;
    }

    // RWA drive in the schedule frame: (W env/2)(e^{i((w_d - w_f) t + phi)} L + h.c.)
    const double detune = drv.frequency - wf;
    auto h_at = [&](double t_global, double env) {
      const cplx e = std::exp(I_unit * (detune * t_global + drv.phase));
      const CMatrix d = (drv.amplitude * env / 2) * (e * low);
      return CMatrix(h0 + d + d.adjoint());
    };
    auto emit_stepped = [&](double a, double b) {
      for_each_step(a, b, dt, [&](double tm, double h) {
        Piece p;
        p.tau = h;
        p.u = expm_hermitian(h_at(t0 + tm, seg.envelope(tm)), h);
        emit(p);
      });
    };

    double b0 = 0, b1 = 0;
    const bool resonant_frame = std::abs(detune) <= 1e-12 * std::max(1.0, std::abs(wf));
    if (resonant_frame && seg.flat_body(b0, b1)) {
      emit_stepped(0.0, b0);
      emit(Piece{true, b1 - b0, h_at(t0, 1.0), {}});
      emit_stepped(b1, seg.duration);
    } else {
      emit_stepped(0.0, seg.duration);
    }
    t0 += seg.duration;
  }
}

}  // namespace

bool NoiseParams::noiseless() const {
  return std::isinf(t1_q1) && std::isinf(t1_q2) && std::isinf(tphi_q1) && std::isinf(tphi_q2);
}

void NoiseParams::validate() const {
  for (double t : {t1_q1, t1_q2, tphi_q1, tphi_q2})
    if (!(t > 0)) throw DomainError("NoiseParams: times must be positive or infinite");
}

double NoiseParams::tphi_for_t2star(double t2star, double t1) {
  const double rate = 1.0 / t2star - 1.0 / (2.0 * t1);
  if (!(rate > 0)) throw DomainError("tphi_for_t2star: T2* exceeds 2 T1");
  return 1.0 / rate;
}

std::vector<CMatrix> collapse_operators(const FockSpace& space, const NoiseParams& noise) {
  noise.validate();
  std::vector<CMatrix> out;
  const CMatrix a = annihilation(space, Mode::first).mat();
  const CMatrix b = annihilation(space, Mode::second).mat();
  if (std::isfinite(noise.t1_q1)) out.push_back(std::sqrt(1.0 / noise.t1_q1) * a);
  if (std::isfinite(noise.t1_q2)) out.push_back(std::sqrt(1.0 / noise.t1_q2) * b);
  if (std::isfinite(noise.tphi_q1)) out.push_back(std::sqrt(2.0 / noise.tphi_q1) * (a.adjoint() * a));
  if (std::isfinite(noise.tphi_q2)) out.push_back(std::sqrt(2.0 / noise.tphi_q2) * (b.adjoint() * b));
  return out;
}

CMatrix liouvillian(const CMatrix& h, const std::vector<CMatrix>& collapse) {
  const auto n = h.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix l = -I_unit * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : collapse) {
    const CMatrix cdc = c.adjoint() * c;
    l += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return l;
}

Operator propagate_unitary(const DeviceParams& dev, const Schedule& sched, double dt) {
  const auto n = static_cast<Eigen::Index>(dev.space.dim());
  CMatrix u = CMatrix::Identity(n, n);
  walk(dev, sched, dt, [&](const Piece& p) {
    if (p.constant)
      u = expm_hermitian(p.h, p.tau) * u;
    else
      u = p.u * u;
  });
  return Operator(std::move(u));
}

CVector propagate_state(const DeviceParams& dev, const Schedule& sched, const CVector& psi0, double dt) {
  if (psi0.size() != static_cast<Eigen::Index>(dev.space.dim())) throw DomainError("propagate_state: dimension mismatch");
  CVector psi = psi0;
  walk(dev, sched, dt, [&](const Piece& p) {
    if (p.constant)
      psi = expm_hermitian(p.h, p.tau) * psi;
    else
      psi = p.u * psi;
  });
  return psi;
}

namespace {

// Evolves the columns of `x` (each a column-major vec(rho)).
CMatrix evolve_vectorized(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise, CMatrix x,
                          double dt) {
  const auto collapse = collapse_operators(dev.space, noise);
  const auto n = static_cast<Eigen::Index>(dev.space.dim());
  const CMatrix zero = CMatrix::Zero(n, n);
  const CMatrix dissipator = liouvillian(zero, collapse);
  const bool noisy = !collapse.empty();

  double cached_h = -1;
  CMatrix half_dissipator;
  walk(dev, sched, dt, [&](const Piece& p) {
    if (p.constant) {
      x = expm_general(liouvillian(p.h, collapse) * p.tau) * x;
      return;
    }
    const CMatrix ad = kron(p.u.conjugate(), p.u);
    if (!noisy) {
      x = ad * x;
      return;
    }
    if (p.tau != cached_h) {
      half_dissipator = expm_general(dissipator * (p.tau / 2));
      cached_h = p.tau;
    }
    x = half_dissipator * (ad * (half_dissipator * x));
  });
  return x;
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvec(const CVector& v, Eigen::Index n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }

}  // namespace

CMatrix propagate_density(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise, const CMatrix& rho0,
                          double dt) {
  const auto n = static_cast<Eigen::Index>(dev.space.dim());
  if (rho0.rows() != n || rho0.cols() != n) throw DomainError("propagate_density: dimension mismatch");
  const CMatrix out = evolve_vectorized(dev, sched, noise, vec(rho0), dt);
  CMatrix rho = unvec(out.col(0), n);
  return 0.5 * (rho + rho.adjoint());
}

CMatrix propagate_superoperator(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise, double dt) {
  const auto n2 = static_cast<Eigen::Index>(dev.space.dim() * dev.space.dim());
  return evolve_vectorized(dev, sched, noise, CMatrix::Identity(n2, n2), dt);
}

CMatrix frame_rotation(const FockSpace& space, double omega, double t) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  CMatrix r = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    r(k, k) = std::exp(I_unit * omega * t * static_cast<double>(space.excitations(static_cast<std::size_t>(k))));
  return r;
}

const std::vector<double>& Trace::column(const std::string& name) const {
  const auto it = columns.find(name);
  if (it == columns.end()) throw DomainError("Trace: no column '" + name + "'");
  return it->second;
}

void Trace::push_populations(double t, const CMatrix& dressed_comp, const CVector& psi) {
  const CVector c = dressed_comp.adjoint() * psi;
  const char* names[4] = {"P00", "P01", "P10", "P11"};
  double sum = 0;
  for (int k = 0; k < 4; ++k) {
    const double p = std::norm(c(k));
    columns[names[k]].push_back(p);
    sum += p;
  }
  columns["leakage"].push_back(std::max(0.0, psi.squaredNorm() - sum));
  time.push_back(t);
}

void Trace::push_populations(double t, const CMatrix& dressed_comp, const CMatrix& rho) {
  const CMatrix r = dressed_comp.adjoint() * rho * dressed_comp;
  const char* names[4] = {"P00", "P01", "P10", "P11"};
  double sum = 0;
  for (int k = 0; k < 4; ++k) {
    const double p = r(k, k).real();
    columns[names[k]].push_back(p);
    sum += p;
  }
  columns["leakage"].push_back(std::max(0.0, rho.trace().real() - sum));
  time.push_back(t);
}

}  // namespace bswap
