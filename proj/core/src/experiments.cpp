#include "bswap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bswap/effective.hpp"
#include "bswap/errors.hpp"
#include "bswap/units.hpp"

namespace bswap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

template <class F>
double golden_min(F&& f, double a, double b, int iters) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double centre_frequency(const DeviceParams& dev) { return 0.5 * (dev.q1.omega01 + dev.q2.omega01); }

DriveParams drive_at(double omega, double omega_d, double phi) {
  DriveParams d;
  d.amplitude = omega;
  d.frequency = omega_d;
  d.phase = std::fmod(std::fmod(phi, 2 * kPi) + 2 * kPi, 2 * kPi);
  return d;
}

struct PairInfo {
  double gap = 0.0;
  double visibility = 0.0;
};

PairInfo resonant_pair(const DeviceParams& dev, const CMatrix& comp, double omega, double delta) {
  const Operator h = rwa_hamiltonian(dev, drive_at(omega, centre_frequency(dev) - delta, 0.0));
  const EigenSystem es = eigh(h);
  const CVector c00 = es.vectors.adjoint() * comp.col(0);
  const CVector c11 = es.vectors.adjoint() * comp.col(3);
  const RVector w = c00.cwiseAbs2() + c11.cwiseAbs2();
  Eigen::Index a = 0;
  w.maxCoeff(&a);
  Eigen::Index b = a == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (k != a && w(k) > w(b)) b = k;
  PairInfo p;
  p.gap = std::abs(es.values(a) - es.values(b));
  p.visibility = 4.0 * std::abs(c00(a) * c11(a)) * std::abs(c00(b) * c11(b));
  return p;
}

}  // namespace

Resonance find_resonance(const DeviceParams& dev, double omega, std::optional<double> seed) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  const double o2 = dev.lambda * omega;
  const double closed = calibrate_delta(dev, omega, o2);
  const double centre = seed ? *seed : closed - 0.5 * static_zz(dev);
  const double formula = std::abs(omega_B_full(dev, omega, o2, closed));
  const double half_window = std::max(20.0 * formula, units::khz(500.0));

  auto gap = [&](double de) { return resonant_pair(dev, comp, omega, de).gap; };
  double lo = centre - half_window;
  const int n = 200;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double h = 2 * half_window / n;
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
      const double g = gap(lo + k * h);
      if (g < best_gap) {
        best_gap = g;
        best = k;
      }
    }
    if (best == 0 || best == n) {
      lo += (best == 0 ? -1.0 : 1.0) * half_window;
      continue;
    }
    Resonance r;
    r.delta = golden_min(gap, lo + (best - 1) * h, lo + (best + 1) * h, 120);
    const PairInfo p = resonant_pair(dev, comp, omega, r.delta);
    r.splitting = p.gap;
    r.visibility = p.visibility;
    return r;
  }
  throw CalibrationError("find_resonance: no splitting minimum near delta/2pi = " +
                         std::to_string(units::to_khz(centre)) + " kHz");
}

Trace rabi_experiment(const DeviceParams& dev, double omega, double omega_d, const std::vector<double>& durations,
                      double phi) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  const EigenSystem es = eigh(rwa_hamiltonian(dev, drive_at(omega, omega_d, phi)));
  const CVector psi0_eig = es.vectors.adjoint() * comp.col(0);
  Trace tr;
  for (double t : durations) {
    if (t < 0) throw DomainError("rabi_experiment: negative duration");
    CVector ph = psi0_eig;
    for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) *= std::exp(-I_unit * es.values(k) * t);
    tr.push_populations(t, comp, CVector(es.vectors * ph));
  }
  return tr;
}

std::vector<SweepRow> amplitude_sweep(const DeviceParams& dev, const std::vector<double>& amplitudes,
                                      const SweepOptions& opts) {
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    if (!(amplitudes[i] > 0) || (i > 0 && amplitudes[i] <= amplitudes[i - 1]))
      throw DomainError("amplitude_sweep: amplitudes must be positive and ascending");
  std::vector<SweepRow> rows;
  for (double omega : amplitudes) {
    SweepRow row;
    row.omega = omega;
    try {
      const double o2 = dev.lambda * omega;
      row.delta_closed = calibrate_delta(dev, omega, o2);
      row.omega_B_formula = std::abs(omega_B_full(dev, omega, o2, row.delta_closed));
      const Resonance res = find_resonance(dev, omega);
      row.delta_used = res.delta;
      const double period = 2 * kPi / res.splitting;
      std::vector<double> ts(static_cast<std::size_t>(opts.samples));
      for (int k = 0; k < opts.samples; ++k) ts[static_cast<std::size_t>(k)] = opts.periods * period * k / (opts.samples - 1);
      const Trace tr = rabi_experiment(dev, omega, centre_frequency(dev) - res.delta, ts);
      const FrequencyEstimate est = extract_frequency(tr, "P11");
      row.omega_B_sim = est.omega;
      row.omega_B_sim_err = est.uncertainty;
      row.ok = true;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

double OperatingPoint::omega_d(const DeviceParams& dev) const { return centre_frequency(dev) - delta; }

OperatingPoint closed_form_operating_point(const DeviceParams& dev, double gate_time, double ramp) {
  OperatingPoint op;
  op.gate_time = gate_time;
  op.ramp = ramp;
  op.omega = solve_drive_for_omega_B(dev, kPi / (2 * gate_time));
  op.delta_closed = calibrate_delta(dev, op.omega, dev.lambda * op.omega);
  op.omega_B_formula = std::abs(omega_B_full(dev, op.omega, dev.lambda * op.omega, op.delta_closed));
  op.delta = find_resonance(dev, op.omega).delta;
  return op;
}

Schedule bswap_schedule(const DeviceParams& dev, const OperatingPoint& op, double phi, std::optional<double> duration) {
  Schedule s;
  s.frame_frequency = op.omega_d(dev);
  s.then(PulseSegment::flat(drive_at(op.omega, op.omega_d(dev), phi), duration.value_or(op.gate_time), op.ramp));
  return s;
}

CMatrix computational_block(const DeviceParams& dev, const CMatrix& full) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  return comp.adjoint() * full * comp;
}

double bell_fidelity(const CVector& comp, bool renormalize, double* best_phase) {
  if (comp.size() != 4) throw DomainError("bell_fidelity: expected 4 amplitudes");
  const double a = std::abs(comp(0)), b = std::abs(comp(3));
  double f = 0.5 * (a + b) * (a + b);
  if (renormalize) f /= comp.squaredNorm();
  if (best_phase) *best_phase = std::arg(comp(3)) - std::arg(comp(0));
  return f;
}

double bswap_rotation_angle(const CVector& comp) { return 2.0 * std::atan2(std::abs(comp(3)), std::abs(comp(0))); }

OperatingPoint fine_calibrate(const DeviceParams& dev, const OperatingPoint& start, double dt, double tol) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  auto angle_at = [&](OperatingPoint& op) {
    op.delta = find_resonance(dev, op.omega).delta;
    const CVector psi = propagate_state(dev, bswap_schedule(dev, op), comp.col(0), dt);
    return bswap_rotation_angle(comp.adjoint() * psi);
  };
  OperatingPoint op = start;
  double theta = angle_at(op);
  for (int it = 0; it < 40; ++it) {
    if (std::abs(theta - kPi / 2) < tol) {
      op.delta_closed = calibrate_delta(dev, op.omega, dev.lambda * op.omega);
      op.omega_B_formula = std::abs(omega_B_full(dev, op.omega, dev.lambda * op.omega, op.delta_closed));
      return op;
    }
    // The rate is roughly quadratic in the drive; rescale accordingly, damped.
    const double factor = std::sqrt((kPi / 2) / std::max(theta, 1e-3));
    op.omega *= std::clamp(factor, 0.7, 1.4);
    theta = angle_at(op);
  }
  throw CalibrationError("fine_calibrate: rotation angle did not converge (last " + std::to_string(theta) + " rad)");
}

PhaseCorrection fit_phase_corrections(const CMatrix& m, const CMatrix& ideal) {
  if (m.rows() != 4 || m.cols() != 4 || ideal.rows() != 4 || ideal.cols() != 4)
    throw DomainError("fit_phase_corrections: expected 4x4 matrices");
  const CMatrix k = ideal.conjugate().cwiseProduct(m);

  // post = diag(1, e^{ia}, e^{ib}, e^{ic}); pre = diag(1, e^{ie}, e^{if}, e^{i(e+f)})
  auto build = [](const double p[5], CVector& post, CVector& pre) {
    post = CVector(4);
    pre = CVector(4);
    post << 1, std::exp(I_unit * p[0]), std::exp(I_unit * p[1]), std::exp(I_unit * p[2]);
    pre << 1, std::exp(I_unit * p[3]), std::exp(I_unit * p[4]), std::exp(I_unit * (p[3] + p[4]));
  };
  auto overlap = [&](const double p[5]) {
    CVector post, pre;
    build(p, post, pre);
    return std::abs((post.asDiagonal() * k * pre.asDiagonal()).sum());
  };
  auto best_angle = [](cplx rest, cplx coeff) { return std::abs(coeff) > 0 ? std::arg(rest) - std::arg(coeff) : 0.0; };

  double best[5] = {0, 0, 0, 0, 0};
  double best_val = -1;
  const double starts[3] = {0.0, kPi / 2, kPi};
  for (double s0 : starts) {
    double p[5] = {s0, -s0, s0, 0, 0};
    double prev = -1;
    for (int sweep = 0; sweep < 500; ++sweep) {
      CVector post, pre;
      for (int r = 0; r < 3; ++r) {  // post rows 1..3
        build(p, post, pre);
        const CVector rowsum = k * pre;
        const cplx total = (post.asDiagonal() * rowsum).sum();
        const cplx coeff = rowsum(r + 1);
        p[r] = best_angle(total - post(r + 1) * coeff, coeff);
      }
      build(p, post, pre);
      const CVector colsum = (post.asDiagonal() * k).colwise().sum().transpose();
      {
        const cplx coeff = colsum(1) + colsum(3) * std::exp(I_unit * p[4]);
        const cplx total = colsum(0) + colsum(2) * std::exp(I_unit * p[4]);
        p[3] = best_angle(total, coeff);
      }
      {
        const cplx coeff = colsum(2) + colsum(3) * std::exp(I_unit * p[3]);
        const cplx total = colsum(0) + colsum(1) * std::exp(I_unit * p[3]);
        p[4] = best_angle(total, coeff);
      }
      const double val = overlap(p);
      if (std::abs(val - prev) < 1e-15) break;
      prev = val;
    }
    const double val = overlap(p);
    if (val > best_val) {
      best_val = val;
      std::copy(p, p + 5, best);
    }
  }
  PhaseCorrection out;
  CVector post, pre;
  build(best, post, pre);
  out.post = post.asDiagonal();
  out.pre = pre.asDiagonal();
  out.overlap = best_val / 4.0;
  return out;
}

Channel gate_channel(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise,
                     const PhaseCorrection& corr, double dt) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  const CMatrix super = propagate_superoperator(dev, sched, noise, dt);
  const auto n = static_cast<Eigen::Index>(dev.space.dim());
  return [comp, super, n, corr](const CMatrix& rho4) {
    const CMatrix in = comp * (corr.pre * rho4 * corr.pre.adjoint()) * comp.adjoint();
    const CVector v = super * Eigen::Map<const CVector>(in.data(), in.size());
    const CMatrix out = Eigen::Map<const CMatrix>(v.data(), n, n);
    CMatrix r = corr.post * (comp.adjoint() * out * comp) * corr.post.adjoint();
    return CMatrix(0.5 * (r + r.adjoint()));
  };
}

EchoResult bell_echo(const DeviceParams& dev, const NoiseParams& noise, const std::vector<double>& total_delays,
                     double phase_ramp_rate, const OperatingPoint& op, double dt) {
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  const CMatrix rho0 = comp.col(0) * comp.col(0).adjoint();
  const double wd = op.omega_d(dev);
  EchoResult res;
  for (double tau : total_delays) {
    if (tau < 0) throw DomainError("bell_echo: negative delay");
    Schedule s;
    s.frame_frequency = wd;
    s.then(PulseSegment::flat(drive_at(op.omega, wd, 0.0), op.gate_time, op.ramp));
    if (tau > 0) s.then(PulseSegment::idle(tau / 2));
    s.then(PulseSegment::flat(drive_at(op.omega, wd, 0.0), 2 * op.gate_time, op.ramp));
    if (tau > 0) s.then(PulseSegment::idle(tau / 2));
    s.then(PulseSegment::flat(drive_at(op.omega, wd, phase_ramp_rate * tau), op.gate_time, op.ramp));
    const CMatrix rho = propagate_density(dev, s, noise, rho0, dt);
    res.trace.push_populations(tau, comp, rho);
  }
  res.fit = fit_damped_sinusoid(res.trace.time, res.trace.column("P00"));
  return res;
}

Schedule single_qubit_gate(const DeviceParams& dev, int qubit, Axis axis, double angle, double sigma, double dt) {
  if (qubit != 1 && qubit != 2) throw DomainError("single_qubit_gate: qubit must be 1 or 2");
  const DressedBasis db = dressed_basis(dev);
  const FockSpace& sp = dev.space;
  const std::size_t excited = qubit == 1 ? sp.index(1, 0) : sp.index(0, 1);
  const double wq = db.energies(static_cast<Eigen::Index>(excited)) - db.energies(static_cast<Eigen::Index>(sp.index(0, 0)));
  Schedule s;
  s.frame_frequency = wq;
  if (angle == 0.0) {
    s.then(PulseSegment::idle(4 * sigma));
    return s;
  }
  const double mag = std::abs(angle);
  if (mag > kPi + 1e-12) throw DomainError("single_qubit_gate: |angle| must not exceed pi");
  // X: phi = 0; Y: phi = 3pi/2; a negative angle adds pi.
  double phi = axis == Axis::X ? 0.0 : 1.5 * kPi;
  if (angle < 0) phi += kPi;
  const Target target = qubit == 1 ? Target::q1 : Target::q2;

  const CMatrix comp = db.computational(sp);
  const CVector psi0 = comp.col(0);
  const int exc_col = qubit == 1 ? 2 : 1;
  struct Outcome {
    double angle;
    double leakage;
  };
  auto realized = [&](double amp) {
    Schedule trial;
    trial.frame_frequency = wq;
    trial.then(PulseSegment::gaussian(drive_at(amp, wq, 0.0), sigma, target));
    const CVector c = comp.adjoint() * propagate_state(dev, trial, psi0, dt);
    const double p = std::norm(c(exc_col));
    const double total = c.squaredNorm();
    return Outcome{2.0 * std::asin(std::sqrt(std::clamp(p / total, 0.0, 1.0))), 1.0 - total};
  };

  // Pulse area of the unit envelope.
  const PulseSegment unit = PulseSegment::gaussian(drive_at(1.0, wq, 0.0), sigma, target);
  double area = 0;
  const int m = 2000;
  for (int k = 0; k < m; ++k) area += unit.envelope((k + 0.5) * unit.duration / m) * unit.duration / m;

  double amp = mag / area;
  Outcome out{};
  if (mag >= kPi - 1e-12) {
    amp = golden_min([&](double a) { return -realized(a).angle; }, 0.8 * amp, 1.2 * amp, 60);
    out = realized(amp);
  } else {
    double a0 = amp, a1 = amp * 1.02;
    double f0 = realized(a0).angle - mag, f1 = realized(a1).angle - mag;
    for (int it = 0; it < 50 && std::abs(f1) > 1e-6; ++it) {
      const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
      a0 = a1;
      f0 = f1;
      a1 = a2;
      f1 = realized(a1).angle - mag;
    }
    amp = a1;
    out = realized(amp);
    if (std::abs(out.angle - mag) > 1e-3)
      throw CalibrationError("single_qubit_gate: rotation angle error " + std::to_string(out.angle - mag) + " rad");
  }
  if (out.leakage > 0.01)
    throw CalibrationError("single_qubit_gate: leakage " + std::to_string(out.leakage) + " exceeds 1%");
  s.then(PulseSegment::gaussian(drive_at(amp, wq, phi), sigma, target));
  return s;
}

}  // namespace bswap
