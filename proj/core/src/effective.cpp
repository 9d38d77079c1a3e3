#include "bswap/effective.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "bswap/errors.hpp"
#include "bswap/units.hpp"

namespace bswap {

namespace {

double pole_scale(const DeviceParams& dev) {
  const double a = std::abs(dev.Delta());
  const double b = std::abs(dev.q1.delta);
  const double c = std::abs(dev.q2.delta);
  if (a > 0 && b > 0 && c > 0) return std::cbrt(a * b * c);
  return std::max({a, b, c});
}

struct Factor {
  const char* name;
  double value;
};

void check_poles(const DeviceParams& dev, const char* where, std::initializer_list<Factor> factors) {
  const double tol = 1e-6 * pole_scale(dev);
  for (const auto& f : factors) {
    if (!std::isfinite(f.value) || std::abs(f.value) < tol)
      throw SingularityError(std::string(where) + ": denominator factor " + f.name + " vanishes (" +
                             std::to_string(f.value) + " rad/s)");
  }
}

struct Sym {
  double D, d1, d2, J;
  explicit Sym(const DeviceParams& dev) : D(dev.Delta()), d1(dev.q1.delta), d2(dev.q2.delta), J(dev.J) {}
};

double alpha_sum_raw(const Sym& s, double o1, double o2, double de) {
  const double D = s.D, d1 = s.d1, d2 = s.d2, J = s.J;
  return (-de - d1 * o1 * o1 / ((2 * de + D) * (2 * (de + d1) + D)) -
          d2 * o2 * o2 / (4 * de * (de + d2) - 2 * (2 * de + d2) * D + D * D)) +
         4 * (2 * de * (d1 + d2) + (-d1 + d2) * D) * o1 * o2 * J /
             ((2 * (de + d2) - D) * (2 * (de + d1) + D) * (4 * de * de - D * D));
}

// Factors whose zeros are poles of alpha_sum in delta.
std::vector<double> alpha_sum_poles(const Sym& s) {
  return {-s.D / 2, s.D / 2, -s.d1 - s.D / 2, s.D / 2 - s.d2};
}

}  // namespace

double omega_B_main(const DeviceParams& dev, double omega) {
  const Sym s(dev);
  const double D = s.D, d1 = s.d1, d2 = s.d2, J = s.J, l = dev.lambda;
  check_poles(dev, "omega_B_main", {{"(delta2-Delta)", d2 - D}, {"(delta1+Delta)", d1 + D}, {"Delta", D}});
  return -2 * J * omega * omega * (-J * l * (d1 + d2) + l * l * d2 * (d1 + D) + d1 * (d2 - D)) /
         ((d2 - D) * (d1 + D) * D * D);
}

double omega_B_full(const DeviceParams& dev, double omega1, double omega2, double delta) {
  const Sym s(dev);
  const double D = s.D, d1 = s.d1, d2 = s.d2, J = s.J, o1 = omega1, o2 = omega2, de = delta;
  check_poles(dev, "omega_B_full",
              {{"(delta2-Delta)", d2 - D}, {"(delta1+Delta)", d1 + D}, {"(Delta-2delta)", D - 2 * de},
               {"(Delta+2delta)", D + 2 * de}});
  return -2 * J * (-J * o1 * o2 * (d1 + d2) + o2 * o2 * d2 * (d1 + D) + o1 * o1 * d1 * (d2 - D)) /
         ((d2 - D) * (d1 + D) * (-4 * de * de + D * D));
}

double omega_S(const DeviceParams& dev, double omega1, double omega2, double delta) {
  const Sym s(dev);
  const double D = s.D, d1 = s.d1, d2 = s.d2, J = s.J, o1 = omega1, o2 = omega2, de = delta;
  check_poles(dev, "omega_S",
              {{"Delta", D}, {"(delta2-Delta)", d2 - D}, {"(delta1+Delta)", d1 + D}, {"(Delta-2delta)", D - 2 * de},
               {"(Delta+2delta)", D + 2 * de}});
  return -2 * J * de * (J * o1 * o2 * (d1 - d2) + o2 * o2 * d2 * (d1 + D) + o1 * o1 * d1 * (-d2 + D)) /
         (D * (d2 - D) * (d1 + D) * (-4 * de * de + D * D));
}

AlphaCoefficients alpha_coeffs(const DeviceParams& dev, double omega1, double omega2, double delta) {
  const Sym s(dev);
  const double D = s.D, d1 = s.d1, d2 = s.d2, J = s.J, o1 = omega1, o2 = omega2, de = delta;
  check_poles(dev, "alpha_coeffs",
              {{"(delta2-Delta)", d2 - D}, {"(2(delta+delta2)-Delta)", 2 * (de + d2) - D},
               {"(2(delta+delta1)+Delta)", 2 * (de + d1) + D}, {"(2delta-Delta)", 2 * de - D},
               {"(2delta+Delta)", 2 * de + D}});
  AlphaCoefficients a;
  a.alpha_zz = -o2 * o2 / (2 * (de + d2) - D) -
               2 *
                   ((-8 * de * de * (de + d1) + 16 * d1 * d2 * d2 - 4 * (de * de + 4 * d1 * d2) * D +
                     2 * (de + d1) * D * D + D * D * D) *
                    o1 * o2) *
                   J / ((d2 - D) * (2 * (de + d2) - D) * (2 * (de + d1) + D) * (-4 * de * de + D * D));
  a.alpha_sum = alpha_sum_raw(s, o1, o2, de);
  a.alpha_diff = 0.5 * (D + 2 * d1 * o1 * o1 / ((2 * de + D) * (2 * (de + d1) + D)) - o2 * o2 / (2 * de - D)) +
                 (4 * de * de + 4 * de * (d1 - d2 + D) + D * (-2 * (d1 + d2) + D)) * o1 * o2 * J /
                     ((d2 - D) * (2 * (de + d1) + D) * (-4 * de * de + D * D));
  return a;
}

double calibrate_delta(const DeviceParams& dev, double omega1, double omega2) {
  const Sym s(dev);
  const double bound = std::abs(s.D) / 4;
  const double tol = units::hz(1.0);
  auto f = [&](double de) { return alpha_sum_raw(s, omega1, omega2, de); };
  if (std::abs(f(0.0)) < tol * 1e-3) return 0.0;

  const auto poles = alpha_sum_poles(s);
  auto pole_between = [&](double a, double b) {
    for (double p : poles)
      if ((p - a) * (p - b) <= 0) return true;
    return false;
  };

  // Walk outward from delta = 0 on both sides; the first clean sign change wins.
  const int n = 4000;
  const double h = bound / n;
  double best_lo = 0, best_hi = 0;
  bool found = false;
  for (int k = 0; k < n && !found; ++k) {
    for (int side : {+1, -1}) {
      const double a = side * k * h;
      const double b = side * (k + 1) * h;
      if (pole_between(a, b)) continue;
      const double fa = f(a), fb = f(b);
      if (std::signbit(fa) != std::signbit(fb)) {
        best_lo = std::min(a, b);
        best_hi = std::max(a, b);
        found = true;
        break;
      }
    }
  }
  if (!found)
    throw CalibrationError("calibrate_delta: alpha_sum has no root for |delta| < " +
                           std::to_string(units::to_mhz(bound)) + " MHz (f(0) = " +
                           std::to_string(units::to_khz(f(0.0))) + " kHz, f(+bound) = " +
                           std::to_string(units::to_khz(f(bound))) + " kHz, f(-bound) = " +
                           std::to_string(units::to_khz(f(-bound))) + " kHz)");

  double lo = best_lo, hi = best_hi, flo = f(lo), fhi = f(hi);
  for (int it = 0; it < 200; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) < tol * 1e-3 || hi - lo < 1e-9) return x;
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
  throw CalibrationError("calibrate_delta: root refinement did not converge");
}

EffectiveCoefficients effective_coefficients(const DeviceParams& dev, double omega1, double omega2) {
  EffectiveCoefficients c;
  c.delta_cal = calibrate_delta(dev, omega1, omega2);
  c.omega_B = omega_B_full(dev, omega1, omega2, c.delta_cal);
  c.omega_S = omega_S(dev, omega1, omega2, c.delta_cal);
  const AlphaCoefficients a = alpha_coeffs(dev, omega1, omega2, c.delta_cal);
  c.alpha_zz = a.alpha_zz;
  c.alpha_sum = a.alpha_sum;
  c.alpha_diff = a.alpha_diff;
  return c;
}

double solve_drive_for_omega_B(const DeviceParams& dev, double target_omega_B) {
  if (!(target_omega_B > 0)) throw DomainError("solve_drive_for_omega_B: target must be positive");
  const double per_unit = std::abs(omega_B_main(dev, 1.0));
  if (!(per_unit > 0)) throw CalibrationError("solve_drive_for_omega_B: Omega_B vanishes for this device");

  auto rate = [&](double omega) {
    const double o2 = dev.lambda * omega;
    return std::abs(omega_B_full(dev, omega, o2, calibrate_delta(dev, omega, o2)));
  };

  double lo = 0.5 * std::sqrt(target_omega_B / per_unit);
  while (rate(lo) > target_omega_B) lo *= 0.5;
  double hi = lo;
  for (;;) {
    const double next = hi * 1.2;
    double r = 0;
    try {
      r = rate(next);
    } catch (const CalibrationError&) {
      throw CalibrationError("solve_drive_for_omega_B: delta calibration fails before reaching target (Omega/2pi = " +
                             std::to_string(units::to_mhz(next)) + " MHz)");
    }
    if (r >= target_omega_B) {
      lo = hi;
      hi = next;
      break;
    }
    hi = next;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate(mid) < target_omega_B ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double enhancement_factor(const DeviceParams& dev) {
  const double d2 = dev.q2.delta, D = dev.Delta();
  check_poles(dev, "enhancement_factor", {{"(delta2-Delta)", d2 - D}});
  return d2 / (2 * (d2 - D));
}

double omega_B_pure_qubit_limit(const DeviceParams& dev, double omega) {
  const double D = dev.Delta();
  check_poles(dev, "omega_B_pure_qubit_limit", {{"Delta", D}});
  return -2 * dev.J * omega * omega * (1 + dev.lambda) / (D * D);
}

TwoQubitUnitary u_bell(double omega_B, double t, double phi) {
  const double c = std::cos(omega_B * t / 2);
  const double s = std::sin(omega_B * t / 2);
  TwoQubitUnitary u = CMatrix::Zero(4, 4);
  u(0, 0) = c;
  u(3, 3) = c;
  u(1, 1) = 1;
  u(2, 2) = 1;
  u(0, 3) = -I_unit * std::exp(-2.0 * I_unit * phi) * s;
  u(3, 0) = -I_unit * std::exp(2.0 * I_unit * phi) * s;
  return u;
}

TwoQubitUnitary u_frame_corrections(double alpha_zz, double alpha_minus, double t) {
  // ZZ = diag(1,-1,-1,1), IZ - ZI = diag(0,-2,2,0)
  const double zz[4] = {1, -1, -1, 1};
  const double izzi[4] = {0, -2, 2, 0};
  TwoQubitUnitary u = CMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) u(k, k) = std::exp(-I_unit * (alpha_zz * zz[k] + alpha_minus * izzi[k]) * t / 4.0);
  return u;
}

CMatrix effective_hamiltonian(const EffectiveCoefficients& c, double phi) {
  const double a_iz = c.alpha_sum + c.alpha_diff;
  const double a_zi = c.alpha_sum - c.alpha_diff;
  CMatrix h = CMatrix::Zero(4, 4);
  const double iz[4] = {1, -1, 1, -1};
  const double zi[4] = {1, 1, -1, -1};
  const double zz[4] = {1, -1, -1, 1};
  for (int k = 0; k < 4; ++k) h(k, k) = a_iz / 2 * iz[k] + a_zi / 2 * zi[k] + c.alpha_zz / 4 * zz[k];
  h(0, 3) = c.omega_B / 2 * std::exp(-2.0 * I_unit * phi);
  h(3, 0) = std::conj(h(0, 3));
  // (XX + YY)/2 is the 01 <-> 10 flip-flop
  h(1, 2) = c.omega_S;
  h(2, 1) = c.omega_S;
  return h;
}

}  // namespace bswap
