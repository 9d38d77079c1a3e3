#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "bswap/hilbert.hpp"
#include "bswap/model.hpp"
#include "bswap/pulse.hpp"

namespace bswap {

inline constexpr double kDefaultDt = 0.1e-9;

/// Phenomenological decoherence. Infinite times switch a channel off.
struct NoiseParams {
  double t1_q1 = std::numeric_limits<double>::infinity();
  double t1_q2 = std::numeric_limits<double>::infinity();
  double tphi_q1 = std::numeric_limits<double>::infinity();
  double tphi_q2 = std::numeric_limits<double>::infinity();

  bool noiseless() const;
  void validate() const;
  /// Pure dephasing that gives T2* = t2star given t1: 1/Tphi = 1/T2* - 1/(2 T1).
  static double tphi_for_t2star(double t2star, double t1);
};

/// Collapse operators sqrt(1/T1) a, sqrt(1/T1) b, sqrt(2/Tphi) a^dag a, sqrt(2/Tphi) b^dag b.
std::vector<CMatrix> collapse_operators(const FockSpace& space, const NoiseParams& noise);

/// Column-major vectorized Lindblad generator for a fixed Hamiltonian.
CMatrix liouvillian(const CMatrix& h, const std::vector<CMatrix>& collapse);

/// Time-ordered propagator of the schedule. Constant stretches are
/// exponentiated exactly; shaped or detuned stretches use midpoint steps of
/// size <= dt; lab-frame segments use symmetric splitting. Throws DomainError
/// when dt exceeds the shortest segment / 10.
Operator propagate_unitary(const DeviceParams& dev, const Schedule& sched, double dt = kDefaultDt);
CVector propagate_state(const DeviceParams& dev, const Schedule& sched, const CVector& psi0, double dt = kDefaultDt);

/// Density-matrix evolution under the Lindblad equation, Strang-split around
/// each unitary step.
CMatrix propagate_density(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise, const CMatrix& rho0,
                          double dt = kDefaultDt);
/// The whole schedule as a d^4 x d^4 superoperator acting on column-major vec(rho).
CMatrix propagate_superoperator(const DeviceParams& dev, const Schedule& sched, const NoiseParams& noise,
                                double dt = kDefaultDt);

/// exp(i w N t): maps a lab-frame state at time t into the frame rotating at w.
CMatrix frame_rotation(const FockSpace& space, double omega, double t);

/// Column-oriented record: time_s plus named columns (P00, P01, P10, P11, leakage, ...).
struct Trace {
  std::vector<double> time;
  std::map<std::string, std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
  std::size_t size() const { return time.size(); }
  /// Appends a row of dressed computational populations and leakage for `psi`.
  void push_populations(double t, const CMatrix& dressed_comp, const CVector& psi);
  void push_populations(double t, const CMatrix& dressed_comp, const CMatrix& rho);
};

}  // namespace bswap
