#pragma once

#include <string>
#include <vector>

#include "bswap/dynamics.hpp"

namespace bswap {

struct FrequencyEstimate {
  double omega = 0.0;        // rad/s
  double uncertainty = 0.0;  // rad/s, one sigma from the residual curvature
  double amplitude = 0.0;
  double offset = 0.0;
  double snr = 0.0;          // amplitude / residual rms
};

/// Dominant angular frequency of y(t): periodogram peak refined by a
/// least-squares sinusoid fit. Throws NoOscillationError when SNR < 3 or the
/// record spans fewer than two periods.
FrequencyEstimate extract_frequency(const std::vector<double>& t, const std::vector<double>& y);
FrequencyEstimate extract_frequency(const Trace& trace, const std::string& observable);

/// y = c + exp(-t/T) (A cos wt + B sin wt).
struct DampedFit {
  double omega = 0.0;
  double decay_time = 0.0;  // +inf when no decay is resolved
  double offset = 0.0;
  double amplitude = 0.0;   // sqrt(A^2 + B^2)
  double rms_residual = 0.0;
};

DampedFit fit_damped_sinusoid(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace bswap
