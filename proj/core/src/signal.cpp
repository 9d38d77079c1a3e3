#include "bswap/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "bswap/errors.hpp"

namespace bswap {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section minimization of f on [a, b].
template <class F>
double golden_min(F&& f, double a, double b, int iters = 80) {
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

struct LinearFit {
  RVector coef;
  double rss = 0.0;
};

// Least squares on the basis functions evaluated at t (columns of the design).
LinearFit solve_ls(const RMatrix& design, const RVector& y) {
  LinearFit fit;
  fit.coef = design.colPivHouseholderQr().solve(y);
  fit.rss = (design * fit.coef - y).squaredNorm();
  return fit;
}

RMatrix sinusoid_design(const RVector& t, double omega, double rate) {
  RMatrix x(t.size(), 3);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double env = std::exp(-rate * t(i));
    x(i, 0) = 1.0;
    x(i, 1) = env * std::cos(omega * t(i));
    x(i, 2) = env * std::sin(omega * t(i));
  }
  return x;
}

RVector to_eigen(const std::vector<double>& v) { return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size())); }

// Peak of the mean-subtracted periodogram on a 16x oversampled grid.
double periodogram_peak(const RVector& t, const RVector& y) {
  const double span = t(t.size() - 1) - t(0);
  const double mean = y.mean();
  double dt_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < t.size(); ++i) dt_min = std::min(dt_min, t(i) - t(i - 1));
  const double nyquist = std::numbers::pi / dt_min;
  const double step = 2 * std::numbers::pi / span / 16;
  double best_w = 0, best_p = -1;
  for (double w = step; w <= nyquist; w += step) {
    cplx acc = 0;
    for (Eigen::Index i = 0; i < t.size(); ++i) acc += (y(i) - mean) * std::exp(-I_unit * w * t(i));
    const double p = std::norm(acc);
    if (p > best_p) {
      best_p = p;
      best_w = w;
    }
  }
  return best_w;
}

void check_input(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw DomainError("signal: time and value lengths differ");
  if (t.size() < 8) throw NoOscillationError("signal: need at least 8 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw DomainError("signal: time grid must be strictly increasing");
}

}  // namespace

FrequencyEstimate extract_frequency(const std::vector<double>& tv, const std::vector<double>& yv) {
  check_input(tv, yv);
  const RVector t = to_eigen(tv);
  const RVector y = to_eigen(yv);
  const auto n = static_cast<double>(t.size());
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  if ((y.array() - y.mean()).abs().maxCoeff() < 1e-12 * scale) throw NoOscillationError("signal: trace is constant");

  const double span = t(t.size() - 1) - t(0);
  const double w0 = periodogram_peak(t, y);
  const double bin = 2 * std::numbers::pi / span;
  auto rss = [&](double w) { return solve_ls(sinusoid_design(t, w, 0.0), y).rss; };
  const double w = golden_min(rss, std::max(1e-3 * bin, w0 - bin), w0 + bin, 100);

  const LinearFit fit = solve_ls(sinusoid_design(t, w, 0.0), y);
  FrequencyEstimate est;
  est.omega = w;
  est.offset = fit.coef(0);
  est.amplitude = std::hypot(fit.coef(1), fit.coef(2));
  const double resid_rms = std::sqrt(fit.rss / n);
  est.snr = est.amplitude / std::max(resid_rms, 1e-300);
  if (est.amplitude < 1e-9 * scale || est.snr < 3.0)
    throw NoOscillationError("signal: no significant oscillation (SNR " + std::to_string(est.snr) + ")");
  if (w * span / (2 * std::numbers::pi) < 2.0)
    throw NoOscillationError("signal: record spans fewer than two periods of the dominant frequency");

  // Curvature of the residual sum of squares around the optimum.
  const double h = 1e-3 * bin;
  const double curv = (rss(w + h) - 2 * fit.rss + rss(w - h)) / (h * h);
  const double sigma2 = fit.rss / std::max(1.0, n - 4);
  est.uncertainty = curv > 0 ? std::sqrt(2 * sigma2 / curv) : std::numeric_limits<double>::infinity();
  return est;
}

FrequencyEstimate extract_frequency(const Trace& trace, const std::string& observable) {
  return extract_frequency(trace.time, trace.column(observable));
}

DampedFit fit_damped_sinusoid(const std::vector<double>& tv, const std::vector<double>& yv) {
  check_input(tv, yv);
  const RVector t0 = to_eigen(tv);
  const RVector t = t0.array() - t0(0);
  const RVector y = to_eigen(yv);
  const double span = t(t.size() - 1);
  const double bin = 2 * std::numbers::pi / span;

  double w = periodogram_peak(t, y);
  double rate = 0.0;
  const double max_rate = 20.0 / span;
  auto rss = [&](double ww, double rr) { return solve_ls(sinusoid_design(t, ww, rr), y).rss; };
  // Alternate 1-D refinements; the problem is well conditioned near the peak.
  for (int round = 0; round < 6; ++round) {
    w = golden_min([&](double ww) { return rss(ww, rate); }, std::max(1e-3 * bin, w - bin), w + bin, 80);
    rate = golden_min([&](double rr) { return rss(w, rr); }, -0.1 / span, max_rate, 80);
  }
  rate = std::max(rate, 0.0);
  const LinearFit fit = solve_ls(sinusoid_design(t, w, rate), y);
  DampedFit out;
  out.omega = w;
  out.decay_time = rate > 0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  out.offset = fit.coef(0);
  out.amplitude = std::hypot(fit.coef(1), fit.coef(2));
  out.rms_residual = std::sqrt(fit.rss / static_cast<double>(t.size()));
  return out;
}

}  // namespace bswap
