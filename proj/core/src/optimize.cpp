#include "bswap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace bswap {

LbfgsResult minimize_lbfgs(const Objective& fg, RVector x, const LbfgsOptions& opts) {
  RVector g(x.size());
  double f = fg(x, g);
  std::deque<RVector> s_hist, y_hist;
  std::deque<double> rho_hist;

  LbfgsResult res;
  int it = 0;
  int slow_steps = 0;
  for (; it < opts.max_iterations; ++it) {
    if (g.norm() < opts.grad_tol) break;

    // Two-loop recursion.
    RVector q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      alpha[ku] = rho_hist[ku] * s_hist[ku].dot(q);
      q -= alpha[ku] * y_hist[ku];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    RVector dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0)) {
      dir = -g;
      slope = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    RVector xn, gn(x.size());
    double fn = 0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * dir;
      fn = fg(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (s_hist.empty()) break;  // no descent even along -g: at machine precision
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    const RVector s = xn - x;
    const RVector y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const bool slow = opts.f_rel_tol > 0 && f - fn < opts.f_rel_tol * std::max(std::abs(f), 1.0);
    slow_steps = slow ? slow_steps + 1 : 0;
    x = xn;
    g = gn;
    f = fn;
    if (slow_steps >= opts.stall_window) {
      res.stalled = true;
      ++it;
      break;
    }
  }
  res.x = x;
  res.f = f;
  res.grad_norm = g.norm();
  res.iterations = it;
  res.converged = res.grad_norm < opts.grad_tol;
  return res;
}

}  // namespace bswap
