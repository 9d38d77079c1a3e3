#pragma once

#include <functional>

#include "bswap/hilbert.hpp"

namespace bswap {

/// Objective returning f(x) and writing the gradient into `grad`.
using Objective = std::function<double(const RVector& x, RVector& grad)>;

struct LbfgsOptions {
  int max_iterations = 20000;
  double grad_tol = 1e-8;
  int memory = 12;
  /// Also stop after `stall_window` consecutive accepted steps that each lower
  /// f by less than f_rel_tol * max(|f|, 1). Zero disables the test.
  double f_rel_tol = 0.0;
  int stall_window = 10;
};

struct LbfgsResult {
  RVector x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;
};

/// Limited-memory BFGS with Armijo backtracking. Deterministic; stops when the
/// gradient norm drops below grad_tol, progress stalls, or no descent step
/// can be found.
LbfgsResult minimize_lbfgs(const Objective& fg, RVector x0, const LbfgsOptions& opts = {});

}  // namespace bswap
