#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bswap/tomography.hpp"

namespace bswap {

using StateMap = std::function<CMatrix(const CMatrix&)>;

/// Records of the 36 x 36 experiment: output tomography for each rotated
/// preparation of |00>.
struct ProcessData {
  std::vector<CMatrix> inputs;                          // 36 prepared states
  std::vector<std::vector<MeasurementRecord>> outputs;  // per input, 36 records
  ReadoutModel model;
};

ProcessData simulate_process_data(const StateMap& channel, const ReadoutModel& model, long shots,
                                  std::uint64_t seed);

/// R = S_out S_in^+ with per-input linear-inversion output Pauli vectors.
PauliTransferMatrix process_linear_inversion(const ProcessData& data);

struct ProcessMleOptions {
  double grad_tol = 1e-8;
  int max_iterations = 20000;
  int outer_iterations = 30;
  double tp_tol = 1e-9;
  double f_rel_tol = 1e-12;
};

/// Positive Choi matrix (out (x) in ordering) minimizing the Gaussian
/// likelihood with trace preservation enforced, converted to a PTM.
PauliTransferMatrix process_mle(const ProcessData& data, const ProcessMleOptions& opts = {});

/// Choi (out (x) in) <-> PTM.
CMatrix choi_from_ptm(const PauliTransferMatrix& r);
PauliTransferMatrix ptm_from_choi(const CMatrix& choi);

struct ProcessTomographyResult {
  PauliTransferMatrix linear;
  PauliTransferMatrix mle;
  bool has_mle = false;
};

ProcessTomographyResult process_tomography(const StateMap& channel, const ReadoutModel& model, long shots,
                                           std::uint64_t seed, bool with_mle);

}  // namespace bswap
