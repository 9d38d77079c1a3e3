#include "bswap/process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bswap/errors.hpp"
#include "bswap/optimize.hpp"

namespace bswap {

namespace {

constexpr int kDim = 16;

CMatrix partial_trace_out(const CMatrix& choi) {
  // choi indices (o, i), (o', i') flattened as 4 * o + i
  CMatrix y = CMatrix::Zero(4, 4);
  for (int o = 0; o < 4; ++o)
    for (int i = 0; i < 4; ++i)
      for (int ip = 0; ip < 4; ++ip) y(i, ip) += choi(4 * o + i, 4 * o + ip);
  return y;
}

CMatrix inverse_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  RVector v = es.eigenvalues();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!(v(k) > 0)) throw EstimationError("process_mle: trace-preservation normalizer is singular");
    v(k) = 1.0 / std::sqrt(v(k));
  }
  return es.eigenvectors() * v.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

RVector pack_lower(const CMatrix& t) {
  const auto n = t.rows();
  RVector x(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    x(k++) = t(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      x(k++) = t(i, j).real();
      x(k++) = t(i, j).imag();
    }
  }
  return x;
}

CMatrix unpack_lower(const RVector& x, Eigen::Index n) {
  CMatrix t = CMatrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = x(k++);
    for (Eigen::Index j = 0; j < i; ++j) {
      t(i, j) = cplx(x(k), x(k + 1));
      k += 2;
    }
  }
  return t;
}

RVector pack_gradient(const CMatrix& km) {
  const auto n = km.rows();
  RVector g(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    g(k++) = 2 * km(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      g(k++) = 2 * km(i, j).real();
      g(k++) = 2 * km(i, j).imag();
    }
  }
  return g;
}

}  // namespace

ProcessData simulate_process_data(const StateMap& channel, const ReadoutModel& model, long shots,
                                  std::uint64_t seed) {
  ProcessData data;
  data.model = model;
  CMatrix ground = CMatrix::Zero(4, 4);
  ground(0, 0) = 1.0;
  std::uint64_t k = 0;
  for (const auto& prep : measurement_set()) {
    const CMatrix r = rotation_matrix(prep);
    const CMatrix in = r * ground * r.adjoint();
    CMatrix out = channel(in);
    // Leakage makes the computational block sub-normalized; tomography sees the
    // renormalized state, as a readout that discards leaked shots would.
    const double tr = out.trace().real();
    if (!(tr > 0)) throw EstimationError("process tomography: channel output has zero trace");
    out /= tr;
    data.inputs.push_back(in);
    data.outputs.push_back(simulate_readout(nearest_physical_state(out), model, shots, seed + 7919 * k++));
  }
  return data;
}

PauliTransferMatrix process_linear_inversion(const ProcessData& data) {
  const auto n = static_cast<Eigen::Index>(data.inputs.size());
  RMatrix s_in(16, n), s_out(16, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s_in.col(k) = pauli_vector(data.inputs[static_cast<std::size_t>(k)]);
    s_out.col(k) = pauli_vector(state_linear_inversion(data.outputs[static_cast<std::size_t>(k)], data.model));
  }
  Eigen::JacobiSVD<RMatrix> svd(s_in);
  const RVector sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-10 * sv(0)) throw EstimationError("process tomography: input states are not informationally complete");
  return s_out * s_in.completeOrthogonalDecomposition().pseudoInverse();
}

CMatrix choi_from_ptm(const PauliTransferMatrix& r) {
  CMatrix c = CMatrix::Zero(kDim, kDim);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (r(i, j) != 0.0) c += r(i, j) * kron(pauli2(i), pauli2(j).transpose());
  return c / 4.0;
}

PauliTransferMatrix ptm_from_choi(const CMatrix& choi) {
  PauliTransferMatrix r(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) r(i, j) = (choi * kron(pauli2(i), pauli2(j).transpose())).trace().real() / 4.0;
  return r;
}

PauliTransferMatrix process_mle(const ProcessData& data, const ProcessMleOptions& opts) {
  // Prediction for input k, setting m: tr[C (O_m (x) rho_k^T)] = <vec(X^T), vec(C)>.
  std::vector<CMatrix> xs;
  std::vector<double> ys;
  const CMatrix m = data.model.observable();
  for (std::size_t k = 0; k < data.inputs.size(); ++k)
    for (const auto& rec : data.outputs[k]) {
      const CMatrix r = rotation_matrix(rec.setting);
      xs.push_back(kron(r.adjoint() * m * r, data.inputs[k].transpose()));
      ys.push_back(rec.mean);
    }
  const auto nrec = static_cast<Eigen::Index>(xs.size());
  CMatrix xmat(nrec, kDim * kDim);  // row k = vec(X_k^T)
  for (Eigen::Index k = 0; k < nrec; ++k) {
    const CMatrix xt = xs[static_cast<std::size_t>(k)].transpose();
    xmat.row(k) = Eigen::Map<const CVector>(xt.data(), xt.size()).transpose();
  }
  const RVector y = Eigen::Map<const RVector>(ys.data(), nrec);
  // Residuals are real for Hermitian C, so the least-squares term reduces to a
  // quadratic form in vec(C).
  const CMatrix gram = xmat.adjoint() * xmat;
  const CVector proj = xmat.adjoint() * y.cast<cplx>();
  const double yy = y.squaredNorm();

  // Seed: positive part of the linear-inversion Choi matrix, slightly mixed.
  CMatrix seed = choi_from_ptm(process_linear_inversion(data));
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (seed + seed.adjoint()));
    RVector v = es.eigenvalues().cwiseMax(0.0);
    seed = es.eigenvectors() * v.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    seed = (1.0 - 1e-4) * seed + 1e-4 / 4.0 * CMatrix::Identity(kDim, kDim);
  }
  CMatrix jx = CMatrix::Zero(kDim, kDim);
  for (int k = 0; k < kDim; ++k) jx(k, kDim - 1 - k) = 1.0;
  const CMatrix l = Eigen::LLT<CMatrix>(jx * seed * jx).matrixL();
  RVector x = pack_lower(CMatrix((jx * l * jx).adjoint()));

  CMatrix lagrange = CMatrix::Zero(4, 4);
  double mu = 10.0;
  const CMatrix id4 = CMatrix::Identity(4, 4);
  double tp_violation = 0;
  for (int outer = 0; outer < opts.outer_iterations; ++outer) {
    const Objective fg = [&](const RVector& p, RVector& grad) {
      const CMatrix t = unpack_lower(p, kDim);
      const CMatrix c = t.adjoint() * t;
      const CVector cv = Eigen::Map<const CVector>(c.data(), c.size());
      const CVector qc = gram * cv;
      const CMatrix viol = partial_trace_out(c) - id4;
      const double lsq = cv.dot(qc).real() - 2.0 * proj.dot(cv).real() + yy;
      double f = lsq + (lagrange * viol).trace().real() + 0.5 * mu * viol.squaredNorm();
      // dF/dC as a matrix G with dF = tr(G dC).
      const CVector gv = 2.0 * (qc - proj).conjugate();
      CMatrix g = Eigen::Map<const CMatrix>(gv.data(), kDim, kDim).transpose();
      g += kron(id4, lagrange + mu * viol);
      g = (0.5 * (g + g.adjoint())).eval();
      grad = pack_gradient(t * g);
      return f;
    };
    LbfgsOptions lo;
    lo.grad_tol = opts.grad_tol;
    lo.max_iterations = opts.max_iterations;
    lo.f_rel_tol = opts.f_rel_tol;
    const LbfgsResult res = minimize_lbfgs(fg, x, lo);
    x = res.x;
    const CMatrix t = unpack_lower(x, kDim);
    const CMatrix viol = partial_trace_out(t.adjoint() * t) - id4;
    tp_violation = viol.cwiseAbs().maxCoeff();
    if (!res.converged && !res.stalled)
      throw EstimationError("process_mle: optimizer stopped with gradient norm " + std::to_string(res.grad_norm));
    if (tp_violation < opts.tp_tol) break;
    lagrange += mu * viol;
    mu = std::min(2.0 * mu, 1e4);
  }
  if (tp_violation > 1e-4)
    throw EstimationError("process_mle: trace preservation violated by " + std::to_string(tp_violation));

  const CMatrix t = unpack_lower(x, kDim);
  CMatrix c = t.adjoint() * t;
  const CMatrix w = kron(id4, inverse_sqrt(partial_trace_out(c)));
  c = w * c * w;
  return ptm_from_choi(0.5 * (c + c.adjoint()));
}

ProcessTomographyResult process_tomography(const StateMap& channel, const ReadoutModel& model, long shots,
                                           std::uint64_t seed, bool with_mle) {
  const ProcessData data = simulate_process_data(channel, model, shots, seed);
  ProcessTomographyResult out;
  out.linear = process_linear_inversion(data);
  if (with_mle) {
    out.mle = process_mle(data);
    out.has_mle = true;
  }
  return out;
}

}  // namespace bswap
