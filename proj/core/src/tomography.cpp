#include "bswap/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bswap/effective.hpp"
#include "bswap/errors.hpp"
#include "bswap/optimize.hpp"

namespace bswap {

namespace {

void require_physical(const CMatrix& rho, const char* where) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DomainError(std::string(where) + ": expected a 4x4 density matrix");
  if (hermiticity_defect(rho) > 1e-9) throw DomainError(std::string(where) + ": density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-9) throw DomainError(std::string(where) + ": trace differs from 1");
  if (min_eigenvalue(rho) < -1e-8) throw DomainError(std::string(where) + ": density matrix has a negative eigenvalue");
}

// Lower-triangular T <-> 16 real parameters (4 real diagonal, 6 complex below).
RVector pack_lower(const CMatrix& t) {
  RVector x(16);
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    x(k++) = t(i, i).real();
    for (int j = 0; j < i; ++j) {
      x(k++) = t(i, j).real();
      x(k++) = t(i, j).imag();
    }
  }
  return x;
}

CMatrix unpack_lower(const RVector& x) {
  CMatrix t = CMatrix::Zero(4, 4);
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    t(i, i) = x(k++);
    for (int j = 0; j < i; ++j) {
      t(i, j) = cplx(x(k), x(k + 1));
      k += 2;
    }
  }
  return t;
}

RVector pack_gradient(const CMatrix& k_mat) {
  RVector g(16);
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    g(k++) = 2 * k_mat(i, i).real();
    for (int j = 0; j < i; ++j) {
      g(k++) = 2 * k_mat(i, j).real();
      g(k++) = 2 * k_mat(i, j).imag();
    }
  }
  return g;
}

}  // namespace

CMatrix ReadoutModel::observable() const {
  return beta_II * pauli2(0) + beta_IZ * pauli2(pauli_index("IZ")) + beta_ZI * pauli2(pauli_index("ZI")) +
         beta_ZZ * pauli2(pauli_index("ZZ"));
}

void ReadoutModel::validate() const {
  if (beta_IZ == 0 && beta_ZI == 0 && beta_ZZ == 0) throw DomainError("ReadoutModel: observable is not informative");
  if (!(noise >= 0)) throw DomainError("ReadoutModel: noise scale must be >= 0");
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<MeasurementRecord> simulate_readout(const DensityMatrix4& rho, const ReadoutModel& model, long shots,
                                                std::uint64_t seed) {
  model.validate();
  require_physical(rho, "simulate_readout");
  if (shots < 0) throw DomainError("simulate_readout: shots must be >= 0");
  const CMatrix m = model.observable();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<MeasurementRecord> out;
  for (const auto& setting : measurement_set()) {
    const CMatrix r = rotation_matrix(setting);
    MeasurementRecord rec;
    rec.setting = setting;
    rec.shots = shots;
    rec.mean = (m * r * rho * r.adjoint()).trace().real();
    if (shots > 0) rec.mean += model.noise / std::sqrt(static_cast<double>(shots)) * gauss(rng);
    out.push_back(rec);
  }
  return out;
}

RMatrix tomography_design(const ReadoutModel& model, const std::vector<MeasurementRecord>& records) {
  const CMatrix m = model.observable();
  RMatrix a(static_cast<Eigen::Index>(records.size()), 16);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const CMatrix r = rotation_matrix(records[k].setting);
    const CMatrix o = r.adjoint() * m * r;
    for (int i = 0; i < 16; ++i) a(static_cast<Eigen::Index>(k), i) = (o * pauli2(i)).trace().real() / 4.0;
  }
  return a;
}

DensityMatrix4 state_linear_inversion(const std::vector<MeasurementRecord>& records, const ReadoutModel& model) {
  model.validate();
  if (records.size() < 16) throw EstimationError("state_linear_inversion: need at least 16 records");
  const RMatrix a = tomography_design(model, records);
  RVector y(a.rows());
  for (Eigen::Index k = 0; k < a.rows(); ++k) y(k) = records[static_cast<std::size_t>(k)].mean;

  // Rank of the design augmented by the trace row (II is fixed, not measured).
  RMatrix aug(a.rows() + 1, 16);
  aug << a, RMatrix::Zero(1, 16);
  aug(a.rows(), 0) = 1.0;
  Eigen::JacobiSVD<RMatrix> svd(aug, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  const double tol = 1e-10 * sv(0);
  std::string null_dirs;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > tol) continue;
    const RVector v = svd.matrixV().col(k);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    null_dirs += (null_dirs.empty() ? "" : ", ") + pauli_label(static_cast<int>(big));
  }
  if (!null_dirs.empty())
    throw EstimationError("state_linear_inversion: design is rank deficient; unresolved directions: " + null_dirs);

  const RMatrix a_rest = a.rightCols(15);
  const RVector rhs = y - a.col(0);
  const RVector sol = a_rest.completeOrthogonalDecomposition().solve(rhs);
  RVector r(16);
  r(0) = 1.0;
  r.tail(15) = sol;
  return from_pauli_vector(r);
}

DensityMatrix4 nearest_physical_state(const CMatrix& rho) {
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector mu_asc = es.eigenvalues() / h.trace().real();
  const auto n = mu_asc.size();
  RVector lam = RVector::Zero(n);
  // Walk from the smallest eigenvalue, zeroing negatives and spreading the deficit.
  double acc = 0;
  Eigen::Index i = 0;
  for (; i < n; ++i) {
    const double remaining = static_cast<double>(n - i);
    if (mu_asc(i) + acc / remaining < 0) {
      acc += mu_asc(i);
    } else {
      break;
    }
  }
  const double remaining = static_cast<double>(n - i);
  for (Eigen::Index j = i; j < n; ++j) lam(j) = mu_asc(j) + acc / remaining;
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix4 state_mle(const std::vector<MeasurementRecord>& records, const ReadoutModel& model,
                         const MleOptions& opts) {
  const CMatrix seed_rho = nearest_physical_state(state_linear_inversion(records, model));
  // Strictly positive seed so the Cholesky factor exists.
  const CMatrix mixed = (1.0 - 1e-6) * seed_rho + 1e-6 / 4.0 * CMatrix::Identity(4, 4);

  // rho = T^dag T with T lower triangular: factor the exchange-reversed matrix.
  CMatrix j = CMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) j(k, 3 - k) = 1.0;
  const CMatrix l = Eigen::LLT<CMatrix>(j * mixed * j).matrixL();
  const CMatrix t0 = (j * l * j).adjoint();

  const CMatrix m = model.observable();
  std::vector<CMatrix> obs;
  RVector y(static_cast<Eigen::Index>(records.size()));
  for (std::size_t k = 0; k < records.size(); ++k) {
    const CMatrix r = rotation_matrix(records[k].setting);
    obs.push_back(r.adjoint() * m * r);
    y(static_cast<Eigen::Index>(k)) = records[k].mean;
  }

  const Objective fg = [&](const RVector& x, RVector& grad) {
    const CMatrix t = unpack_lower(x);
    const CMatrix tt = t.adjoint() * t;
    const double tr = tt.trace().real();
    const CMatrix rho = tt / tr;
    CMatrix g = CMatrix::Zero(4, 4);
    double f = 0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const double res = (obs[k] * rho).trace().real() - y(static_cast<Eigen::Index>(k));
      f += res * res;
      g += 2 * res * obs[k];
    }
    const CMatrix gp = (g - (g * rho).trace().real() * CMatrix::Identity(4, 4)) / tr;
    grad = pack_gradient(t * gp);
    return f;
  };

  LbfgsOptions lo;
  lo.grad_tol = opts.grad_tol;
  lo.max_iterations = opts.max_iterations;
  const LbfgsResult res = minimize_lbfgs(fg, pack_lower(t0), lo);
  if (!res.converged)
    throw EstimationError("state_mle: optimizer stopped after " + std::to_string(res.iterations) +
                          " iterations with gradient norm " + std::to_string(res.grad_norm));
  const CMatrix t = unpack_lower(res.x);
  const CMatrix tt = t.adjoint() * t;
  CMatrix rho = tt / tt.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

double state_fidelity(const DensityMatrix4& rho, const CVector& target) {
  const CVector psi = target / target.norm();
  return std::clamp((psi.adjoint() * rho * psi)(0).real(), 0.0, 1.0);
}

PauliTransferMatrix ptm_of_unitary(const CMatrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw DomainError("ptm_of_unitary: expected 4x4");
  if (unitarity_defect(u) > 1e-8) throw DomainError("ptm_of_unitary: matrix is not unitary");
  return ptm_of_map([&](const CMatrix& p) { return CMatrix(u * p * u.adjoint()); });
}

double gate_fidelity(const PauliTransferMatrix& measured, const PauliTransferMatrix& ideal) {
  if (measured.rows() != 16 || measured.cols() != 16 || ideal.rows() != 16 || ideal.cols() != 16)
    throw DomainError("gate_fidelity: expected 16x16 matrices");
  return ((ideal.transpose() * measured).trace() + 4.0) / 20.0;
}

std::vector<PhaseSweepRow> pauli_phase_sweep(const std::vector<double>& phis) {
  std::vector<PhaseSweepRow> rows;
  CVector ground = CVector::Zero(4);
  ground(0) = 1.0;
  for (double phi : phis) {
    const CVector psi = u_bell(1.0, std::numbers::pi / 2, phi) * ground;
    PhaseSweepRow row;
    row.phi = phi;
    row.expectation = pauli_vector(psi * psi.adjoint());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bswap
