#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "bswap/effective.hpp"
#include "bswap/experiments.hpp"
#include "bswap/process.hpp"
#include "bswap/tomography.hpp"
#include "bswap/units.hpp"

using namespace bswap;

namespace {

CMatrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

const OperatingPoint& operating_point() {
  static const OperatingPoint op = fine_calibrate(reference_device(), closed_form_operating_point(reference_device()));
  return op;
}

void BM_ExpmHermitian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMatrix h = random_hermitian(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm_hermitian(h, 0.3));
}
BENCHMARK(BM_ExpmHermitian)->Arg(9)->Arg(16)->Arg(81);

void BM_ExpmGeneral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CMatrix m = random_hermitian(n, 2) * cplx(0.1, -0.4);
  for (auto _ : state) benchmark::DoNotOptimize(expm_general(m));
}
BENCHMARK(BM_ExpmGeneral)->Arg(9)->Arg(81);

void BM_PropagateSqrtBswap(benchmark::State& state) {
  const DeviceParams dev = reference_device(static_cast<int>(state.range(0)));
  const Schedule s = bswap_schedule(dev, operating_point());
  for (auto _ : state) benchmark::DoNotOptimize(propagate_unitary(dev, s));
}
BENCHMARK(BM_PropagateSqrtBswap)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PropagateDensityDephased(benchmark::State& state) {
  const DeviceParams dev = reference_device();
  const Schedule s = bswap_schedule(dev, operating_point());
  NoiseParams noise;
  noise.t1_q1 = 38e-6;
  noise.t1_q2 = 32e-6;
  noise.tphi_q1 = noise.tphi_q2 = 4.2e-6;
  const CMatrix comp = dressed_basis(dev).computational(dev.space);
  const CMatrix rho0 = comp.col(0) * comp.col(0).adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_density(dev, s, noise, rho0));
}
BENCHMARK(BM_PropagateDensityDephased)->Unit(benchmark::kMillisecond);

void BM_StateMle(benchmark::State& state) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const ReadoutModel model;
  const auto records = simulate_readout(bell * bell.adjoint(), model, 1000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(state_mle(records, model));
}
BENCHMARK(BM_StateMle)->Unit(benchmark::kMillisecond);

void BM_ProcessMle(benchmark::State& state) {
  const CMatrix u = u_bell(1.0, std::numbers::pi / 2, 0.0);
  const auto channel = [&](const CMatrix& r) {
    const CMatrix out = u * r * u.adjoint();
    return CMatrix(0.9 * out + 0.1 * CMatrix::Identity(4, 4) * out.trace() / 4.0);
  };
  const ProcessData data = simulate_process_data(channel, ReadoutModel{}, 500, 42);
  for (auto _ : state) benchmark::DoNotOptimize(process_mle(data));
}
BENCHMARK(BM_ProcessMle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
