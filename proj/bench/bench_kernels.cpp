// Serial reference kernels against their OpenMP versions on Liouvillians of
// the driven two-photon JC model. Argument: photon cutoff.

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "tpqrm/kernels.hpp"
#include "tpqrm/liouville.hpp"
#include "tpqrm/scattering.hpp"

using namespace tpqrm;

namespace {

kernels::CsrMatrix liouvillian_csr(int cutoff) {
  ModelSpec spec;
  spec.variant = Variant::two_photon_jc;
  spec.g2 = 0.01;
  DriveConfig drive;
  drive.target = DriveTarget::cavity;
  drive.omega_d = 0.99;
  drive.intensity = 2e-3;
  drive.lindblad = {1e-3, 1e-4, 5e-5};
  const HilbertSpace space(1, cutoff);
  return kernels::CsrMatrix(build_liouvillian(rotating_frame_hamiltonian(spec, drive, space), drive.lindblad).matrix());
}

std::vector<kernels::Complex> filled(std::size_t n, double phase) {
  std::vector<kernels::Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {1.0 / (1.0 + i), phase * i / n};
  return v;
}

template <auto Kernel>
void bm_spmv(benchmark::State& state) {
  const auto a = liouvillian_csr(static_cast<int>(state.range(0)));
  const auto x = filled(a.cols(), 0.3);
  std::vector<kernels::Complex> y(a.rows());
  for (auto _ : state) {
    Kernel(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["rows"] = static_cast<double>(a.rows());
  state.counters["nnz"] = static_cast<double>(a.nonZeros());
}

template <auto Kernel>
void bm_residual(benchmark::State& state) {
  const auto a = liouvillian_csr(static_cast<int>(state.range(0)));
  const auto x = filled(a.cols(), 0.3);
  const auto b = filled(a.rows(), -0.7);
  std::vector<kernels::Complex> r(a.rows());
  for (auto _ : state) {
    Kernel(a, x, b, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.counters["rows"] = static_cast<double>(a.rows());
}

template <auto Kernel>
void bm_axpy_stages(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto x = filled(n, 0.1);
  std::array<std::vector<kernels::Complex>, 6> k;
  std::array<std::span<const kernels::Complex>, 6> views;
  for (std::size_t j = 0; j < k.size(); ++j) {
    k[j] = filled(n, 0.2 * (j + 1));
    views[j] = k[j];
  }
  const std::array<double, 6> coeff{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
  std::vector<kernels::Complex> y(n);
  for (auto _ : state) {
    Kernel(x, 0.01, coeff, views, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 8 * sizeof(kernels::Complex)));
}

}  // namespace

BENCHMARK(bm_spmv<kernels::spmv_serial>)->Name("spmv/serial")->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_spmv<kernels::spmv_parallel>)->Name("spmv/parallel")->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_residual<kernels::residual_serial>)->Name("residual/serial")->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_residual<kernels::residual_parallel>)->Name("residual/parallel")->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_axpy_stages<kernels::axpy_stages_serial>)->Name("axpy_stages/serial")->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_axpy_stages<kernels::axpy_stages_parallel>)->Name("axpy_stages/parallel")->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
