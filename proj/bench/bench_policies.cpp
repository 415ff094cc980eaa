// Compares the serial reference loops against the OpenMP versions on the
// three hot paths: determinant profiling, spectral synthesis, and the
// reconstruction sweep.

#include <benchmark/benchmark.h>

#include "pwinterp/criterion.hpp"
#include "pwinterp/kernels.hpp"
#include "pwinterp/reconstruct.hpp"

using namespace pwinterp;

namespace {

OperatorFamily littmann4() {
    return power_family(MultiplierSpec::derivative(1), 4);
}

void bench_det_profile(benchmark::State& state, ExecPolicy policy) {
    const OperatorFamily family = littmann4();
    for (auto _ : state) {
        MatrixField field = det_profile(family, 2048, 1, policy);
        benchmark::DoNotOptimize(field.dets.data());
    }
}

void bench_synthesis(benchmark::State& state, ExecPolicy policy) {
    const OperatorFamily family = littmann4();
    for (auto _ : state) {
        SpectralKernelSet kset = synthesize_spectral(family, 256, policy);
        benchmark::DoNotOptimize(kset.values.data());
    }
}

void bench_reconstruction(benchmark::State& state, ExecPolicy policy) {
    const OperatorFamily family(
        {MultiplierSpec::identity(), MultiplierSpec::derivative(1)});
    BandlimitedSignal f;
    f.terms = {{Complex(1.0, 0.0), 0.0}, {Complex(0.5, 0.0), 0.4}};
    const SampleSet samples = sample_family(family, f, 40, policy);
    std::vector<KernelClosedForm> ks = {littmann_kernel(2, 1),
                                        littmann_kernel(2, 2)};
    const KernelSet set = as_kernel_set(std::move(ks));
    std::vector<double> grid(401);
    for (int i = 0; i <= 400; ++i) grid[i] = -4.0 + 0.02 * i;
    for (auto _ : state) {
        ResidualNorms norms = residual_norms(f, samples, set, grid, policy);
        benchmark::DoNotOptimize(norms.sup_err);
    }
}

}  // namespace

BENCHMARK_CAPTURE(bench_det_profile, serial, ExecPolicy::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_det_profile, openmp, ExecPolicy::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_synthesis, serial, ExecPolicy::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_synthesis, openmp, ExecPolicy::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_reconstruction, serial, ExecPolicy::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_reconstruction, openmp, ExecPolicy::parallel)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
