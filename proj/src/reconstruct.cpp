#include "pwinterp/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

namespace pwinterp {

ReconstructionValue reconstruct(const SampleSet& samples,
                                const KernelSet& kernels, double x) {
    if (samples.N != kernels.N)
        throw std::invalid_argument(
            "sample set and kernel set come from different families");

    ReconstructionValue out;
    out.value = 0.0;
    for (int n = 1; n <= samples.N; ++n) {
        for (int m = -samples.M; m <= samples.M; ++m) {
            out.value +=
                samples.at(n, m) * kernels.value(n, x - samples.rho * m);
        }
    }
    double ring = 0.0;
    for (int n = 1; n <= samples.N; ++n) {
        ring += std::abs(samples.at(n, samples.M) *
                         kernels.value(n, x - samples.rho * samples.M));
        if (samples.M > 0) {
            ring += std::abs(samples.at(n, -samples.M) *
                             kernels.value(n, x + samples.rho * samples.M));
        }
    }
    out.tail_estimate = 10.0 * ring;
    return out;
}

FrameReport frame_ratio(const OperatorFamily& family,
                        const BandlimitedSignal& f, int M, ExecPolicy policy) {
    const double norm = l2_norm_sq(f);
    if (norm <= 0.0)
        throw std::invalid_argument("frame_ratio needs a nonzero signal");

    const SampleSet samples = sample_family(family, f, M, policy);
    double total = 0.0;
    double ring = 0.0;
    for (int n = 1; n <= samples.N; ++n) {
        for (int m = -M; m <= M; ++m) {
            const double e = std::norm(samples.at(n, m));
            total += e;
            if (std::abs(m) == M) ring += e;
        }
    }

    FrameReport report;
    report.M = M;
    report.ratio = total / norm;
    // Samples of sinc-type data decay like 1/m, so the dropped energy is of
    // the order of the outermost ring times M.
    report.tail_fraction =
        (total > 0.0) ? std::min(1.0, ring * M / total) : 1.0;
    return report;
}

ResidualNorms residual_norms(const BandlimitedSignal& f,
                             const SampleSet& samples, const KernelSet& kernels,
                             std::span<const double> grid, ExecPolicy policy) {
    if (grid.empty())
        throw std::invalid_argument("residual_norms needs a nonempty grid");

    std::vector<double> err(grid.size());
    parallel_for(grid.size(), policy, [&](std::size_t i) {
        const Complex rec = reconstruct(samples, kernels, grid[i]).value;
        err[i] = std::abs(f(grid[i]) - rec);
    });

    ResidualNorms norms;
    for (double e : err) norms.sup_err = std::max(norms.sup_err, e);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        acc += 0.5 * h * (err[i] * err[i] + err[i + 1] * err[i + 1]);
    }
    norms.l2_err = std::sqrt(acc);
    return norms;
}

}  // namespace pwinterp
