#pragma once

#include <span>

#include "pwinterp/kernels.hpp"
#include "pwinterp/signals.hpp"

namespace pwinterp {

struct ReconstructionValue {
    Complex value;
    // Heuristic bound on the dropped tail: outermost ring of terms times 10.
    // Sinc-type kernels decay like 1/|x|, so this is a diagnostic, not a
    // guarantee.
    double tail_estimate = 0.0;
};

// sum_{n=1..N} sum_{|m| <= M} T_n(f)(rho m) g_n(x - rho m).
ReconstructionValue reconstruct(const SampleSet& samples,
                                const KernelSet& kernels, double x);

struct FrameReport {
    double ratio = 0.0;
    double tail_fraction = 0.0;
    int M = 0;
};

// (sum_{n, |m| <= M} |T_n(f)(rho m)|^2) / ||f||^2. tail_fraction estimates
// the energy dropped past the window (outermost-ring energy times M,
// relative to the captured total).
FrameReport frame_ratio(const OperatorFamily& family,
                        const BandlimitedSignal& f, int M,
                        ExecPolicy policy = ExecPolicy::parallel);

struct ResidualNorms {
    double sup_err = 0.0;
    double l2_err = 0.0;
};

// Sup and trapezoid-rule L2 norms of f - reconstruction over the grid.
ResidualNorms residual_norms(const BandlimitedSignal& f,
                             const SampleSet& samples, const KernelSet& kernels,
                             std::span<const double> grid,
                             ExecPolicy policy = ExecPolicy::parallel);

}  // namespace pwinterp
