#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pwinterp/exec.hpp"
#include "pwinterp/multiplier.hpp"
#include "pwinterp/signals.hpp"

namespace pwinterp {

// Absolute tolerance on |det| of the 1/N-normalized criterion matrix.
inline constexpr double kDetTol = 1e-10;

// The N x N matrix M(x) with entries
//
//   M(x)[m][n] = (1/N) K_n((m - 1 - x) / rho),   m, n = 1..N,
//
// for x in the open interval ((N-2)/2, N/2). For rho = N every multiplier
// argument stays inside the band [-1/2, 1/2]; the essential infimum of
// |det M(x)| over the interval decides whether a stable interpolation
// formula exists.
Eigen::MatrixXcd build_matrix(const OperatorFamily& family, double x);

// |det M(x)| profiled over an adaptive grid.
struct MatrixField {
    OperatorFamily family;  // the family that built the field
    int N = 0;
    double rho = 0.0;
    int initial_grid = 0;
    std::vector<double> grid;  // strictly increasing, inside the open interval
    std::vector<Eigen::MatrixXcd> matrices;
    std::vector<Complex> dets;
    std::vector<double> conds;  // 1-norm condition numbers (inf if singular)

    double interval_lo() const { return 0.5 * (N - 2); }
    double interval_hi() const { return 0.5 * N; }
};

// Uniform grid (endpoints excluded by a half-cell inset) with LU
// determinants; intervals whose |det| is within a factor 10 of the current
// minimum are bisected refine_levels times.
MatrixField det_profile(const OperatorFamily& family, int initial_grid = 4096,
                        int refine_levels = 3,
                        ExecPolicy policy = ExecPolicy::parallel);

enum class CriterionCase {
    PositiveEssInf,          // formula exists
    NullZeroSet,             // det vanishes on a null set only
    PositiveMeasureZeroSet,  // det vanishes on positive measure
};

struct CriterionReport {
    double essinf_estimate = 0.0;
    double zero_fraction = 0.0;  // measure of {|det| < tol} relative to the interval
    CriterionCase criterion_case = CriterionCase::PositiveEssInf;
    double min_location = 0.0;
};

// Classification of the sampling family on PW_pi (requires rho = N).
//
// The grid minimum is polished by golden-section search before comparing
// against the tolerance: a grid alone cannot tell an isolated zero from a
// small positive infimum at tol = 1e-10. The result is an estimate, not a
// certificate; min_location is reported so callers can refine.
CriterionReport classify_interpolation(const MatrixField& field,
                                  double tol_det = kDetTol);

enum class Verdict { yes, no, unknown };

struct SamplingVerdict {
    Verdict stable_sampling = Verdict::unknown;
    Verdict interpolation_set = Verdict::unknown;
    CriterionReport report;
};

// Stable-sampling / interpolation-set verdicts for (rho Z, T) on
// PW_{delta pi}, from the case of the rho-matrix field and the position of
// rho * delta relative to N. Combinations the theory does not cover come
// back unknown.
SamplingVerdict classify_sampling(const OperatorFamily& family, double delta,
                                  int initial_grid = 4096,
                                  int refine_levels = 3,
                                  ExecPolicy policy = ExecPolicy::parallel);

// Independent oracle for the periodization identity behind the criterion:
// for each member K of the family, compares
//
//   sum_{|m| <= trunc} T(f)(N m + a) e^{2 pi i m x}
//
// with
//
//   (1/N) sum_{m=1..N} f_hat(xi_m) K(xi_m) e^{2 pi i a xi_m},
//   xi_m = (m - 1 - x) / N,
//
// and returns the largest absolute difference over the members.
double periodization_check(const OperatorFamily& family,
                           const BandlimitedSignal& f, double a, double x,
                           int trunc);

}  // namespace pwinterp
