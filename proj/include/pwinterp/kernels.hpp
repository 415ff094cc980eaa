#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pwinterp/exec.hpp"
#include "pwinterp/multiplier.hpp"

namespace pwinterp {

// Max-norm tolerance on (inverse * matrix - Id) during spectral synthesis.
inline constexpr double kInvTol = 1e-9;

// Thrown when the criterion matrix is singular or too ill-conditioned to
// invert at some point of the synthesis grid.
class SynthesisError : public std::runtime_error {
  public:
    SynthesisError(const std::string& what, double x)
        : std::runtime_error(what), x_(x) {}
    double offending_x() const { return x_; }

  private:
    double x_;
};

// Thrown by the closed-form constructors when the requested scheme has no
// interpolation formula. degenerate_case() identifies which exclusion fired
// where the scheme enumerates them (difference-quotient cases 1/2/3);
// otherwise it is 0.
class NoFormulaError : public std::runtime_error {
  public:
    explicit NoFormulaError(const std::string& what, int which_case = 0)
        : std::runtime_error(what), case_(which_case) {}
    int degenerate_case() const { return case_; }

  private:
    int case_;
};

// Per-piece Gauss-Legendre grid on the band. The spectra of the
// reconstruction kernels are smooth inside each piece
// (-1/2 + (j-1)/N, -1/2 + j/N) but may jump at the breakpoints, so no panel
// ever straddles one.
struct BandGrid {
    int N = 0;
    int nodes_per_piece = 0;
    std::vector<double> breakpoints;          // N+1 points -1/2 + j/N
    std::vector<std::vector<double>> xi;      // [piece][node], ascending
    std::vector<std::vector<double>> weight;  // matching quadrature weights
};

BandGrid make_band_grid(int N, int nodes_per_piece);

// Piece index (0-based) containing xi.
int band_piece(int N, double xi);

// Spectra of the N reconstruction kernels: cached values on a per-piece
// Gauss grid plus an exact on-demand evaluator (used when oscillation
// forces finer panels than the cache).
struct SpectralKernelSet {
    int N = 0;
    BandGrid grid;
    // values[n-1][piece][node] = g_hat_n at that node
    std::vector<std::vector<std::vector<Complex>>> values;
    std::vector<double> source_grid;  // x points used for matrix inversion
    std::function<Complex(int n, double xi)> spectrum_fn;  // n is 1-based
    double truncation_tail = 0.0;  // dynamical truncated mode diagnostic

    Complex spectrum(int n, double xi) const { return spectrum_fn(n, xi); }
};

// Builds the kernel spectra by inverting the criterion matrix along a
// Gauss-Legendre source grid in x. The map x -> (j-1-x)/N is affine per
// piece and maps Gauss nodes to Gauss nodes, so the inverse rows land
// exactly on the quadrature grid - no spectral interpolation happens.
//
// Requires rho = N and a family whose determinant stays away from zero
// (classify first); otherwise SynthesisError reports the offending x.
SpectralKernelSet synthesize_spectral(const OperatorFamily& family,
                                      int grid_per_piece = 64,
                                      ExecPolicy policy = ExecPolicy::parallel,
                                      double inv_tol = kInvTol);

// g_n(x) by Gauss-Legendre quadrature of the spectrum, piece by piece, with
// oscillation-aware panel splitting for large |x|. (1 <= n <= N.)
Complex eval_kernel(const SpectralKernelSet& kset, int n, double x);

// Coefficients C_m, m = 1..N, of prod_{j=1..N-1} (y + pi i - 2 pi i j / N)
// = sum_m C_m y^{m-1}. Exact complex convolution; C_N = 1.
std::vector<Complex> littmann_coeffs(int N);

// Closed-form reconstruction kernels for the schemes with explicit
// formulas. Each knows its time-domain value and its (piecewise) spectrum.
class KernelClosedForm {
  public:
    enum class Kind {
        Sinc,
        Littmann,            // derivative sampling, orders 0..N-1
        Shifted,             // N translated sample trains
        TwoNodeValue,        // value train + n-th derivative train: value kernel
        TwoNodeDerivative,   //                                      derivative kernel
        DiffQuotValue,       // value train + difference quotient: value kernel
        DiffQuotDerivative,  //                                    quotient kernel
        DynamicalLast,       // last kernel of a power family, explicit spectrum
    };

    Complex operator()(double x) const;
    Complex spectrum(double xi) const;
    Kind kind() const { return kind_; }
    int family_size() const { return N_; }

  private:
    friend KernelClosedForm sinc_kernel();
    friend KernelClosedForm littmann_kernel(int N, int m);
    friend KernelClosedForm shifted_kernel(int N, std::vector<double> nodes,
                                           int n);
    friend std::pair<KernelClosedForm, KernelClosedForm> twonode_kernels(
        int order, double a, double b);
    friend std::pair<KernelClosedForm, KernelClosedForm> diffquot_kernels(
        double epsilon, double a, double b);
    friend KernelClosedForm dynamical_last_kernel(const MultiplierSpec& base,
                                                  int N);

    KernelClosedForm() = default;

    Kind kind_ = Kind::Sinc;
    int N_ = 1;
    int index_ = 1;                     // Littmann m / Shifted n
    std::vector<Complex> coeffs_;       // Littmann C_m
    std::vector<double> nodes_;         // Shifted sample offsets
    int order_ = 1;                     // TwoNode derivative order
    double a_ = 0.0, b_ = 0.0, eps_ = 0.0;
    MultiplierSpec base_;               // DynamicalLast
    int quad_order_ = 64;
};

KernelClosedForm sinc_kernel();

// g_m(x) = (sum_{n=m..N} C_n (n-1)!/(N-1)! x^{N-n}) x^{m-1}/(m-1)!
//          * sinc(x/N)^N, the kernel paired with the (m-1)-th derivative
// samples on N Z. For m = N it reduces to x^{N-1}/(N-1)! sinc(x/N)^N.
KernelClosedForm littmann_kernel(int N, int m);

// g_n(x) = sinc((x - a_n)/N) prod_{s != n} sin(pi (x - a_s)/N)
//                                        / sin(pi (a_n - a_s)/N).
// Requires a_i - a_j not in N Z for i != j (otherwise two sample trains
// coincide and no formula exists).
KernelClosedForm shifted_kernel(int N, std::vector<double> nodes, int n);

// Kernels for samples {f(2m+a)} and {f^(n)(2m+b)}. No formula when n and
// a-b are both even or both odd.
std::pair<KernelClosedForm, KernelClosedForm> twonode_kernels(int order,
                                                              double a,
                                                              double b);

// Kernels for samples {f(2m+a)} and the symmetric difference quotients
// {(f(2m+b+eps) - f(2m+b-eps)) / (2 eps)}. Degenerate exactly when
//   1) a-b is an odd integer,
//   2) eps is a nonzero integer,
//   3) a-b is an even integer and |eps| >= 1.
std::pair<KernelClosedForm, KernelClosedForm> diffquot_kernels(double epsilon,
                                                               double a,
                                                               double b);

KernelClosedForm dynamical_last_kernel(const MultiplierSpec& base, int N);

// How the dynamical recursion evaluates the infinite correction sum
// sum_j T^N(g_n)(N j) g_N(x - N j):
//  * periodized - folds the sum with the periodization identity; exact.
//  * truncated  - explicit coefficients, |j| <= j_window, tail reported.
//                 The coefficients decay only like 1/j, so expect a
//                 pointwise error of order 1/j_window.
struct DynOptions {
    enum class Correction { periodized, truncated };
    Correction correction = Correction::periodized;
    int j_window = 64;
    int grid_per_piece = 64;
};

// Kernels of the power family (T^0, ..., T^{N-1}): the last spectrum is
// explicit,
//   g_hat_N(xi) = N / prod_{eta in coset(xi), eta != xi} (K(xi) - K(eta)),
// and the rest follow by the downward recursion
//   g_{n-1} = T(g_n) - sum_j T^N(g_n)(N j) g_N(. - N j).
// Requires K to separate the sampling cosets: K(x) != K(y) whenever
// x - y in (1/N) Z on the band (checked on a grid).
SpectralKernelSet dynamical_kernels(const MultiplierSpec& base, int N,
                                    const DynOptions& options = {});

// Independent route to the same spectra through Lagrange interpolation on
// the coset values of K; used to cross-check the recursion.
Complex dynamical_lagrange_spectrum(const MultiplierSpec& base, int N, int n,
                                    double xi);

// Uniform handle over synthesized and closed-form kernels.
struct KernelSet {
    int N = 0;
    std::function<Complex(int n, double x)> value;     // g_n(x), n 1-based
    std::function<Complex(int n, double xi)> spectrum;  // g_hat_n(xi)
};

KernelSet as_kernel_set(SpectralKernelSet set);
KernelSet as_kernel_set(std::vector<KernelClosedForm> kernels);

// max over n, m in 1..N and |j| <= j_range of
//   | T_m(g_n)(N j) - delta_{n,m} delta_{j,0} |,
// with T_m applied spectrally: T_m(g_n)(x) = integral of
// g_hat_n(xi) K_m(xi) e^{2 pi i x xi} over the band.
double verify_biorthogonality(const OperatorFamily& family,
                              const KernelSet& kernels, int j_range,
                              int quad_order = 64);

}  // namespace pwinterp
