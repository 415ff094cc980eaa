#pragma once

#include <vector>

#include "pwinterp/exec.hpp"
#include "pwinterp/multiplier.hpp"

namespace pwinterp {

// A PW_pi test function, kept as a finite combination of sinc translates
//
//   f(x) = sum_k c_k sinc(x - x_k),
//
// so that samples, operator images and norms all have trustworthy closed
// forms. On the band its spectrum is f_hat(xi) = sum_k c_k exp(-2 pi i x_k xi).
struct BandlimitedSignal {
    struct Term {
        Complex c;
        double x0;
    };
    std::vector<Term> terms;

    Complex operator()(double x) const;
    // f_hat(xi); zero off the band.
    Complex spectrum(double xi) const;
};

// Generalized samples T_n(f)(rho m) for n = 1..N and |m| <= M.
struct SampleSet {
    int N = 0;
    double rho = 0.0;
    int M = 0;
    // data[n-1][m + M] = T_n(f)(rho m)
    std::vector<std::vector<Complex>> data;

    Complex at(int n, int m) const { return data[n - 1][m + M]; }
};

enum class ApplyMethod {
    automatic,   // closed form when the multiplier shape admits one
    closed_form, // require the closed form (throws otherwise)
    quadrature,  // always integrate the spectrum
};

// T(f)(x) = integral of f_hat(xi) K(xi) exp(2 pi i x xi) over the band.
//
// Closed forms cover polynomial-in-derivative multipliers with a shift
// (translated sinc derivatives term by term) and the symmetric difference
// quotient; everything else goes through Gauss-Legendre quadrature with
// oscillation-aware panel splitting.
Complex apply_operator(const MultiplierSpec& spec, const BandlimitedSignal& f,
                       double x, ApplyMethod method = ApplyMethod::automatic,
                       int quad_order = 64);

SampleSet sample_family(const OperatorFamily& family,
                        const BandlimitedSignal& f, int M,
                        ExecPolicy policy = ExecPolicy::parallel);

// ||f||_2^2 from the sinc-translate Gram matrix:
// <sinc(. - a), sinc(. - b)> = sinc(a - b).
double l2_norm_sq(const BandlimitedSignal& f);

}  // namespace pwinterp
