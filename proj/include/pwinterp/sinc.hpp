#pragma once

#include <cmath>
#include <complex>

namespace pwinterp {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
// Series branch below |x| = 1e-4 avoids the 0/0 cancellation; the truncation
// error there is ~(pi x)^6 / 5040 < 1e-27.
inline double sinc(double x) {
    const double px = kPi * x;
    if (std::abs(x) < 1e-4) {
        const double p2 = px * px;
        return 1.0 - p2 / 6.0 * (1.0 - p2 / 20.0);
    }
    return std::sin(px) / px;
}

// n-th derivative of sinc at x.
//
// For |x| away from 0, Leibniz on sin(pi x) * x^{-1} gives
//   sinc^(n)(x) = (1/pi) sum_k C(n,k) pi^k sin(pi x + k pi/2)
//                 * (-1)^(n-k) (n-k)! / x^(n-k+1).
// Near 0 the Taylor series of sinc is differentiated term by term.
double sinc_derivative(int order, double x);

}  // namespace pwinterp
