#include "pwinterp/sinc.hpp"

#include <array>
#include <cstdint>

namespace pwinterp {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Taylor branch: sinc(x) = sum_j (-1)^j (pi x)^{2j} / (2j+1)!, differentiated
// n times. Converges in a few terms for |x| <= 0.5.
double sinc_derivative_series(int order, double x) {
    double sum = 0.0;
    for (int j = (order + 1) / 2; j < (order + 1) / 2 + 24; ++j) {
        const int p = 2 * j - order;  // remaining power of x
        double term = (j % 2 == 0) ? 1.0 : -1.0;
        term *= std::pow(kPi, 2 * j) / factorial(2 * j + 1);
        // falling factorial (2j)(2j-1)...(2j-order+1)
        for (int i = 0; i < order; ++i) term *= (2 * j - i);
        term *= std::pow(x, p);
        sum += term;
        if (std::abs(term) < 1e-300 && j > order) break;
    }
    return sum;
}

}  // namespace

double sinc_derivative(int order, double x) {
    if (order == 0) return sinc(x);
    if (std::abs(x) < 0.5) return sinc_derivative_series(order, x);

    double sum = 0.0;
    const double px = kPi * x;
    for (int k = 0; k <= order; ++k) {
        // d^k/dx^k sin(pi x) = pi^k sin(pi x + k pi/2)
        const double s = std::sin(px + 0.5 * kPi * k);
        const int m = order - k;  // derivative order applied to 1/x
        double term = binomial(order, k) * std::pow(kPi, k) * s;
        term *= ((m % 2 == 0) ? 1.0 : -1.0) * factorial(m) / std::pow(x, m + 1);
        sum += term;
    }
    return sum / kPi;
}

}  // namespace pwinterp
