#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace pwinterp {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Returns the cached rule of the given order (computed on first use).
const GaussRule& gauss_rule(int order);

// integral of f over [a, b] with one panel of the given rule.
template <class F>
auto gauss_integrate(const GaussRule& rule, double a, double b, F&& f)
    -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    R sum{};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    }
    return half * sum;
}

// integral of F(xi) * exp(2 pi i y xi) over [a, b].
//
// For |y| beyond the oscillation threshold the interval is split so each
// panel spans at most a quarter period of the exponential (width <= 1/(4|y|)).
std::complex<double> oscillatory_integral(
    const std::function<std::complex<double>(double)>& F, double a, double b,
    double y, const GaussRule& rule);

// Number of panels oscillatory_integral uses for frequency y on [a, b].
int oscillatory_panel_count(double a, double b, double y);

}  // namespace pwinterp
