#include "pwinterp/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "pwinterp/sinc.hpp"

namespace pwinterp {

namespace {

GaussRule make_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, make_rule(order)).first;
    }
    return it->second;
}

int oscillatory_panel_count(double a, double b, double y) {
    const double width = b - a;
    if (std::abs(y) <= 20.0) return 1;
    return static_cast<int>(std::ceil(width * 4.0 * std::abs(y)));
}

std::complex<double> oscillatory_integral(
    const std::function<std::complex<double>(double)>& F, double a, double b,
    double y, const GaussRule& rule) {
    const int panels = oscillatory_panel_count(a, b, y);
    const double h = (b - a) / panels;
    std::complex<double> total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double hi = (p == panels - 1) ? b : lo + h;
        total += gauss_integrate(rule, lo, hi, [&](double xi) {
            return F(xi) *
                   std::exp(std::complex<double>(0.0, 2.0 * kPi * y * xi));
        });
    }
    return total;
}

}  // namespace pwinterp
