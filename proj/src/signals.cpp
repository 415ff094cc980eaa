#include "pwinterp/signals.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "pwinterp/gauss.hpp"
#include "pwinterp/sinc.hpp"

namespace pwinterp {

Complex BandlimitedSignal::operator()(double x) const {
    Complex v = 0.0;
    for (const auto& t : terms) v += t.c * sinc(x - t.x0);
    return v;
}

Complex BandlimitedSignal::spectrum(double xi) const {
    if (xi < -0.5 || xi > 0.5) return 0.0;
    Complex v = 0.0;
    for (const auto& t : terms)
        v += t.c * std::exp(Complex(0.0, -2.0 * kPi * t.x0 * xi));
    return v;
}

namespace {

// If the multiplier (including its power) reduces to
//   c * (2 pi i xi)^d * exp(2 pi i a xi),
// return (c, d, a).
struct MonomialShape {
    Complex coeff;
    int degree;
    double shift;
};

std::optional<MonomialShape> monomial_shape(const MultiplierSpec& spec) {
    if (spec.is_tabulated() || !spec.sinc_factors.empty()) return std::nullopt;
    int degree = -1;
    for (std::size_t j = 0; j < spec.poly_coeffs.size(); ++j) {
        if (spec.poly_coeffs[j] != Complex(0.0, 0.0)) {
            if (degree >= 0) return std::nullopt;  // more than one term
            degree = static_cast<int>(j);
        }
    }
    if (degree < 0) return std::nullopt;  // zero multiplier: let quadrature run
    Complex c(1.0, 0.0);
    for (int k = 0; k < spec.power; ++k) c *= spec.poly_coeffs[degree];
    return MonomialShape{c, degree * spec.power, spec.shift * spec.power};
}

std::optional<Complex> apply_closed(const MultiplierSpec& spec,
                                    const BandlimitedSignal& f, double x) {
    if (spec.is_tabulated()) return std::nullopt;

    if (const auto mono = monomial_shape(spec)) {
        // c f^(d)(x + a)
        Complex v = 0.0;
        for (const auto& t : f.terms)
            v += t.c * sinc_derivative(mono->degree, x + mono->shift - t.x0);
        return mono->coeff * v;
    }

    if (spec.power == 1 && spec.sinc_factors.empty()) {
        // sum_j c_j f^(j)(x + shift)
        Complex v = 0.0;
        for (std::size_t j = 0; j < spec.poly_coeffs.size(); ++j) {
            if (spec.poly_coeffs[j] == Complex(0.0, 0.0)) continue;
            Complex d = 0.0;
            for (const auto& t : f.terms)
                d += t.c *
                     sinc_derivative(static_cast<int>(j), x + spec.shift - t.x0);
            v += spec.poly_coeffs[j] * d;
        }
        return v;
    }

    if (spec.power == 1 && spec.sinc_factors.size() == 1 &&
        spec.poly_coeffs.size() == 2 &&
        spec.poly_coeffs[0] == Complex(0.0, 0.0) &&
        spec.poly_coeffs[1] == Complex(1.0, 0.0)) {
        // 2 pi i xi sinc(2 eps xi) e^{2 pi i b xi} is the symmetric difference
        // quotient (f(x+b+eps) - f(x+b-eps)) / (2 eps).
        const double eps = spec.sinc_factors[0];
        const double b = spec.shift;
        return (f(x + b + eps) - f(x + b - eps)) / (2.0 * eps);
    }

    return std::nullopt;
}

Complex apply_quadrature(const MultiplierSpec& spec, const BandlimitedSignal& f,
                         double x, int quad_order) {
    const GaussRule& rule = gauss_rule(quad_order);
    Complex v = 0.0;
    for (const auto& t : f.terms) {
        v += t.c * oscillatory_integral(
                       [&](double xi) { return eval_multiplier(spec, xi); },
                       -0.5, 0.5, x - t.x0, rule);
    }
    return v;
}

}  // namespace

Complex apply_operator(const MultiplierSpec& spec, const BandlimitedSignal& f,
                       double x, ApplyMethod method, int quad_order) {
    switch (method) {
        case ApplyMethod::closed_form: {
            const auto v = apply_closed(spec, f, x);
            if (!v)
                throw std::invalid_argument(
                    "no closed form for this multiplier shape");
            return *v;
        }
        case ApplyMethod::quadrature:
            return apply_quadrature(spec, f, x, quad_order);
        case ApplyMethod::automatic:
        default: {
            const auto v = apply_closed(spec, f, x);
            return v ? *v : apply_quadrature(spec, f, x, quad_order);
        }
    }
}

SampleSet sample_family(const OperatorFamily& family,
                        const BandlimitedSignal& f, int M, ExecPolicy policy) {
    if (M < 0) throw std::invalid_argument("sample window M must be >= 0");
    SampleSet s;
    s.N = family.size();
    s.rho = family.rho;
    s.M = M;
    s.data.assign(s.N, std::vector<Complex>(2 * M + 1));
    const std::size_t total =
        static_cast<std::size_t>(s.N) * static_cast<std::size_t>(2 * M + 1);
    parallel_for(total, policy, [&](std::size_t idx) {
        const int n = static_cast<int>(idx) / (2 * M + 1);
        const int col = static_cast<int>(idx) % (2 * M + 1);
        const int m = col - M;
        s.data[n][col] = apply_operator(family.members[n], f, family.rho * m);
    });
    return s;
}

double l2_norm_sq(const BandlimitedSignal& f) {
    double sum = 0.0;
    for (const auto& a : f.terms) {
        for (const auto& b : f.terms) {
            sum += std::real(a.c * std::conj(b.c)) * sinc(a.x0 - b.x0);
        }
    }
    return sum;
}

}  // namespace pwinterp
