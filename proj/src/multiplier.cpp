#include "pwinterp/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include "pwinterp/sinc.hpp"

namespace pwinterp {

MultiplierSpec MultiplierSpec::identity() { return MultiplierSpec{}; }

MultiplierSpec MultiplierSpec::shift_by(double a) {
    MultiplierSpec s;
    s.shift = a;
    return s;
}

MultiplierSpec MultiplierSpec::derivative(int order, double shift) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    MultiplierSpec s;
    s.poly_coeffs.assign(order + 1, Complex(0.0, 0.0));
    s.poly_coeffs[order] = Complex(1.0, 0.0);
    s.shift = shift;
    return s;
}

MultiplierSpec MultiplierSpec::diff_quotient(double epsilon, double shift) {
    if (epsilon == 0.0)
        throw std::invalid_argument("diff_quotient epsilon must be nonzero");
    MultiplierSpec s;
    s.poly_coeffs = {Complex(0.0, 0.0), Complex(1.0, 0.0)};
    s.sinc_factors = {epsilon};
    s.shift = shift;
    return s;
}

MultiplierSpec MultiplierSpec::polynomial(std::vector<Complex> coeffs,
                                          double shift) {
    if (coeffs.empty())
        throw std::invalid_argument("polynomial needs at least one coefficient");
    MultiplierSpec s;
    s.poly_coeffs = std::move(coeffs);
    s.shift = shift;
    return s;
}

MultiplierSpec MultiplierSpec::tabulated(std::vector<Complex> values) {
    if (values.size() < 2)
        throw std::invalid_argument("tabulated multiplier needs >= 2 samples");
    MultiplierSpec s;
    s.table = std::move(values);
    return s;
}

MultiplierSpec MultiplierSpec::pow(int k) const {
    if (k < 0) throw std::invalid_argument("multiplier power must be >= 0");
    if (k == 0) return identity();
    MultiplierSpec s = *this;
    s.power = power * k;
    return s;
}

bool MultiplierSpec::is_identity() const {
    return table.empty() && sinc_factors.empty() && shift == 0.0 &&
           poly_coeffs.size() == 1 && poly_coeffs[0] == Complex(1.0, 0.0);
}

Complex eval_multiplier(const MultiplierSpec& spec, double xi) {
    if (!std::isfinite(xi))
        throw std::invalid_argument("multiplier argument must be finite");
    Complex base;
    if (spec.is_tabulated()) {
        if (xi < -0.5 || xi > 0.5)
            throw std::domain_error(
                "tabulated multiplier defined only on [-1/2, 1/2]");
        const std::size_t n = spec.table.size();
        const double t = (xi + 0.5) * static_cast<double>(n - 1);
        const std::size_t i =
            std::min(static_cast<std::size_t>(t), n - 2);
        const double frac = t - static_cast<double>(i);
        base = (1.0 - frac) * spec.table[i] + frac * spec.table[i + 1];
    } else {
        const Complex y(0.0, 2.0 * kPi * xi);
        // Horner on P(y)
        Complex p = spec.poly_coeffs.back();
        for (std::size_t j = spec.poly_coeffs.size() - 1; j-- > 0;) {
            p = p * y + spec.poly_coeffs[j];
        }
        base = p * std::exp(Complex(0.0, 2.0 * kPi * spec.shift * xi));
        for (double eps : spec.sinc_factors) {
            base *= sinc(2.0 * eps * xi);
        }
    }
    if (spec.power == 1) return base;
    Complex out(1.0, 0.0);
    for (int k = 0; k < spec.power; ++k) out *= base;
    return out;
}

OperatorFamily::OperatorFamily(std::vector<MultiplierSpec> m,
                               std::optional<double> rho_,
                               std::optional<double> delta_)
    : members(std::move(m)) {
    if (members.empty())
        throw std::invalid_argument("operator family cannot be empty");
    rho = rho_.value_or(static_cast<double>(members.size()));
    delta = delta_.value_or(1.0);
    if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
}

OperatorFamily power_family(const MultiplierSpec& base, int N) {
    if (N < 1) throw std::invalid_argument("power_family needs N >= 1");
    std::vector<MultiplierSpec> members;
    members.reserve(N);
    for (int n = 0; n < N; ++n) {
        members.push_back(base.pow(n));
    }
    return OperatorFamily(std::move(members));
}

std::vector<double> common_root_scan(const OperatorFamily& family,
                                     int grid_size, double tol_root) {
    if (grid_size < 2)
        throw std::invalid_argument("common_root_scan needs grid_size >= 2");
    std::vector<double> hits;
    for (int i = 0; i < grid_size; ++i) {
        const double xi = -0.5 + static_cast<double>(i) / (grid_size - 1);
        double worst = 0.0;
        for (const auto& spec : family.members) {
            worst = std::max(worst, std::abs(eval_multiplier(spec, xi)));
            if (worst >= tol_root) break;
        }
        if (worst < tol_root) hits.push_back(xi);
    }
    return hits;
}

}  // namespace pwinterp
