#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace pwinterp {

using Complex = std::complex<double>;

// Absolute tolerance for "the multiplier vanishes here"; multipliers in this
// library are O(1)-scaled on the band [-1/2, 1/2].
inline constexpr double kRootTol = 1e-10;

// A bounded Fourier multiplier K on the band [-1/2, 1/2], kept as a closed
// algebra so that every operator stays serializable and closed-form
// cross-checks exist:
//
//   K(xi) = [ P(2 pi i xi) * exp(2 pi i shift xi) * prod_j sinc(2 eps_j xi) ]^power
//
// with P(y) = sum_j poly_coeffs[j] y^j. All factors are entire, so K is
// finite (and continuous) everywhere.
//
// `table`, when nonempty, is the escape hatch for multipliers outside the
// algebra: uniform samples over [-1/2, 1/2], evaluated by linear
// interpolation and then raised to `power`. Tabulated multipliers have no
// closed-form cross-checks and cannot be evaluated off the band.
struct MultiplierSpec {
    std::vector<Complex> poly_coeffs{Complex(1.0, 0.0)};
    double shift = 0.0;
    std::vector<double> sinc_factors;
    int power = 1;
    std::vector<Complex> table;

    static MultiplierSpec identity();
    static MultiplierSpec shift_by(double a);
    static MultiplierSpec derivative(int order, double shift = 0.0);
    static MultiplierSpec diff_quotient(double epsilon, double shift = 0.0);
    static MultiplierSpec polynomial(std::vector<Complex> coeffs,
                                     double shift = 0.0);
    static MultiplierSpec tabulated(std::vector<Complex> values);

    // The same multiplier raised to the k-th power (k >= 0; k = 0 is the
    // identity).
    MultiplierSpec pow(int k) const;

    bool is_identity() const;
    bool is_tabulated() const { return !table.empty(); }
};

Complex eval_multiplier(const MultiplierSpec& spec, double xi);

// The family T = (T_1, ..., T_N) together with the sampling step rho (the
// samples live on rho * Z) and the band parameter delta of the target space
// PW_{delta pi}.
struct OperatorFamily {
    std::vector<MultiplierSpec> members;
    double rho = 0.0;    // defaults to N
    double delta = 1.0;

    OperatorFamily() = default;
    explicit OperatorFamily(std::vector<MultiplierSpec> m,
                            std::optional<double> rho_ = std::nullopt,
                            std::optional<double> delta_ = std::nullopt);

    int size() const { return static_cast<int>(members.size()); }
};

// Family (T^0, T^1, ..., T^{N-1}) of powers of one operator; member 1 is the
// identity.
OperatorFamily power_family(const MultiplierSpec& base, int N);

// Grid points xi in [-1/2, 1/2] where every member multiplier is below
// tol_root in modulus. Any hit certifies that no interpolation formula
// exists (a whole column of the criterion matrix vanishes there).
std::vector<double> common_root_scan(const OperatorFamily& family,
                                     int grid_size,
                                     double tol_root = kRootTol);

}  // namespace pwinterp
