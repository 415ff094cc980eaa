#include "pwinterp/verify.hpp"

#include <cmath>
#include <complex>

#include "pwinterp/criterion.hpp"
#include "pwinterp/kernels.hpp"
#include "pwinterp/reconstruct.hpp"
#include "pwinterp/sinc.hpp"
#include "pwinterp/signals.hpp"

namespace pwinterp {

namespace {

constexpr Complex kI(0.0, 1.0);

void add(std::vector<Check>& out, std::string name, double residual,
         double tol) {
    out.push_back({std::move(name), residual, tol, residual <= tol});
}

void add_flag(std::vector<Check>& out, std::string name, bool ok) {
    out.push_back({std::move(name), ok ? 0.0 : 1.0, 0.5, ok});
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * i / static_cast<double>(n - 1);
    return xs;
}

OperatorFamily littmann_family(int N) {
    return power_family(MultiplierSpec::derivative(1), N);
}

OperatorFamily shifted_family(const std::vector<double>& nodes) {
    std::vector<MultiplierSpec> members;
    for (double a : nodes) members.push_back(MultiplierSpec::shift_by(a));
    return OperatorFamily(std::move(members));
}

OperatorFamily diffquot_family(double eps, double a, double b) {
    return OperatorFamily(
        {MultiplierSpec::shift_by(a), MultiplierSpec::diff_quotient(eps, b)});
}

OperatorFamily twonode_family(int order, double a, double b) {
    return OperatorFamily(
        {MultiplierSpec::shift_by(a), MultiplierSpec::derivative(order, b)});
}

KernelSet littmann_set(int N) {
    std::vector<KernelClosedForm> ks;
    for (int m = 1; m <= N; ++m) ks.push_back(littmann_kernel(N, m));
    return as_kernel_set(std::move(ks));
}

double closed_vs_synth(const OperatorFamily& family, const KernelSet& closed,
                       double xlo, double xhi, int npts) {
    const SpectralKernelSet synth = synthesize_spectral(family);
    double worst = 0.0;
    for (double x : linspace(xlo, xhi, npts)) {
        for (int n = 1; n <= family.size(); ++n) {
            worst = std::max(
                std::abs(closed.value(n, x) - eval_kernel(synth, n, x)), worst);
        }
    }
    return worst;
}

// Piece-p Lagrange form of the derivative-sampling spectrum, evaluated on
// the closed piece (used to take one-sided limits at the breakpoints).
Complex littmann_spectrum_on_piece(int N, int m, int p, double xi) {
    std::vector<Complex> v(N);
    for (int j = 0; j < N; ++j)
        v[j] = Complex(0.0, 2.0 * kPi * (xi + static_cast<double>(j - p) / N));
    // coefficient of y^{m-1} in the Lagrange basis through the coset values
    std::vector<Complex> roots;
    Complex den(1.0, 0.0);
    for (int j = 0; j < N; ++j) {
        if (j == p) continue;
        roots.push_back(v[j]);
        den *= v[p] - v[j];
    }
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    c.resize(N, Complex(0.0, 0.0));
    return static_cast<double>(N) * c[m - 1] / den;
}

std::vector<Check> suite_littmann() {
    std::vector<Check> out;

    {  // coefficient expansion vs direct product evaluation
        double worst = 0.0;
        const std::vector<Complex> ys = {Complex(0.3, 0.1), Complex(-1.2, 0.0),
                                         Complex(0.0, 2.7), Complex(0.9, -0.4)};
        for (int N = 1; N <= 6; ++N) {
            const auto C = littmann_coeffs(N);
            for (const Complex& y : ys) {
                Complex horner = C[N - 1];
                for (int m = N - 1; m >= 1; --m) horner = horner * y + C[m - 1];
                Complex prod(1.0, 0.0);
                for (int j = 1; j <= N - 1; ++j)
                    prod *= y + kI * kPi - kI * (2.0 * kPi * j / N);
                worst = std::max(worst,
                                 std::abs(horner - prod) / std::abs(prod));
            }
        }
        add(out, "coefficient expansion vs product (N=1..6)", worst, 1e-12);
    }

    {  // closed-form kernels are biorthogonal to the derivative samples
        double worst = 0.0;
        for (int N = 1; N <= 4; ++N) {
            worst = std::max(
                worst, verify_biorthogonality(littmann_family(N),
                                              littmann_set(N), 3));
        }
        add(out, "closed-kernel biorthogonality (N=1..4, j<=3)", worst, 1e-8);
    }

    {  // jump of the spectrum at each breakpoint
        double worst = 0.0;
        for (int N = 2; N <= 4; ++N) {
            const auto C = littmann_coeffs(N);
            const Complex scale =
                std::pow(Complex(0.0, -static_cast<double>(N) / (2.0 * kPi)),
                         N - 1);
            for (int m = 1; m <= N; ++m) {
                for (int n = 0; n <= N; ++n) {
                    const double bp = -0.5 + static_cast<double>(n) / N;
                    const Complex right =
                        (n == N) ? Complex(0.0, 0.0)
                                 : littmann_spectrum_on_piece(N, m, n, bp);
                    const Complex left =
                        (n == 0) ? Complex(0.0, 0.0)
                                 : littmann_spectrum_on_piece(N, m, n - 1, bp);
                    double fact_n = 1.0, fact_nn = 1.0;
                    for (int i = 2; i <= n; ++i) fact_n *= i;
                    for (int i = 2; i <= N - n; ++i) fact_nn *= i;
                    const double sign = ((N - n - 1) % 2 == 0) ? 1.0 : -1.0;
                    const Complex expected = scale * sign *
                                             (static_cast<double>(N) * N /
                                              (fact_n * fact_nn)) *
                                             C[m - 1];
                    worst = std::max(worst,
                                     std::abs((right - left) - expected));
                }
            }
        }
        add(out, "spectral jumps at breakpoints (N=2..4)", worst, 1e-8);
    }

    {  // g_hat_{m+1} = -g_hat_m' / (2 pi i m) inside each piece
        double worst = 0.0;
        const double h = 1e-6;
        for (int N = 2; N <= 4; ++N) {
            std::vector<KernelClosedForm> ks;
            for (int m = 1; m <= N; ++m) ks.push_back(littmann_kernel(N, m));
            for (int p = 0; p < N; ++p) {
                const double lo = -0.5 + static_cast<double>(p) / N;
                for (double t : {0.25, 0.5, 0.75}) {
                    const double xi = lo + t / N;
                    for (int m = 1; m <= N - 1; ++m) {
                        const Complex d =
                            (ks[m - 1].spectrum(xi + h) -
                             ks[m - 1].spectrum(xi - h)) /
                            (2.0 * h);
                        const Complex lhs = ks[m].spectrum(xi);
                        worst = std::max(
                            worst,
                            std::abs(lhs + d / (2.0 * kPi * kI *
                                                static_cast<double>(m))));
                    }
                }
            }
        }
        add(out, "spectral derivative relation (N=2..4)", worst, 1e-5);
    }

    {  // closed forms vs synthesized kernels
        double worst = 0.0;
        for (int N = 2; N <= 3; ++N) {
            worst = std::max(worst, closed_vs_synth(littmann_family(N),
                                                    littmann_set(N), -4.0, 4.0,
                                                    33));
        }
        add(out, "closed vs synthesized kernels (N=2,3)", worst, 1e-6);
    }

    {  // kernels are real on the real line
        double worst = 0.0;
        const KernelSet set = littmann_set(3);
        for (double x : linspace(-5.0, 5.0, 41)) {
            for (int n = 1; n <= 3; ++n)
                worst = std::max(worst, std::abs(set.value(n, x).imag()));
        }
        add(out, "kernel reality (N=3)", worst, 1e-9);
    }

    return out;
}

std::vector<Check> suite_shifted() {
    std::vector<Check> out;
    const std::vector<double> nodes = {0.0, 0.7, 1.9};
    const int N = 3;
    const OperatorFamily family = shifted_family(nodes);

    {  // Vandermonde factorization of the determinant
        const MatrixField field = det_profile(family, 256, 0);
        double worst = 0.0;
        for (std::size_t i = 0; i < field.grid.size(); ++i) {
            const double x = field.grid[i];
            Complex prod(1.0, 0.0);
            std::vector<Complex> w(N);
            for (int s = 0; s < N; ++s)
                w[s] = std::exp(kI * 2.0 * kPi * nodes[s] /
                                static_cast<double>(N));
            for (int n = 0; n < N; ++n)
                for (int m = n + 1; m < N; ++m) prod *= w[m] - w[n];
            for (int s = 0; s < N; ++s)
                prod *= std::exp(-kI * 2.0 * kPi * nodes[s] * x /
                                 static_cast<double>(N)) /
                        static_cast<double>(N);
            worst = std::max(worst,
                             std::abs(field.dets[i] - prod) / std::abs(prod));
        }
        add(out, "vandermonde determinant factorization", worst, 1e-10);
    }

    {  // exact interpolation property of the closed forms
        double worst = 0.0;
        for (int n = 1; n <= N; ++n) {
            const KernelClosedForm g = shifted_kernel(N, nodes, n);
            for (int m = 1; m <= N; ++m) {
                for (int j = -2; j <= 2; ++j) {
                    const double x = 3.0 * j + nodes[m - 1];
                    const double expected = (n == m && j == 0) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(g(x).real() - expected));
                    worst = std::max(worst, std::abs(g(x).imag()));
                }
            }
        }
        add(out, "closed-kernel interpolation deltas", worst, 1e-12);
    }

    {
        std::vector<KernelClosedForm> ks;
        for (int n = 1; n <= N; ++n) ks.push_back(shifted_kernel(N, nodes, n));
        const KernelSet set = as_kernel_set(std::move(ks));
        add(out, "closed vs synthesized kernels",
            closed_vs_synth(family, set, -4.0, 4.0, 33), 1e-6);
        add(out, "closed-kernel biorthogonality (j<=2)",
            verify_biorthogonality(family, set, 2), 1e-8);
    }

    {  // colliding nodes: no formula, determinant vanishes identically
        bool threw = false;
        try {
            shifted_kernel(2, {0.0, 2.0}, 1);
        } catch (const NoFormulaError&) {
            threw = true;
        }
        const OperatorFamily bad = shifted_family({0.0, 2.0});
        const CriterionReport report =
            classify_interpolation(det_profile(bad, 256, 0));
        add_flag(out, "node collision rejected (nodes 0,2)",
                 threw && report.criterion_case ==
                              CriterionCase::PositiveMeasureZeroSet);
    }

    return out;
}

std::vector<Check> suite_vaaler() {
    std::vector<Check> out;
    const OperatorFamily family(
        {MultiplierSpec::identity(), MultiplierSpec::derivative(1)});

    {
        const MatrixField field = det_profile(family, 1024, 1);
        double worst = 0.0;
        for (const Complex& d : field.dets)
            worst = std::max(worst, std::abs(std::abs(d) - kPi / 4.0));
        add(out, "determinant constant pi/4", worst, 1e-12);
    }

    {
        const SpectralKernelSet synth = synthesize_spectral(family);
        double worst = 0.0;
        for (double x : linspace(-4.0, 4.0, 50)) {
            const double g1 = sinc(x / 2) * sinc(x / 2);
            const double g2 = x * g1;
            worst = std::max(worst, std::abs(eval_kernel(synth, 1, x) - g1));
            worst = std::max(worst, std::abs(eval_kernel(synth, 2, x) - g2));
        }
        add(out, "synthesized kernels match closed forms", worst, 1e-6);
        add(out, "synthesized biorthogonality (j<=3)",
            verify_biorthogonality(family, as_kernel_set(synth), 3), 1e-6);
    }

    {  // reconstruction spot check; truncation tail ~ 1/(pi^2 M)
        const BandlimitedSignal f{{{Complex(1.0, 0.0), 1.0}}};
        const SampleSet samples = sample_family(family, f, 64);
        const KernelSet set = littmann_set(2);
        const Complex rec = reconstruct(samples, set, 0.5).value;
        add(out, "reconstruction of sinc(x-1) at x=0.5",
            std::abs(rec - f(0.5)), 2e-3);
    }

    return out;
}

std::vector<Check> suite_dynamical() {
    std::vector<Check> out;
    const MultiplierSpec deriv = MultiplierSpec::derivative(1);
    const MultiplierSpec half_shift = MultiplierSpec::shift_by(0.5);

    {  // determinant of the power family factors over coset differences
        double worst = 0.0;
        for (const MultiplierSpec& base : {deriv, half_shift}) {
            for (int N = 2; N <= 3; ++N) {
                const OperatorFamily family = power_family(base, N);
                const MatrixField field = det_profile(family, 256, 0);
                for (std::size_t i = 0; i < field.grid.size(); ++i) {
                    const double x = field.grid[i];
                    std::vector<Complex> v(N);
                    for (int m = 0; m < N; ++m)
                        v[m] = eval_multiplier(base, (m - x) / N);
                    Complex prod(1.0, 0.0);
                    for (int n = 0; n < N; ++n)
                        for (int m = n + 1; m < N; ++m) prod *= v[m] - v[n];
                    prod /= std::pow(static_cast<double>(N), N);
                    worst = std::max(
                        worst, std::abs(field.dets[i] - prod) / std::abs(prod));
                }
            }
        }
        add(out, "product determinant formula (N=2,3)", worst, 1e-10);
    }

    {  // recursion kernels vs matrix-inversion synthesis
        double worst = 0.0;
        for (const MultiplierSpec& base : {deriv, half_shift}) {
            for (int N = 2; N <= 3; ++N) {
                const SpectralKernelSet dyn = dynamical_kernels(base, N);
                const SpectralKernelSet synth =
                    synthesize_spectral(power_family(base, N));
                for (double x : linspace(-4.0, 4.0, 25)) {
                    for (int n = 1; n <= N; ++n) {
                        worst = std::max(worst,
                                         std::abs(eval_kernel(dyn, n, x) -
                                                  eval_kernel(synth, n, x)));
                    }
                }
            }
        }
        add(out, "recursion vs synthesized kernels (N=2,3)", worst, 1e-5);
    }

    {  // recursion spectra vs the Lagrange route
        double worst = 0.0;
        for (const MultiplierSpec& base : {deriv, half_shift}) {
            const int N = 3;
            const SpectralKernelSet dyn = dynamical_kernels(base, N);
            for (double xi : {-0.41, -0.23, 0.02, 0.17, 0.44}) {
                for (int n = 1; n <= N; ++n) {
                    worst = std::max(
                        worst,
                        std::abs(dyn.spectrum_fn(n, xi) -
                                 dynamical_lagrange_spectrum(base, N, n, xi)));
                }
            }
        }
        add(out, "recursion vs Lagrange spectra", worst, 1e-9);
    }

    {  // shift base reduces to the translated-train closed form
        const SpectralKernelSet dyn = dynamical_kernels(half_shift, 2);
        double worst = 0.0;
        for (int n = 1; n <= 2; ++n) {
            const KernelClosedForm g = shifted_kernel(2, {0.0, 0.5}, n);
            for (double x : linspace(-4.0, 4.0, 25))
                worst = std::max(worst, std::abs(eval_kernel(dyn, n, x) - g(x)));
        }
        add(out, "shift base matches translated-train kernels", worst, 1e-6);
    }

    {  // constant multiplier cannot separate the cosets
        bool threw = false;
        try {
            dynamical_kernels(MultiplierSpec::identity(), 2);
        } catch (const NoFormulaError&) {
            threw = true;
        }
        add_flag(out, "identity base rejected", threw);
    }

    return out;
}

std::vector<Check> suite_diffquot() {
    std::vector<Check> out;

    {
        bool ok = true;
        try {
            diffquot_kernels(0.3, 1.0, 0.0);
            ok = false;
        } catch (const NoFormulaError& e) {
            ok = e.degenerate_case() == 1;
        }
        add_flag(out, "case 1 fires (a-b odd)", ok);

        const CriterionReport report =
            classify_interpolation(det_profile(diffquot_family(0.3, 1.0, 0.0)));
        add_flag(out, "case 1 classified as null zero set",
                 report.criterion_case == CriterionCase::NullZeroSet);
        add(out, "case 1 zero located at the band mid-point",
            std::abs(report.min_location - 0.5), 1e-3);
    }
    {
        bool ok = true;
        try {
            diffquot_kernels(1.0, 0.0, 0.0);
            ok = false;
        } catch (const NoFormulaError& e) {
            ok = e.degenerate_case() == 2;
        }
        add_flag(out, "case 2 fires (epsilon integer)", ok);
    }
    {
        bool ok = true;
        try {
            diffquot_kernels(1.5, 0.0, 0.0);
            ok = false;
        } catch (const NoFormulaError& e) {
            ok = e.degenerate_case() == 3;
        }
        add_flag(out, "case 3 fires (a-b even, |eps| >= 1)", ok);
    }
    {
        bool clean = true;
        for (int i = 0; i < 50 && clean; ++i) {
            const double eps = 0.05 + 0.9 * i / 49.0;
            try {
                diffquot_kernels(eps, 0.3 + 0.4 * (i % 5) / 5.0, 0.0);
            } catch (const NoFormulaError&) {
                clean = false;
            }
        }
        for (int i = 0; i < 50 && clean; ++i) {
            const double eps = 0.03 + 0.93 * i / 49.0;
            try {
                diffquot_kernels(eps, 0.0, 0.0);  // a-b even, |eps| < 1
            } catch (const NoFormulaError&) {
                clean = false;
            }
        }
        add_flag(out, "nondegenerate sweep rejects nothing (100 points)",
                 clean);
    }
    {
        const auto [g, h] = diffquot_kernels(0.5, 0.0, 0.0);
        const KernelSet set = as_kernel_set(std::vector<KernelClosedForm>{g, h});
        const OperatorFamily family = diffquot_family(0.5, 0.0, 0.0);
        add(out, "biorthogonality (eps=0.5)",
            verify_biorthogonality(family, set, 3), 1e-6);
        add(out, "closed vs synthesized kernels",
            closed_vs_synth(family, set, -4.0, 4.0, 25), 1e-6);
    }

    return out;
}

std::vector<Check> suite_twonode() {
    std::vector<Check> out;

    {  // parity table over order 1..3, offsets 0..2
        bool ok = true;
        for (int order = 1; order <= 3 && ok; ++order) {
            for (int d = 0; d <= 2 && ok; ++d) {
                const bool excluded = (order % 2 == 0) == (d % 2 == 0);
                bool threw = false;
                try {
                    twonode_kernels(order, static_cast<double>(d), 0.0);
                } catch (const NoFormulaError&) {
                    threw = true;
                }
                ok = (threw == excluded);
            }
        }
        add_flag(out, "parity exclusions (order 1..3, offsets 0..2)", ok);
    }

    {
        const auto [g, h] = twonode_kernels(1, 0.0, 0.0);
        double worst = std::abs(g(0.0) - Complex(1.0, 0.0));
        worst = std::max(worst, std::abs(g(2.0)));
        worst = std::max(worst, std::abs(g(-2.0)));
        add(out, "value kernel deltas (order 1)", worst, 1e-6);

        const OperatorFamily family = twonode_family(1, 0.0, 0.0);
        const KernelSet set = as_kernel_set(std::vector<KernelClosedForm>{g, h});
        add(out, "biorthogonality (order 1)",
            verify_biorthogonality(family, set, 3), 1e-6);
        add(out, "closed vs synthesized kernels",
            closed_vs_synth(family, set, -4.0, 4.0, 25), 1e-6);
    }

    return out;
}

}  // namespace

const char* suite_name(Suite s) {
    switch (s) {
        case Suite::littmann:
            return "littmann";
        case Suite::shifted:
            return "shifted";
        case Suite::vaaler:
            return "vaaler";
        case Suite::dynamical:
            return "dynamical";
        case Suite::diffquot:
            return "diffquot";
        case Suite::twonode:
            return "twonode";
    }
    return "?";
}

std::optional<Suite> suite_from_name(const std::string& name) {
    for (Suite s : {Suite::littmann, Suite::shifted, Suite::vaaler,
                    Suite::dynamical, Suite::diffquot, Suite::twonode}) {
        if (name == suite_name(s)) return s;
    }
    return std::nullopt;
}

std::vector<Check> run_suite(Suite s) {
    switch (s) {
        case Suite::littmann:
            return suite_littmann();
        case Suite::shifted:
            return suite_shifted();
        case Suite::vaaler:
            return suite_vaaler();
        case Suite::dynamical:
            return suite_dynamical();
        case Suite::diffquot:
            return suite_diffquot();
        case Suite::twonode:
            return suite_twonode();
    }
    return {};
}

bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace pwinterp
