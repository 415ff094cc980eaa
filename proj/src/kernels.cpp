#include "pwinterp/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pwinterp/criterion.hpp"
#include "pwinterp/gauss.hpp"
#include "pwinterp/sinc.hpp"

namespace pwinterp {

namespace {

constexpr Complex kImag(0.0, 1.0);

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Complex cpow_int(Complex z, int k) {
    Complex out(1.0, 0.0);
    for (int i = 0; i < k; ++i) out *= z;
    return out;
}

bool near_integer(double r, long long* k_out = nullptr) {
    const double k = std::round(r);
    if (std::abs(r - k) < 1e-9) {
        if (k_out) *k_out = static_cast<long long>(k);
        return true;
    }
    return false;
}

// Coefficients of prod_j (y - roots[j]) by convolution.
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return c;
}

// Coefficients of the Lagrange basis polynomial through the nodes `v`,
// equal to 1 at v[idx] and 0 at the others.
std::vector<Complex> lagrange_coeffs(const std::vector<Complex>& v,
                                     std::size_t idx) {
    std::vector<Complex> roots;
    Complex den(1.0, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j == idx) continue;
        roots.push_back(v[j]);
        den *= v[idx] - v[j];
    }
    std::vector<Complex> c = poly_from_roots(roots);
    for (Complex& x : c) x /= den;
    c.resize(v.size(), Complex(0.0, 0.0));
    return c;
}

}  // namespace

BandGrid make_band_grid(int N, int nodes_per_piece) {
    if (N < 1) throw std::invalid_argument("band grid needs N >= 1");
    if (nodes_per_piece < 2)
        throw std::invalid_argument("band grid needs >= 2 nodes per piece");
    BandGrid g;
    g.N = N;
    g.nodes_per_piece = nodes_per_piece;
    g.breakpoints.resize(N + 1);
    for (int j = 0; j <= N; ++j)
        g.breakpoints[j] = -0.5 + static_cast<double>(j) / N;
    const GaussRule& rule = gauss_rule(nodes_per_piece);
    g.xi.assign(N, std::vector<double>(nodes_per_piece));
    g.weight.assign(N, std::vector<double>(nodes_per_piece));
    for (int p = 0; p < N; ++p) {
        const double mid = 0.5 * (g.breakpoints[p] + g.breakpoints[p + 1]);
        const double half = 0.5 * (g.breakpoints[p + 1] - g.breakpoints[p]);
        for (int q = 0; q < nodes_per_piece; ++q) {
            g.xi[p][q] = mid + half * rule.nodes[q];
            g.weight[p][q] = half * rule.weights[q];
        }
    }
    return g;
}

int band_piece(int N, double xi) {
    const int p = static_cast<int>(std::floor((xi + 0.5) * N));
    return std::clamp(p, 0, N - 1);
}

// ---------------------------------------------------------------------------
// Spectral synthesis by matrix inversion
// ---------------------------------------------------------------------------

SpectralKernelSet synthesize_spectral(const OperatorFamily& family,
                                      int grid_per_piece, ExecPolicy policy,
                                      double inv_tol) {
    const int N = family.size();
    if (std::abs(family.rho - N) > 1e-12)
        throw std::invalid_argument("spectral synthesis requires rho = N");
    if (grid_per_piece < 2)
        throw std::invalid_argument("grid_per_piece must be >= 2");

    SpectralKernelSet kset;
    kset.N = N;
    kset.grid = make_band_grid(N, grid_per_piece);
    kset.values.assign(
        N, std::vector<std::vector<Complex>>(
               N, std::vector<Complex>(grid_per_piece)));

    const GaussRule& rule = gauss_rule(grid_per_piece);
    const double mid = 0.5 * (N - 1);
    kset.source_grid.resize(grid_per_piece);
    for (int q = 0; q < grid_per_piece; ++q)
        kset.source_grid[q] = mid + 0.5 * rule.nodes[q];

    std::vector<double> bad(grid_per_piece,
                            std::numeric_limits<double>::quiet_NaN());
    parallel_for(grid_per_piece, policy, [&](std::size_t q) {
        const double x = kset.source_grid[q];
        const Eigen::MatrixXcd M = build_matrix(family, x);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
        if (std::abs(lu.determinant()) < 1e-300) {
            bad[q] = x;
            return;
        }
        const Eigen::MatrixXcd inv = lu.inverse();
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(N, N);
        const double resid = std::max((inv * M - id).cwiseAbs().maxCoeff(),
                                      (M * inv - id).cwiseAbs().maxCoeff());
        if (!std::isfinite(resid) || resid > inv_tol) {
            bad[q] = x;
            return;
        }
        // The piece-p map x -> (p - x)/N sends the source node q to the
        // piece node with mirrored index.
        const int slot = grid_per_piece - 1 - static_cast<int>(q);
        for (int n = 0; n < N; ++n)
            for (int p = 0; p < N; ++p) kset.values[n][p][slot] = inv(n, p);
    });
    for (int q = 0; q < grid_per_piece; ++q) {
        if (!std::isnan(bad[q]))
            throw SynthesisError(
                "criterion matrix singular or ill-conditioned during synthesis",
                bad[q]);
    }

    const OperatorFamily fam = family;
    kset.spectrum_fn = [fam, N](int n, double xi) -> Complex {
        if (n < 1 || n > N) throw std::invalid_argument("kernel index");
        const int p = band_piece(N, xi);
        double x = static_cast<double>(p) - N * xi;
        const double lo = 0.5 * (N - 2), hi = 0.5 * N;
        x = std::clamp(x, lo + 1e-13, hi - 1e-13);
        const Eigen::MatrixXcd M = build_matrix(fam, x);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
        if (std::abs(lu.determinant()) < 1e-300)
            throw SynthesisError("criterion matrix singular", x);
        return lu.inverse()(n - 1, p);
    };
    return kset;
}

Complex eval_kernel(const SpectralKernelSet& kset, int n, double x) {
    if (n < 1 || n > kset.N) throw std::invalid_argument("kernel index");
    Complex total = 0.0;
    const GaussRule& split_rule = gauss_rule(16);
    for (int p = 0; p < kset.N; ++p) {
        const double a = kset.grid.breakpoints[p];
        const double b = kset.grid.breakpoints[p + 1];
        if (oscillatory_panel_count(a, b, x) == 1) {
            const auto& xi = kset.grid.xi[p];
            const auto& w = kset.grid.weight[p];
            const auto& v = kset.values[n - 1][p];
            Complex sum = 0.0;
            for (std::size_t q = 0; q < xi.size(); ++q) {
                sum += w[q] * v[q] *
                       std::exp(Complex(0.0, 2.0 * kPi * x * xi[q]));
            }
            total += sum;
        } else {
            total += oscillatory_integral(
                [&](double xi) { return kset.spectrum_fn(n, xi); }, a, b, x,
                split_rule);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Derivative-sampling (Littmann) coefficients
// ---------------------------------------------------------------------------

std::vector<Complex> littmann_coeffs(int N) {
    if (N < 1) throw std::invalid_argument("littmann_coeffs needs N >= 1");
    std::vector<Complex> roots;
    for (int j = 1; j <= N - 1; ++j) {
        // factor (y + pi i - 2 pi i j / N) has root -pi i (N - 2 j) / N
        roots.emplace_back(0.0, -kPi * (N - 2.0 * j) / N);
    }
    std::vector<Complex> c = poly_from_roots(roots);
    c.resize(N, Complex(0.0, 0.0));
    return c;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace {

// Coset of xi across the N pieces: the points xi + k/N inside the band,
// one per piece, listed piece by piece.
std::vector<double> coset_points(int N, double xi) {
    const int p = band_piece(N, xi);
    std::vector<double> eta(N);
    for (int p2 = 0; p2 < N; ++p2)
        eta[p2] = xi + static_cast<double>(p2 - p) / N;
    return eta;
}

Complex twonode_denominator(int order, double a, double b, double t) {
    const Complex ea = std::exp(kImag * kPi * a);
    const Complex eb = std::exp(kImag * kPi * b);
    return std::pow(Complex(t - 1.0, 0.0), order) * eb -
           std::pow(Complex(t, 0.0), order) * ea;
}

// e^{i pi b} (1-t) sinc(eps (1-t)) + e^{i pi a} t sinc(eps t); its zeros on
// [0, 1] are exactly the degeneracies of the difference-quotient scheme.
Complex diffquot_denominator(double eps, double a, double b, double t) {
    const Complex ea = std::exp(kImag * kPi * a);
    const Complex eb = std::exp(kImag * kPi * b);
    return eb * (1.0 - t) * sinc(eps * (1.0 - t)) + ea * t * sinc(eps * t);
}

}  // namespace

Complex KernelClosedForm::operator()(double x) const {
    switch (kind_) {
        case Kind::Sinc:
            return Complex(sinc(x), 0.0);

        case Kind::Littmann: {
            const int N = N_, m = index_;
            Complex poly = 0.0;
            for (int n = m; n <= N; ++n) {
                poly += coeffs_[n - 1] * (factorial(n - 1) / factorial(N - 1)) *
                        std::pow(x, N - n);
            }
            const double s = std::pow(sinc(x / N), N);
            return poly * std::pow(x, m - 1) / factorial(m - 1) * s;
        }

        case Kind::Shifted: {
            const int N = N_, n = index_;
            double prod = sinc((x - nodes_[n - 1]) / N);
            for (int s = 0; s < N; ++s) {
                if (s == n - 1) continue;
                prod *= std::sin(kPi * (x - nodes_[s]) / N) /
                        std::sin(kPi * (nodes_[n - 1] - nodes_[s]) / N);
            }
            return Complex(prod, 0.0);
        }

        case Kind::TwoNodeValue: {
            const Complex ex = std::exp(kImag * kPi * (x - b_));
            const Complex eab = std::exp(kImag * kPi * (a_ - b_));
            return oscillatory_integral(
                [&](double t) {
                    const Complex tn = std::pow(Complex(t, 0.0), order_);
                    const Complex un = std::pow(Complex(t - 1.0, 0.0), order_);
                    return (tn * ex - un) / (tn * eab - un);
                },
                0.0, 1.0, -0.5 * (x - a_), gauss_rule(quad_order_));
        }

        case Kind::TwoNodeDerivative: {
            const Complex num = std::exp(kImag * kPi * x) -
                                std::exp(kImag * kPi * a_);
            const Complex scale = cpow_int(-kImag * kPi, order_);
            return oscillatory_integral(
                [&](double t) {
                    return num / (scale * twonode_denominator(order_, a_, b_, t));
                },
                0.0, 1.0, -0.5 * (x - b_), gauss_rule(quad_order_));
        }

        case Kind::DiffQuotValue: {
            const Complex eb = std::exp(kImag * kPi * b_);
            const Complex ex = std::exp(kImag * kPi * x);
            return oscillatory_integral(
                [&](double t) {
                    const Complex num = eb * (1.0 - t) * sinc(eps_ * (1.0 - t)) +
                                        ex * t * sinc(eps_ * t);
                    return num / diffquot_denominator(eps_, a_, b_, t);
                },
                0.0, 1.0, -0.5 * (x - a_), gauss_rule(quad_order_));
        }

        case Kind::DiffQuotDerivative: {
            const Complex num = std::exp(kImag * kPi * x) -
                                std::exp(kImag * kPi * a_);
            return oscillatory_integral(
                [&](double t) {
                    return num /
                           (kImag * kPi * diffquot_denominator(eps_, a_, b_, t));
                },
                0.0, 1.0, -0.5 * (x - b_), gauss_rule(quad_order_));
        }

        case Kind::DynamicalLast: {
            Complex total = 0.0;
            const GaussRule& rule = gauss_rule(quad_order_);
            for (int p = 0; p < N_; ++p) {
                const double a = -0.5 + static_cast<double>(p) / N_;
                const double b = -0.5 + static_cast<double>(p + 1) / N_;
                total += oscillatory_integral(
                    [&](double xi) { return spectrum(xi); }, a, b, x, rule);
            }
            return total;
        }
    }
    return 0.0;
}

Complex KernelClosedForm::spectrum(double xi) const {
    switch (kind_) {
        case Kind::Sinc:
            return (xi >= -0.5 && xi <= 0.5) ? Complex(1.0, 0.0)
                                             : Complex(0.0, 0.0);

        case Kind::Littmann: {
            // Lagrange expansion on the coset values of the derivative
            // multiplier 2 pi i xi.
            const std::vector<double> eta = coset_points(N_, xi);
            std::vector<Complex> v(N_);
            for (int p = 0; p < N_; ++p) v[p] = Complex(0.0, 2.0 * kPi * eta[p]);
            const int p = band_piece(N_, xi);
            return static_cast<double>(N_) *
                   lagrange_coeffs(v, p)[index_ - 1];
        }

        case Kind::Shifted: {
            const int p = band_piece(N_, xi);
            const double x = static_cast<double>(p) - N_ * xi;
            std::vector<Complex> w(N_);
            for (int s = 0; s < N_; ++s)
                w[s] = std::exp(kImag * 2.0 * kPi * nodes_[s] /
                                static_cast<double>(N_));
            const Complex c = lagrange_coeffs(w, index_ - 1)[p];
            return static_cast<double>(N_) * c *
                   std::exp(kImag * 2.0 * kPi * nodes_[index_ - 1] * x /
                            static_cast<double>(N_));
        }

        case Kind::TwoNodeValue:
        case Kind::TwoNodeDerivative: {
            const int p = band_piece(2, xi);
            const double x = (p == 0) ? -2.0 * xi : 1.0 - 2.0 * xi;
            const Complex D = twonode_denominator(order_, a_, b_, x);
            const Complex eax = std::exp(kImag * kPi * a_ * x);
            const Complex ebx = std::exp(kImag * kPi * b_ * x);
            if (kind_ == Kind::TwoNodeValue) {
                if (p == 0)
                    return 2.0 * std::exp(kImag * kPi * b_) *
                           std::pow(Complex(x - 1.0, 0.0), order_) * eax / D;
                return -2.0 * std::pow(Complex(x, 0.0), order_) * eax / D;
            }
            const Complex scale = cpow_int(-kImag * kPi, order_);
            if (p == 0)
                return -2.0 * std::exp(kImag * kPi * a_) * ebx / (scale * D);
            return 2.0 * ebx / (scale * D);
        }

        case Kind::DiffQuotValue:
        case Kind::DiffQuotDerivative: {
            const int p = band_piece(2, xi);
            const double x = (p == 0) ? -2.0 * xi : 1.0 - 2.0 * xi;
            const Complex E = diffquot_denominator(eps_, a_, b_, x);
            const Complex eax = std::exp(kImag * kPi * a_ * x);
            const Complex ebx = std::exp(kImag * kPi * b_ * x);
            if (kind_ == Kind::DiffQuotValue) {
                if (p == 0)
                    return 2.0 * std::exp(kImag * kPi * b_) * (1.0 - x) *
                           sinc(eps_ * (1.0 - x)) * eax / E;
                return 2.0 * x * sinc(eps_ * x) * eax / E;
            }
            if (p == 0)
                return -2.0 * std::exp(kImag * kPi * a_) * ebx / (kImag * kPi * E);
            return 2.0 * ebx / (kImag * kPi * E);
        }

        case Kind::DynamicalLast:
            return dynamical_lagrange_spectrum(base_, N_, N_, xi);
    }
    return 0.0;
}

KernelClosedForm sinc_kernel() {
    KernelClosedForm k;
    k.kind_ = KernelClosedForm::Kind::Sinc;
    k.N_ = 1;
    return k;
}

KernelClosedForm littmann_kernel(int N, int m) {
    if (N < 1 || m < 1 || m > N)
        throw std::invalid_argument("littmann_kernel needs 1 <= m <= N");
    if (N == 1) return sinc_kernel();
    KernelClosedForm k;
    k.kind_ = KernelClosedForm::Kind::Littmann;
    k.N_ = N;
    k.index_ = m;
    k.coeffs_ = littmann_coeffs(N);
    return k;
}

KernelClosedForm shifted_kernel(int N, std::vector<double> nodes, int n) {
    if (N < 1 || static_cast<int>(nodes.size()) != N)
        throw std::invalid_argument("shifted_kernel needs N nodes");
    if (n < 1 || n > N)
        throw std::invalid_argument("shifted_kernel needs 1 <= n <= N");
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            const double d = (nodes[i] - nodes[j]) / N;
            if (std::abs(d - std::round(d)) < 1e-12)
                throw NoFormulaError(
                    "sample trains coincide: node offsets collide modulo N");
        }
    }
    KernelClosedForm k;
    k.kind_ = KernelClosedForm::Kind::Shifted;
    k.N_ = N;
    k.index_ = n;
    k.nodes_ = std::move(nodes);
    return k;
}

std::pair<KernelClosedForm, KernelClosedForm> twonode_kernels(int order,
                                                              double a,
                                                              double b) {
    if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
    long long k = 0;
    if (near_integer(a - b, &k)) {
        const bool diff_even = (k % 2 == 0);
        const bool order_even = (order % 2 == 0);
        if (order_even == diff_even)
            throw NoFormulaError(
                "derivative order and node offset have equal parity: the "
                "denominator vanishes at the band mid-point");
    }
    KernelClosedForm g, h;
    g.kind_ = KernelClosedForm::Kind::TwoNodeValue;
    h.kind_ = KernelClosedForm::Kind::TwoNodeDerivative;
    for (KernelClosedForm* kf : {&g, &h}) {
        kf->N_ = 2;
        kf->order_ = order;
        kf->a_ = a;
        kf->b_ = b;
    }
    return {g, h};
}

std::pair<KernelClosedForm, KernelClosedForm> diffquot_kernels(double epsilon,
                                                               double a,
                                                               double b) {
    if (epsilon == 0.0) throw std::invalid_argument("epsilon must be nonzero");
    long long k = 0;
    if (near_integer(a - b, &k) && (k % 2 != 0))
        throw NoFormulaError("node offset a - b is an odd integer", 1);
    if (near_integer(epsilon, &k) && k != 0)
        throw NoFormulaError("epsilon is a nonzero integer", 2);
    if (near_integer(a - b, &k) && (k % 2 == 0) && std::abs(epsilon) >= 1.0)
        throw NoFormulaError(
            "node offset a - b is even and |epsilon| >= 1", 3);

    KernelClosedForm g, h;
    g.kind_ = KernelClosedForm::Kind::DiffQuotValue;
    h.kind_ = KernelClosedForm::Kind::DiffQuotDerivative;
    for (KernelClosedForm* kf : {&g, &h}) {
        kf->N_ = 2;
        kf->eps_ = epsilon;
        kf->a_ = a;
        kf->b_ = b;
    }
    return {g, h};
}

KernelClosedForm dynamical_last_kernel(const MultiplierSpec& base, int N) {
    if (N < 1) throw std::invalid_argument("dynamical_last_kernel needs N >= 1");
    KernelClosedForm k;
    k.kind_ = KernelClosedForm::Kind::DynamicalLast;
    k.N_ = N;
    k.base_ = base;
    return k;
}

// ---------------------------------------------------------------------------
// Dynamical sampling: explicit last spectrum + downward recursion
// ---------------------------------------------------------------------------

Complex dynamical_lagrange_spectrum(const MultiplierSpec& base, int N, int n,
                                    double xi) {
    if (n < 1 || n > N) throw std::invalid_argument("kernel index");
    const std::vector<double> eta = coset_points(N, xi);
    std::vector<Complex> v(N);
    for (int p = 0; p < N; ++p) v[p] = eval_multiplier(base, eta[p]);
    const int p = band_piece(N, xi);
    return static_cast<double>(N) * lagrange_coeffs(v, p)[n - 1];
}

namespace {

struct DynContext {
    MultiplierSpec base;
    int N;
    DynOptions::Correction mode;
    int J = 0;
    // trunc_coeffs[n] are the coefficients T^N(g_n)(N j), |j| <= J, for the
    // levels n = 2..N that feed the recursion (truncated mode only).
    std::vector<std::vector<Complex>> trunc_coeffs;

    Complex K(double xi) const { return eval_multiplier(base, xi); }

    Complex K_powN(double xi) const { return cpow_int(K(xi), N); }

    Complex trunc_series(int level, double xi) const {
        const auto& c = trunc_coeffs[level];
        Complex s = 0.0;
        for (int j = -J; j <= J; ++j) {
            s += c[j + J] *
                 std::exp(Complex(0.0, -2.0 * kPi * N * j * xi));
        }
        return s;
    }

    // Values of the kernel spectra at the full coset of xi, computed
    // bottom-up from the explicit last level down to `down_to`.
    // spectra[n-1][p] is level n at the coset member living in piece p;
    // levels below `down_to` stay zero. In truncated mode the recursion for
    // level n-1 reads the stored coefficients of level n, so lower levels
    // are only reachable once those have been computed.
    std::vector<std::vector<Complex>> levels_on_coset(double xi,
                                                      int down_to = 1) const {
        const std::vector<double> eta = coset_points(N, xi);
        std::vector<Complex> Kv(N), KvN(N);
        for (int p = 0; p < N; ++p) {
            Kv[p] = K(eta[p]);
            KvN[p] = cpow_int(Kv[p], N);
        }
        std::vector<std::vector<Complex>> spectra(
            N, std::vector<Complex>(N, Complex(0.0, 0.0)));
        for (int p = 0; p < N; ++p) {
            Complex prod(1.0, 0.0);
            for (int p2 = 0; p2 < N; ++p2) {
                if (p2 == p) continue;
                prod *= Kv[p] - Kv[p2];
            }
            spectra[N - 1][p] = static_cast<double>(N) / prod;
        }
        for (int level = N; level >= down_to + 1; --level) {
            // correction series S(xi) = sum_j T^N(g_level)(N j) e^{-2 pi i N j xi}
            // is 1/N-periodic, hence constant on the coset.
            Complex S;
            if (mode == DynOptions::Correction::periodized) {
                S = 0.0;
                for (int p = 0; p < N; ++p)
                    S += spectra[level - 1][p] * KvN[p];
                S /= static_cast<double>(N);
            } else {
                S = trunc_series(level, eta[0]);
            }
            for (int p = 0; p < N; ++p) {
                spectra[level - 2][p] =
                    Kv[p] * spectra[level - 1][p] - S * spectra[N - 1][p];
            }
        }
        return spectra;
    }

    Complex spectrum(int n, double xi) const {
        const int p = band_piece(N, xi);
        return levels_on_coset(xi, n)[n - 1][p];
    }
};

}  // namespace

SpectralKernelSet dynamical_kernels(const MultiplierSpec& base, int N,
                                    const DynOptions& options) {
    if (N < 1) throw std::invalid_argument("dynamical_kernels needs N >= 1");

    // Coset separation check: the explicit spectrum divides by the pairwise
    // differences of K over each coset.
    {
        constexpr int kCheckGrid = 512;
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kCheckGrid; ++i) {
            const double xi =
                -0.5 + (i + 0.5) / (static_cast<double>(kCheckGrid) * N);
            std::vector<Complex> v(N);
            for (int p = 0; p < N; ++p)
                v[p] = eval_multiplier(base, xi + static_cast<double>(p) / N);
            for (int p = 0; p < N; ++p)
                for (int p2 = p + 1; p2 < N; ++p2)
                    min_gap = std::min(min_gap, std::abs(v[p] - v[p2]));
        }
        if (N > 1 && min_gap < kRootTol)
            throw NoFormulaError(
                "multiplier does not separate the sampling cosets");
    }

    auto ctx = std::make_shared<DynContext>();
    ctx->base = base;
    ctx->N = N;
    ctx->mode = options.correction;
    ctx->J = options.j_window;

    SpectralKernelSet kset;
    kset.N = N;
    kset.grid = make_band_grid(N, options.grid_per_piece);
    kset.values.assign(
        N, std::vector<std::vector<Complex>>(
               N, std::vector<Complex>(options.grid_per_piece)));

    if (ctx->mode == DynOptions::Correction::truncated && N > 1) {
        // T^N(g_n)(N j) = integral of g_hat_n K^N e^{2 pi i N j xi}. The
        // integrand is shared across j, so it is sampled once on a grid fine
        // enough for the fastest oscillation N * J.
        ctx->trunc_coeffs.assign(N + 1, {});
        const int J = ctx->J;
        const GaussRule& fine_rule = gauss_rule(16);
        std::vector<double> fxi;
        std::vector<double> fw;
        for (int p = 0; p < N; ++p) {
            const double a = kset.grid.breakpoints[p];
            const double b = kset.grid.breakpoints[p + 1];
            const int panels = oscillatory_panel_count(
                a, b, static_cast<double>(N) * J);
            const double h = (b - a) / panels;
            for (int s = 0; s < panels; ++s) {
                const double lo = a + s * h;
                const double mid = lo + 0.5 * h;
                for (std::size_t q = 0; q < fine_rule.nodes.size(); ++q) {
                    fxi.push_back(mid + 0.5 * h * fine_rule.nodes[q]);
                    fw.push_back(0.5 * h * fine_rule.weights[q]);
                }
            }
        }
        double worst_tail = 0.0;
        for (int level = N; level >= 2; --level) {
            std::vector<Complex> F(fxi.size());
            double sup_last = 0.0;
            for (std::size_t i = 0; i < fxi.size(); ++i) {
                const auto spectra = ctx->levels_on_coset(fxi[i], level);
                const int p = band_piece(N, fxi[i]);
                F[i] = fw[i] * spectra[level - 1][p] * ctx->K_powN(fxi[i]);
                sup_last = std::max(sup_last, std::abs(spectra[N - 1][p]));
            }
            std::vector<Complex> c(2 * J + 1);
            for (int j = -J; j <= J; ++j) {
                Complex sum = 0.0;
                for (std::size_t i = 0; i < fxi.size(); ++i) {
                    sum += F[i] *
                           std::exp(Complex(0.0, 2.0 * kPi * N * j * fxi[i]));
                }
                c[j + J] = sum;
            }
            // Outermost-ring heuristic for the dropped tail of the
            // correction series.
            worst_tail = std::max(
                worst_tail,
                10.0 * std::max(std::abs(c.front()), std::abs(c.back())) *
                    sup_last);
            ctx->trunc_coeffs[level] = std::move(c);
        }
        kset.truncation_tail = worst_tail;
    }

    // Fill the cached node values, one coset (= one node column) at a time.
    for (int q = 0; q < options.grid_per_piece; ++q) {
        const auto spectra = ctx->levels_on_coset(kset.grid.xi[0][q]);
        for (int n = 0; n < N; ++n)
            for (int p = 0; p < N; ++p) kset.values[n][p][q] = spectra[n][p];
    }

    kset.spectrum_fn = [ctx](int n, double xi) { return ctx->spectrum(n, xi); };
    return kset;
}

// ---------------------------------------------------------------------------
// Kernel-set adapters and biorthogonality
// ---------------------------------------------------------------------------

KernelSet as_kernel_set(SpectralKernelSet set) {
    auto sp = std::make_shared<SpectralKernelSet>(std::move(set));
    KernelSet k;
    k.N = sp->N;
    k.value = [sp](int n, double x) { return eval_kernel(*sp, n, x); };
    k.spectrum = [sp](int n, double xi) { return sp->spectrum_fn(n, xi); };
    return k;
}

KernelSet as_kernel_set(std::vector<KernelClosedForm> kernels) {
    if (kernels.empty())
        throw std::invalid_argument("kernel set cannot be empty");
    const int N = kernels.front().family_size();
    if (static_cast<int>(kernels.size()) != N)
        throw std::invalid_argument("expected one kernel per family member");
    auto sp = std::make_shared<std::vector<KernelClosedForm>>(std::move(kernels));
    KernelSet k;
    k.N = N;
    k.value = [sp](int n, double x) { return (*sp)[n - 1](x); };
    k.spectrum = [sp](int n, double xi) { return (*sp)[n - 1].spectrum(xi); };
    return k;
}

double verify_biorthogonality(const OperatorFamily& family,
                              const KernelSet& kernels, int j_range,
                              int quad_order) {
    const int N = family.size();
    if (kernels.N != N)
        throw std::invalid_argument("kernel set does not match the family");
    if (j_range < 0) throw std::invalid_argument("j_range must be >= 0");

    const GaussRule& rule = gauss_rule(quad_order);
    std::vector<double> bp(N + 1);
    for (int j = 0; j <= N; ++j) bp[j] = -0.5 + static_cast<double>(j) / N;

    double worst = 0.0;
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= N; ++m) {
            for (int j = -j_range; j <= j_range; ++j) {
                Complex val = 0.0;
                for (int p = 0; p < N; ++p) {
                    val += oscillatory_integral(
                        [&](double xi) {
                            return kernels.spectrum(n, xi) *
                                   eval_multiplier(family.members[m - 1], xi);
                        },
                        bp[p], bp[p + 1], static_cast<double>(N) * j, rule);
                }
                const Complex target =
                    (n == m && j == 0) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                worst = std::max(worst, std::abs(val - target));
            }
        }
    }
    return worst;
}

}  // namespace pwinterp
