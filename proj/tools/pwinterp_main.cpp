// Command-line front end: classify a family, synthesize kernels, reconstruct
// signals from generalized samples, and run the closed-form cross-check
// suites.
//
// Exit codes are a stable contract:
//   0  success (classify: formula exists)
//   2  classify: determinant vanishes on a null set only
//   3  classify: determinant vanishes on positive measure
//   64 malformed input file (JSON syntax, structure, types)
//   65 unknown operator type / bad operator entry
//   66 reconstruct: sample family and kernel family do not match
//   1  any other error

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pwinterp/criterion.hpp"
#include "pwinterp/io.hpp"
#include "pwinterp/kernels.hpp"
#include "pwinterp/reconstruct.hpp"
#include "pwinterp/verify.hpp"

namespace {

using namespace pwinterp;

std::vector<double> parse_range(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2 ||
        hi <= lo)
        throw FormatError("range must be lo:hi:count with count >= 2");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * i / static_cast<double>(n - 1);
    return xs;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

bool is_pure_shift(const MultiplierSpec& m, double* a) {
    if (m.is_tabulated() || !m.sinc_factors.empty()) return false;
    if (m.poly_coeffs.size() != 1 || m.poly_coeffs[0] != Complex(1.0, 0.0))
        return false;
    *a = m.shift * m.power;
    return true;
}

bool is_pure_derivative(const MultiplierSpec& m, int* order, double* shift) {
    if (m.is_tabulated() || !m.sinc_factors.empty()) return false;
    int degree = -1;
    for (std::size_t j = 0; j < m.poly_coeffs.size(); ++j) {
        if (m.poly_coeffs[j] == Complex(0.0, 0.0)) continue;
        if (degree >= 0 || m.poly_coeffs[j] != Complex(1.0, 0.0)) return false;
        degree = static_cast<int>(j);
    }
    if (degree < 1) return false;
    *order = degree * m.power;
    *shift = m.shift * m.power;
    return true;
}

bool is_diffquot_shape(const MultiplierSpec& m, double* eps, double* shift) {
    if (m.is_tabulated() || m.power != 1) return false;
    if (m.sinc_factors.size() != 1 || m.poly_coeffs.size() != 2) return false;
    if (m.poly_coeffs[0] != Complex(0.0, 0.0) ||
        m.poly_coeffs[1] != Complex(1.0, 0.0))
        return false;
    *eps = m.sinc_factors[0];
    *shift = m.shift;
    return true;
}

// Builds the requested closed-form kernel set from the family's structure.
KernelSet closed_form_set(const std::string& kind,
                          const OperatorFamily& family) {
    const int N = family.size();
    if (kind == "littmann") {
        for (int n = 0; n < N; ++n) {
            int order = 0;
            double shift = 0.0;
            const bool ok =
                (n == 0) ? family.members[0].is_identity()
                         : (is_pure_derivative(family.members[n], &order,
                                               &shift) &&
                            order == n && shift == 0.0);
            if (!ok)
                throw std::runtime_error(
                    "littmann closed form needs members 1, D, D^2, ...");
        }
        std::vector<KernelClosedForm> ks;
        for (int m = 1; m <= N; ++m) ks.push_back(littmann_kernel(N, m));
        return as_kernel_set(std::move(ks));
    }
    if (kind == "shifted") {
        std::vector<double> nodes(N);
        for (int n = 0; n < N; ++n) {
            if (!is_pure_shift(family.members[n], &nodes[n]))
                throw std::runtime_error(
                    "shifted closed form needs pure translation members");
        }
        std::vector<KernelClosedForm> ks;
        for (int n = 1; n <= N; ++n) ks.push_back(shifted_kernel(N, nodes, n));
        return as_kernel_set(std::move(ks));
    }
    if (kind == "twonode") {
        double a = 0.0, b = 0.0;
        int order = 0;
        if (N != 2 || !is_pure_shift(family.members[0], &a) ||
            !is_pure_derivative(family.members[1], &order, &b))
            throw std::runtime_error(
                "twonode closed form needs members shift(a), derivative(n, b)");
        auto [g, h] = twonode_kernels(order, a, b);
        return as_kernel_set(std::vector<KernelClosedForm>{g, h});
    }
    if (kind == "diffquot") {
        double a = 0.0, b = 0.0, eps = 0.0;
        if (N != 2 || !is_pure_shift(family.members[0], &a) ||
            !is_diffquot_shape(family.members[1], &eps, &b))
            throw std::runtime_error(
                "diffquot closed form needs members shift(a), diffquot(eps, b)");
        auto [g, h] = diffquot_kernels(eps, a, b);
        return as_kernel_set(std::vector<KernelClosedForm>{g, h});
    }
    throw std::runtime_error("unknown closed-form kind: " + kind);
}

OperatorFamily with_rho_n(OperatorFamily family) {
    family.rho = family.size();
    return family;
}

int cmd_classify(const std::string& family_path, const std::string& profile_out,
                 const std::string& json_out, int grid, int refine,
                 double tol_det, bool sampling_verdicts, double delta, bool serial) {
    const ExecPolicy policy = serial ? ExecPolicy::serial : ExecPolicy::parallel;
    const OperatorFamily family = load_family(family_path);

    const MatrixField field = det_profile(with_rho_n(family), grid, refine, policy);
    const CriterionReport report = classify_interpolation(field, tol_det);

    if (!profile_out.empty()) {
        auto os = open_out(profile_out);
        write_det_profile_csv(os, field);
    }

    std::string json;
    if (sampling_verdicts) {
        const SamplingVerdict verdict =
            classify_sampling(family, delta > 0 ? delta : family.delta, grid,
                              refine, policy);
        json = sampling_verdict_json(verdict);
    } else {
        json = criterion_report_json(report);
    }
    if (json_out.empty()) {
        std::cout << json << "\n";
    } else {
        open_out(json_out) << json << "\n";
    }
    return criterion_case_exit_code(report.criterion_case);
}

int cmd_kernels(const std::string& family_path, const std::string& prefix,
                const std::string& closed_kind, int grid, int quad, int jrange,
                const std::string& xrange, double tol_inv, int jdyn,
                bool dyn_truncated, bool serial) {
    const ExecPolicy policy = serial ? ExecPolicy::serial : ExecPolicy::parallel;
    const OperatorFamily family = with_rho_n(load_family(family_path));
    const std::vector<double> xs = parse_range(xrange);

    KernelSet set;
    std::optional<SpectralKernelSet> spectral;
    try {
        if (closed_kind.empty()) {
            const CriterionReport report =
                classify_interpolation(det_profile(family, 4096, 3, policy));
            if (report.criterion_case != CriterionCase::PositiveEssInf) {
                std::cerr << "no interpolation formula: "
                          << criterion_case_name(report.criterion_case) << "\n";
                return criterion_case_exit_code(report.criterion_case);
            }
            spectral = synthesize_spectral(family, grid, policy, tol_inv);
            set = as_kernel_set(*spectral);
        } else if (closed_kind == "dynamical") {
            if (!family.members[0].is_identity() || family.size() < 2)
                throw std::runtime_error(
                    "dynamical closed form needs a power family 1, K, K^2, ...");
            DynOptions options;
            options.grid_per_piece = grid;
            options.j_window = jdyn;
            options.correction = dyn_truncated
                                     ? DynOptions::Correction::truncated
                                     : DynOptions::Correction::periodized;
            spectral = dynamical_kernels(family.members[1], family.size(),
                                         options);
            if (dyn_truncated)
                std::cout << "correction_tail_estimate "
                          << spectral->truncation_tail << "\n";
            set = as_kernel_set(*spectral);
        } else {
            set = closed_form_set(closed_kind, family);
        }
    } catch (const NoFormulaError& e) {
        std::cerr << "no interpolation formula: " << e.what() << "\n";
        const CriterionReport report =
            classify_interpolation(det_profile(family, 4096, 3, policy));
        return criterion_case_exit_code(report.criterion_case);
    }

    if (spectral) {
        auto os = open_out(prefix + "_spectra.csv");
        write_spectra_csv(os, *spectral);
    }
    {
        auto os = open_out(prefix + "_kernels.csv");
        write_kernel_values_csv(os, set, xs);
    }
    const double residual = verify_biorthogonality(family, set, jrange, quad);
    std::cout << "biorthogonality_residual " << residual << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& family_path,
                    const std::string& signal_path,
                    const std::string& kernel_family_path,
                    const std::string& closed_kind, int M,
                    const std::string& grid_range, const std::string& prefix,
                    const std::string& json_out, bool serial) {
    const ExecPolicy policy = serial ? ExecPolicy::serial : ExecPolicy::parallel;
    const OperatorFamily family = with_rho_n(load_family(family_path));
    const BandlimitedSignal f = load_signal(signal_path);
    const std::vector<double> xs = parse_range(grid_range);

    OperatorFamily kernel_family = family;
    if (!kernel_family_path.empty())
        kernel_family = with_rho_n(load_family(kernel_family_path));
    if (kernel_family.size() != family.size()) {
        std::cerr << "kernel family has N = " << kernel_family.size()
                  << ", sample family has N = " << family.size() << "\n";
        return 66;
    }

    const KernelSet set = closed_kind.empty()
                              ? as_kernel_set(synthesize_spectral(
                                    kernel_family, 64, policy))
                              : closed_form_set(closed_kind, kernel_family);

    const SampleSet samples = sample_family(family, f, M, policy);
    const ResidualNorms norms = residual_norms(f, samples, set, xs, policy);
    const FrameReport frame = frame_ratio(family, f, M, policy);

    if (!prefix.empty()) {
        auto os = open_out(prefix + "_reconstruction.csv");
        write_reconstruction_csv(os, f, samples, set, xs);
        auto ss = open_out(prefix + "_samples.csv");
        write_samples_csv(ss, samples);
    }

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\n  \"sup_err\": %.12g,\n  \"l2_err\": %.12g,\n"
                  "  \"frame_ratio\": %.12g,\n  \"tail_fraction\": %.12g,\n"
                  "  \"M\": %d\n}",
                  norms.sup_err, norms.l2_err, frame.ratio, frame.tail_fraction,
                  M);
    if (json_out.empty()) {
        std::cout << buf << "\n";
    } else {
        open_out(json_out) << buf << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& suite) {
    const auto s = suite_from_name(suite);
    if (!s) {
        std::cerr << "unknown suite: " << suite
                  << " (expected littmann|shifted|vaaler|dynamical|diffquot|"
                     "twonode)\n";
        return 1;
    }
    const std::vector<Check> checks = run_suite(*s);
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%-55s residual %10.3e  tol %8.1e  %s\n", c.name.c_str(),
                    c.residual, c.tol, c.pass ? "pass" : "FAIL");
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Sampling and interpolation on the Paley-Wiener space: determinant "
        "criterion, kernel synthesis, reconstruction"};
    app.require_subcommand(1);

    std::string family_path, signal_path, kernel_family_path;
    std::string profile_out, json_out, prefix, closed_kind, xrange, suite;
    int grid = 4096, refine = 3, quad = 64, jrange = 3, M = 40;
    int kgrid = 64, jdyn = 64;
    double tol_det = kDetTol, tol_inv = kInvTol, delta = 0.0;
    bool serial = false, sampling_verdicts = false, dyn_truncated = false;

    auto* classify = app.add_subcommand("classify",
                                        "classify a family file and report the "
                                        "determinant criterion");
    classify->add_option("family", family_path)->required();
    classify->add_option("--profile", profile_out,
                         "write the determinant profile CSV here");
    classify->add_option("--json", json_out, "write the report here");
    classify->add_option("--grid", grid, "initial grid size");
    classify->add_option("--refine", refine, "bisection refinement levels");
    classify->add_option("--tol-det", tol_det, "determinant tolerance");
    classify->add_flag("--sampling", sampling_verdicts,
                       "report stable-sampling/interpolation verdicts using "
                       "the family's rho");
    classify->add_option("--delta", delta, "band parameter override");
    classify->add_flag("--serial", serial, "disable OpenMP parallelism");

    auto* kernels = app.add_subcommand(
        "kernels", "synthesize reconstruction kernels and export CSV data");
    kernels->add_option("family", family_path)->required();
    kernels->add_option("--out", prefix, "output file prefix")->required();
    kernels->add_option("--closed-form", closed_kind,
                        "littmann|shifted|twonode|diffquot|dynamical");
    kernels->add_option("--grid", kgrid, "spectral nodes per piece");
    kernels->add_option("--quad", quad, "quadrature order");
    kernels->add_option("--jrange", jrange, "biorthogonality window");
    kernels->add_option("--xrange", xrange, "kernel sample range lo:hi:count")
        ->default_val("-8:8:321");
    kernels->add_option("--tol-inv", tol_inv,
                        "max-norm tolerance on inverse*matrix - Id");
    kernels->add_option("--jdyn", jdyn,
                        "dynamical correction window (truncated mode)");
    kernels->add_flag("--dyn-truncated", dyn_truncated,
                      "use the truncated dynamical correction sum instead of "
                      "the periodized one");
    kernels->add_flag("--serial", serial, "disable OpenMP parallelism");

    auto* reconstruct = app.add_subcommand(
        "reconstruct", "reconstruct a signal from generalized samples");
    reconstruct->add_option("family", family_path)->required();
    reconstruct->add_option("signal", signal_path)->required();
    reconstruct->add_option("--kernel-family", kernel_family_path,
                            "synthesize kernels from this family instead");
    reconstruct->add_option("--closed-form", closed_kind,
                            "littmann|shifted|twonode|diffquot");
    reconstruct->add_option("--M", M, "sample window half-width");
    reconstruct->add_option("--grid-range", xrange, "evaluation grid lo:hi:count")
        ->default_val("-2:2:81");
    reconstruct->add_option("--out", prefix, "output file prefix");
    reconstruct->add_option("--json", json_out, "write the summary here");
    reconstruct->add_flag("--serial", serial, "disable OpenMP parallelism");

    auto* verify = app.add_subcommand("verify",
                                      "run a closed-form cross-check suite");
    verify->add_option("suite", suite,
                       "littmann|shifted|vaaler|dynamical|diffquot|twonode")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed())
            return cmd_classify(family_path, profile_out, json_out, grid,
                                refine, tol_det, sampling_verdicts, delta, serial);
        if (kernels->parsed())
            return cmd_kernels(family_path, prefix, closed_kind, kgrid, quad,
                               jrange, xrange, tol_inv, jdyn, dyn_truncated,
                               serial);
        if (reconstruct->parsed())
            return cmd_reconstruct(family_path, signal_path,
                                   kernel_family_path, closed_kind, M, xrange,
                                   prefix, json_out, serial);
        if (verify->parsed()) return cmd_verify(suite);
    } catch (const pwinterp::UnknownOperatorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const pwinterp::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
