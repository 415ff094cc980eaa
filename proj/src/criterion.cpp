#include "pwinterp/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwinterp/sinc.hpp"

namespace pwinterp {

namespace {

struct DetEval {
    Eigen::MatrixXcd matrix;
    Complex det;
    double cond;
};

DetEval evaluate_point(const OperatorFamily& family, double x) {
    DetEval e;
    e.matrix = build_matrix(family, x);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(e.matrix);
    e.det = lu.determinant();

    const double norm1 = e.matrix.cwiseAbs().colwise().sum().maxCoeff();
    if (std::abs(e.det) < 1e-300) {
        e.cond = std::numeric_limits<double>::infinity();
    } else {
        const Eigen::MatrixXcd inv = lu.inverse();
        e.cond = norm1 * inv.cwiseAbs().colwise().sum().maxCoeff();
    }
    return e;
}

double abs_det_at(const OperatorFamily& family, double x) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(build_matrix(family, x));
    return std::abs(lu.determinant());
}

// Golden-section minimization of |det| on [a, b]; returns (argmin, min).
std::pair<double, double> golden_min(const OperatorFamily& family, double a,
                                     double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = abs_det_at(family, x1);
    double f2 = abs_det_at(family, x2);
    while (b - a > 1e-12) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = abs_det_at(family, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = abs_det_at(family, x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

constexpr double kEdgeInset = 1e-12;

}  // namespace

Eigen::MatrixXcd build_matrix(const OperatorFamily& family, double x) {
    const int N = family.size();
    const double lo = 0.5 * (N - 2);
    const double hi = 0.5 * N;
    if (!(x > lo && x < hi))
        throw std::domain_error(
            "criterion matrix argument outside ((N-2)/2, N/2)");
    Eigen::MatrixXcd M(N, N);
    const double inv_n = 1.0 / N;
    for (int m = 0; m < N; ++m) {
        const double xi = (m - x) / family.rho;
        for (int n = 0; n < N; ++n) {
            M(m, n) = inv_n * eval_multiplier(family.members[n], xi);
        }
    }
    return M;
}

MatrixField det_profile(const OperatorFamily& family, int initial_grid,
                        int refine_levels, ExecPolicy policy) {
    if (initial_grid < 16)
        throw std::invalid_argument("det_profile needs initial_grid >= 16");
    if (refine_levels < 0)
        throw std::invalid_argument("det_profile needs refine_levels >= 0");

    MatrixField field;
    field.family = family;
    field.N = family.size();
    field.rho = family.rho;
    field.initial_grid = initial_grid;

    const double lo = field.interval_lo();
    const double h = 1.0 / initial_grid;
    std::vector<double> xs(initial_grid);
    for (int i = 0; i < initial_grid; ++i) xs[i] = lo + (i + 0.5) * h;

    std::vector<DetEval> evals(xs.size());
    auto run = [&](const std::vector<double>& pts, std::vector<DetEval>& out) {
        out.resize(pts.size());
        parallel_for(pts.size(), policy,
                     [&](std::size_t i) { out[i] = evaluate_point(family, pts[i]); });
    };
    run(xs, evals);

    for (int level = 0; level < refine_levels; ++level) {
        double current_min = std::numeric_limits<double>::infinity();
        for (const auto& e : evals)
            current_min = std::min(current_min, std::abs(e.det));

        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double d =
                std::min(std::abs(evals[i].det), std::abs(evals[i + 1].det));
            if (d < 10.0 * current_min) mids.push_back(0.5 * (xs[i] + xs[i + 1]));
        }
        if (mids.empty()) break;

        std::vector<DetEval> mid_evals;
        run(mids, mid_evals);

        std::vector<double> merged_x;
        std::vector<DetEval> merged_e;
        merged_x.reserve(xs.size() + mids.size());
        merged_e.reserve(xs.size() + mids.size());
        std::size_t i = 0, j = 0;
        while (i < xs.size() || j < mids.size()) {
            if (j == mids.size() || (i < xs.size() && xs[i] < mids[j])) {
                merged_x.push_back(xs[i]);
                merged_e.push_back(std::move(evals[i]));
                ++i;
            } else {
                merged_x.push_back(mids[j]);
                merged_e.push_back(std::move(mid_evals[j]));
                ++j;
            }
        }
        xs = std::move(merged_x);
        evals = std::move(merged_e);
    }

    field.grid = std::move(xs);
    field.matrices.reserve(evals.size());
    field.dets.reserve(evals.size());
    field.conds.reserve(evals.size());
    for (auto& e : evals) {
        field.matrices.push_back(std::move(e.matrix));
        field.dets.push_back(e.det);
        field.conds.push_back(e.cond);
    }
    return field;
}

namespace {

CriterionReport classify_field(const MatrixField& field, double tol_det) {
    const double lo = field.interval_lo();
    const double hi = field.interval_hi();
    const auto& xs = field.grid;
    const std::size_t n = xs.size();

    std::vector<double> absdet(n);
    for (std::size_t i = 0; i < n; ++i) absdet[i] = std::abs(field.dets[i]);

    // Measure of {|det| < tol}: each grid point owns the cell reaching
    // halfway to its neighbours, so adaptive refinement does not inflate the
    // estimate around isolated zeros.
    double zero_measure = 0.0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (absdet[i] < absdet[argmin]) argmin = i;
        if (absdet[i] < tol_det) {
            const double left = (i == 0) ? lo : 0.5 * (xs[i - 1] + xs[i]);
            const double right = (i + 1 == n) ? hi : 0.5 * (xs[i] + xs[i + 1]);
            zero_measure += right - left;
        }
    }
    const double zero_fraction = zero_measure / (hi - lo);

    // Polish the candidate minima (including the boundary cells, where the
    // infimum may sit at the edge of the open interval).
    std::vector<std::pair<double, double>> brackets;  // (a, b)
    std::vector<std::size_t> local_minima;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || absdet[i] <= absdet[i - 1];
        const bool right_ok = (i + 1 == n) || absdet[i] <= absdet[i + 1];
        if (left_ok && right_ok) local_minima.push_back(i);
    }
    std::sort(local_minima.begin(), local_minima.end(),
              [&](std::size_t a, std::size_t b) { return absdet[a] < absdet[b]; });
    if (local_minima.size() > 8) local_minima.resize(8);
    for (std::size_t i : local_minima) {
        const double a = (i == 0) ? lo + kEdgeInset : xs[i - 1];
        const double b = (i + 1 == n) ? hi - kEdgeInset : xs[i + 1];
        brackets.emplace_back(a, b);
    }

    double best = absdet[argmin];
    double best_x = xs[argmin];
    for (const auto& [a, b] : brackets) {
        const auto [x, v] = golden_min(field.family, a, b);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }

    CriterionReport report;
    report.essinf_estimate = best;
    report.zero_fraction = zero_fraction;
    report.min_location = best_x;

    const double measure_threshold = 2.0 / field.initial_grid;
    if (best >= tol_det) {
        report.criterion_case = CriterionCase::PositiveEssInf;
    } else if (zero_fraction > measure_threshold) {
        report.criterion_case = CriterionCase::PositiveMeasureZeroSet;
    } else {
        report.criterion_case = CriterionCase::NullZeroSet;
    }
    return report;
}

}  // namespace

CriterionReport classify_interpolation(const MatrixField& field, double tol_det) {
    if (std::abs(field.rho - field.N) > 1e-12)
        throw std::invalid_argument(
            "classify_interpolation requires a field built with rho = N");
    return classify_field(field, tol_det);
}

SamplingVerdict classify_sampling(const OperatorFamily& family, double delta,
                                  int initial_grid, int refine_levels,
                                  ExecPolicy policy) {
    if (delta <= 0.0)
        throw std::invalid_argument("classify_sampling needs delta > 0");

    const MatrixField field =
        det_profile(family, initial_grid, refine_levels, policy);
    SamplingVerdict verdict;
    verdict.report = classify_field(field, kDetTol);

    const double N = family.size();
    const double rd = family.rho * delta;
    constexpr double slack = 1e-12;
    const bool le = rd <= N + slack;
    const bool ge = rd >= N - slack;

    switch (verdict.report.criterion_case) {
        case CriterionCase::PositiveEssInf:
            verdict.stable_sampling = le ? Verdict::yes : Verdict::no;
            verdict.interpolation_set = ge ? Verdict::yes : Verdict::no;
            break;
        case CriterionCase::NullZeroSet:
            verdict.stable_sampling = le ? Verdict::yes : Verdict::unknown;
            verdict.interpolation_set = le ? Verdict::no : Verdict::unknown;
            break;
        case CriterionCase::PositiveMeasureZeroSet:
            verdict.stable_sampling = ge ? Verdict::no : Verdict::unknown;
            verdict.interpolation_set = le ? Verdict::no : Verdict::unknown;
            break;
    }
    return verdict;
}

double periodization_check(const OperatorFamily& family,
                           const BandlimitedSignal& f, double a, double x,
                           int trunc) {
    const int N = family.size();
    const double lo = 0.5 * (N - 2);
    const double hi = 0.5 * N;
    if (!(x > lo && x < hi))
        throw std::domain_error("periodization_check: x outside the interval");
    if (trunc < 0) throw std::invalid_argument("trunc must be >= 0");

    double worst = 0.0;
    for (const auto& spec : family.members) {
        Complex lhs = 0.0;
        for (int m = -trunc; m <= trunc; ++m) {
            lhs += apply_operator(spec, f, static_cast<double>(N) * m + a) *
                   std::exp(Complex(0.0, 2.0 * kPi * m * x));
        }
        Complex rhs = 0.0;
        for (int m = 1; m <= N; ++m) {
            const double xi = (m - 1 - x) / N;
            rhs += f.spectrum(xi) * eval_multiplier(spec, xi) *
                   std::exp(Complex(0.0, 2.0 * kPi * a * xi));
        }
        rhs /= static_cast<double>(N);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace pwinterp
