#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pwinterp/criterion.hpp"
#include "pwinterp/sinc.hpp"

using namespace pwinterp;

namespace {
const Complex kI(0.0, 1.0);

OperatorFamily vaaler_family() {
    return OperatorFamily(
        {MultiplierSpec::identity(), MultiplierSpec::derivative(1)});
}

OperatorFamily diffquot_family(double eps, double a, double b) {
    return OperatorFamily(
        {MultiplierSpec::shift_by(a), MultiplierSpec::diff_quotient(eps, b)});
}
}  // namespace

TEST_CASE("build_matrix entries") {
    SUBCASE("value + derivative family") {
        for (double x : {0.2, 0.5, 0.9}) {
            const Eigen::MatrixXcd M = build_matrix(vaaler_family(), x);
            CHECK(std::abs(M(0, 0) - Complex(0.5, 0.0)) < 1e-15);
            CHECK(std::abs(M(1, 0) - Complex(0.5, 0.0)) < 1e-15);
            CHECK(std::abs(M(0, 1) - (-kI * kPi * x / 2.0)) < 1e-14);
            CHECK(std::abs(M(1, 1) - (kI * kPi * (1.0 - x) / 2.0)) < 1e-14);
        }
    }
    SUBCASE("single identity member") {
        const OperatorFamily family({MultiplierSpec::identity()});
        const Eigen::MatrixXcd M = build_matrix(family, 0.3);
        REQUIRE(M.rows() == 1);
        CHECK(std::abs(M(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("translated trains at x = 1/2") {
        const OperatorFamily family(
            {MultiplierSpec::shift_by(0.0), MultiplierSpec::shift_by(1.0)});
        const Eigen::MatrixXcd M = build_matrix(family, 0.5);
        CHECK(std::abs(M(0, 0) - Complex(0.5, 0.0)) < 1e-15);
        CHECK(std::abs(M(0, 1) - 0.5 * std::exp(-kI * kPi / 2.0)) < 1e-14);
        CHECK(std::abs(M(1, 1) - 0.5 * std::exp(kI * kPi / 2.0)) < 1e-14);
    }
    SUBCASE("domain error outside the open interval") {
        CHECK_THROWS_AS(build_matrix(vaaler_family(), 0.0), std::domain_error);
        CHECK_THROWS_AS(build_matrix(vaaler_family(), 1.0), std::domain_error);
    }
}

TEST_CASE("determinant profiles") {
    SUBCASE("value + derivative: |det| is constant pi/4") {
        const MatrixField field = det_profile(vaaler_family(), 256, 1);
        for (const Complex& d : field.dets)
            CHECK(std::abs(std::abs(d) - kPi / 4.0) < 1e-13);
    }
    SUBCASE("trains at offsets 0 and 1: |det| is constant 1/2") {
        const OperatorFamily family(
            {MultiplierSpec::shift_by(0.0), MultiplierSpec::shift_by(1.0)});
        const MatrixField field = det_profile(family, 256, 0);
        for (const Complex& d : field.dets)
            CHECK(std::abs(std::abs(d) - 0.5) < 1e-13);
    }
    SUBCASE("repeated member: det vanishes identically") {
        const OperatorFamily family(
            {MultiplierSpec::identity(), MultiplierSpec::identity()});
        const MatrixField field = det_profile(family, 64, 2);
        for (const Complex& d : field.dets) CHECK(std::abs(d) < 1e-15);
        for (double c : field.conds) CHECK(std::isinf(c));
    }
}

TEST_CASE("classification") {
    SUBCASE("formula exists for value + derivative sampling") {
        const CriterionReport r =
            classify_interpolation(det_profile(vaaler_family()));
        CHECK(r.criterion_case == CriterionCase::PositiveEssInf);
        CHECK(r.essinf_estimate == doctest::Approx(kPi / 4.0).epsilon(1e-10));
        CHECK(r.zero_fraction == 0.0);
    }
    SUBCASE("odd offset in the quotient scheme: isolated zero at 1/2") {
        const CriterionReport r =
            classify_interpolation(det_profile(diffquot_family(0.3, 1.0, 0.0)));
        CHECK(r.criterion_case == CriterionCase::NullZeroSet);
        CHECK(std::abs(r.min_location - 0.5) < 1e-3);
        CHECK(r.essinf_estimate < kDetTol);
    }
    SUBCASE("colliding trains: determinant vanishes on positive measure") {
        const OperatorFamily family(
            {MultiplierSpec::shift_by(0.0), MultiplierSpec::shift_by(2.0)});
        const CriterionReport r = classify_interpolation(det_profile(family, 512, 1));
        CHECK(r.criterion_case == CriterionCase::PositiveMeasureZeroSet);
        CHECK(r.zero_fraction > 0.9);
    }
    SUBCASE("rho must match N") {
        OperatorFamily family = vaaler_family();
        family.rho = 3.0;
        CHECK_THROWS_AS(classify_interpolation(det_profile(family, 64, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("stable sampling / interpolation verdicts") {
    SUBCASE("case 1 across the rho*delta transition") {
        const OperatorFamily family = vaaler_family();  // rho = N = 2
        const SamplingVerdict low = classify_sampling(family, 0.5, 512, 1);
        CHECK(low.stable_sampling == Verdict::yes);
        CHECK(low.interpolation_set == Verdict::no);

        const SamplingVerdict crit = classify_sampling(family, 1.0, 512, 1);
        CHECK(crit.stable_sampling == Verdict::yes);
        CHECK(crit.interpolation_set == Verdict::yes);

        const SamplingVerdict high = classify_sampling(family, 1.5, 512, 1);
        CHECK(high.stable_sampling == Verdict::no);
        CHECK(high.interpolation_set == Verdict::yes);
    }
    SUBCASE("case 2 keeps the frame but loses interpolation") {
        const SamplingVerdict v =
            classify_sampling(diffquot_family(1.0, 0.0, 0.0), 1.0, 512, 1);
        CHECK(v.report.criterion_case == CriterionCase::NullZeroSet);
        CHECK(v.stable_sampling == Verdict::yes);
        CHECK(v.interpolation_set == Verdict::no);
        const SamplingVerdict above =
            classify_sampling(diffquot_family(1.0, 0.0, 0.0), 1.5, 512, 1);
        CHECK(above.stable_sampling == Verdict::unknown);
        CHECK(above.interpolation_set == Verdict::unknown);
    }
    SUBCASE("case 3 verdicts") {
        const OperatorFamily family(
            {MultiplierSpec::shift_by(0.0), MultiplierSpec::shift_by(2.0)});
        const SamplingVerdict v = classify_sampling(family, 1.0, 512, 1);
        CHECK(v.report.criterion_case ==
              CriterionCase::PositiveMeasureZeroSet);
        CHECK(v.stable_sampling == Verdict::no);
        CHECK(v.interpolation_set == Verdict::no);
    }
    SUBCASE("rho delta = N in case 1 is always yes/yes") {
        for (const OperatorFamily& family :
             {vaaler_family(), diffquot_family(0.5, 0.0, 0.0)}) {
            const double delta = family.size() / family.rho;
            const SamplingVerdict v =
                classify_sampling(family, delta, 512, 1);
            REQUIRE(v.report.criterion_case == CriterionCase::PositiveEssInf);
            CHECK(v.stable_sampling == Verdict::yes);
            CHECK(v.interpolation_set == Verdict::yes);
        }
    }
    SUBCASE("delta must be positive") {
        CHECK_THROWS_AS(classify_sampling(vaaler_family(), 0.0, 64, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("periodization identity") {
    const BandlimitedSignal f_sinc{{{Complex(1.0, 0.0), 0.0}}};
    SUBCASE("single identity member, one term") {
        const OperatorFamily family({MultiplierSpec::identity()});
        for (double x : {-0.3, 0.1, 0.4}) {
            CHECK(periodization_check(family, f_sinc, 0.0, x, 0) < 1e-14);
        }
    }
    SUBCASE("derivative member converges in the window size") {
        const OperatorFamily family = vaaler_family();
        const double coarse = periodization_check(family, f_sinc, 0.0, 0.37, 50);
        const double fine = periodization_check(family, f_sinc, 0.0, 0.37, 500);
        CHECK(fine < 1e-3);
        CHECK(fine < coarse);
        // at the symmetric point the window terms cancel in pairs
        CHECK(periodization_check(family, f_sinc, 0.0, 0.5, 500) < 1e-3);
    }
    SUBCASE("translated member with a shifted signal") {
        const OperatorFamily family(
            {MultiplierSpec::identity(), MultiplierSpec::shift_by(0.5)});
        const BandlimitedSignal f{{{Complex(1.0, 0.0), 0.25}}};
        const double coarse = periodization_check(family, f, 0.0, 0.7, 100);
        const double fine = periodization_check(family, f, 0.0, 0.7, 1000);
        CHECK(fine < 1e-3);
        CHECK(fine < coarse);
    }
}

TEST_CASE("common factor across the family leaves |det| unchanged") {
    const double c = 0.37;
    OperatorFamily base = vaaler_family();
    OperatorFamily shifted = base;
    for (auto& m : shifted.members) m.shift += c;

    const MatrixField f0 = det_profile(base, 128, 0);
    const MatrixField f1 = det_profile(shifted, 128, 0);
    REQUIRE(f0.grid.size() == f1.grid.size());
    for (std::size_t i = 0; i < f0.grid.size(); ++i) {
        CHECK(std::abs(std::abs(f0.dets[i]) - std::abs(f1.dets[i])) < 1e-13);
    }
    CHECK(classify_interpolation(f1).criterion_case ==
          CriterionCase::PositiveEssInf);
}

TEST_CASE("power-family determinant factors over coset differences") {
    const MultiplierSpec base = MultiplierSpec::derivative(1);
    const int N = 3;
    const OperatorFamily family = power_family(base, N);
    const MatrixField field = det_profile(family, 128, 0);
    for (std::size_t i = 0; i < field.grid.size(); ++i) {
        const double x = field.grid[i];
        std::vector<Complex> v(N);
        for (int m = 0; m < N; ++m) v[m] = eval_multiplier(base, (m - x) / N);
        Complex prod(1.0, 0.0);
        for (int n = 0; n < N; ++n)
            for (int m = n + 1; m < N; ++m) prod *= v[m] - v[n];
        prod /= std::pow(static_cast<double>(N), N);
        CHECK(std::abs(field.dets[i] - prod) / std::abs(prod) < 1e-10);
    }
}

TEST_CASE("det profile is deterministic across policies") {
    const OperatorFamily family = vaaler_family();
    const MatrixField a = det_profile(family, 128, 2, ExecPolicy::serial);
    const MatrixField b = det_profile(family, 128, 2, ExecPolicy::parallel);
    REQUIRE(a.grid.size() == b.grid.size());
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(a.grid[i] == b.grid[i]);
        CHECK(a.dets[i] == b.dets[i]);
    }
}
