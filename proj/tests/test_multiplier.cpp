#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pwinterp/criterion.hpp"
#include "pwinterp/multiplier.hpp"
#include "pwinterp/sinc.hpp"

using namespace pwinterp;

namespace {
const Complex kI(0.0, 1.0);

// 20 deterministic sample points in [-1/2, 1/2], none special.
std::vector<double> sample_xis() {
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(-0.487 + 0.0513 * i);
    return xs;
}
}  // namespace

TEST_CASE("identity multiplier evaluates to 1") {
    const auto id = MultiplierSpec::identity();
    CHECK(std::abs(eval_multiplier(id, 0.3) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(id.is_identity());
}

TEST_CASE("derivative multiplier is 2 pi i xi") {
    const auto d = MultiplierSpec::derivative(1);
    const Complex v = eval_multiplier(d, 0.25);
    CHECK(std::abs(v - kI * (2.0 * kPi * 0.25)) < 1e-15);
    CHECK(std::abs(v.imag() - 1.5707963267948966) < 1e-12);
}

TEST_CASE("difference quotient equals its exponential form") {
    // K(xi) = 2 pi i xi sinc(2 eps xi) e^{2 pi i b xi} is the multiplier of
    // the symmetric quotient (f(.+b+eps) - f(.+b-eps)) / (2 eps), i.e.
    // (e^{2 pi i (b+eps) xi} - e^{2 pi i (b-eps) xi}) / (2 eps).
    for (const double eps : {0.3, 0.5, 1.7}) {
        for (const double b : {0.0, 0.6}) {
            const auto spec = MultiplierSpec::diff_quotient(eps, b);
            for (double xi : sample_xis()) {
                const Complex lhs = eval_multiplier(spec, xi);
                const Complex rhs =
                    (std::exp(kI * 2.0 * kPi * (b + eps) * xi) -
                     std::exp(kI * 2.0 * kPi * (b - eps) * xi)) /
                    (2.0 * eps);
                CHECK(std::abs(lhs - rhs) < 1e-12);
            }
        }
    }
}

TEST_CASE("powers multiply pointwise") {
    const std::vector<MultiplierSpec> bases = {
        MultiplierSpec::derivative(1),
        MultiplierSpec::shift_by(0.5),
        MultiplierSpec::diff_quotient(0.4, 0.2),
        MultiplierSpec::polynomial({Complex(1.0, 0.5), Complex(0.0, -1.0)},
                                   0.1),
    };
    for (const auto& base : bases) {
        for (int k : {2, 3, 5}) {
            const auto powered = base.pow(k);
            for (double xi : sample_xis()) {
                const Complex b = eval_multiplier(base, xi);
                Complex expected(1.0, 0.0);
                for (int i = 0; i < k; ++i) expected *= b;
                const Complex got = eval_multiplier(powered, xi);
                const double scale = std::max(1.0, std::abs(expected));
                CHECK(std::abs(got - expected) / scale < 1e-12);
            }
        }
    }
}

TEST_CASE("power family of the derivative") {
    const auto family = power_family(MultiplierSpec::derivative(1), 3);
    REQUIRE(family.size() == 3);
    CHECK(family.members[0].is_identity());
    for (double xi : sample_xis()) {
        const Complex y = kI * 2.0 * kPi * xi;
        CHECK(std::abs(eval_multiplier(family.members[1], xi) - y) < 1e-14);
        CHECK(std::abs(eval_multiplier(family.members[2], xi) - y * y) < 1e-13);
    }
    CHECK(family.rho == doctest::Approx(3.0));
}

TEST_CASE("power family of the identity is degenerate downstream") {
    const auto family = power_family(MultiplierSpec::identity(), 2);
    CHECK(family.members[1].is_identity());
    const MatrixField field = det_profile(family, 64, 0);
    for (const Complex& d : field.dets) CHECK(std::abs(d) < 1e-15);
}

TEST_CASE("power family of a half shift") {
    const auto family = power_family(MultiplierSpec::shift_by(0.5), 2);
    for (double xi : sample_xis()) {
        CHECK(std::abs(eval_multiplier(family.members[1], xi) -
                       std::exp(kI * kPi * xi)) < 1e-14);
    }
}

TEST_CASE("power_family rejects N < 1") {
    CHECK_THROWS_AS(power_family(MultiplierSpec::identity(), 0),
                    std::invalid_argument);
}

TEST_CASE("common root scan") {
    SUBCASE("all-derivative family has the root 0") {
        const OperatorFamily family(
            {MultiplierSpec::derivative(1), MultiplierSpec::derivative(2)});
        const auto hits = common_root_scan(family, 1001);
        REQUIRE(!hits.empty());
        bool found_zero = false;
        for (double xi : hits) found_zero = found_zero || std::abs(xi) < 1e-12;
        CHECK(found_zero);
    }
    SUBCASE("constant member kills every root") {
        const OperatorFamily family(
            {MultiplierSpec::identity(), MultiplierSpec::derivative(1)});
        CHECK(common_root_scan(family, 1001).empty());
    }
    SUBCASE("derivative with opposite shifts still vanishes at 0 only") {
        const OperatorFamily family({MultiplierSpec::derivative(1, 1.0),
                                     MultiplierSpec::derivative(1, -1.0)});
        const auto hits = common_root_scan(family, 1001);
        REQUIRE(hits.size() == 1);
        CHECK(std::abs(hits[0]) < 1e-12);
    }
}

TEST_CASE("a common root inside the band forces a zero of the determinant") {
    // Both members carry the factor 2 pi i (xi + 1/4), so xi = -1/4 is a
    // common root; the matching matrix column vanishes at x = 1/2.
    const MultiplierSpec m1 =
        MultiplierSpec::polynomial({Complex(0.0, kPi / 2), Complex(1.0, 0.0)});
    const MultiplierSpec m2 = MultiplierSpec::polynomial(
        {Complex(0.0, kPi / 2), Complex(1.0, 0.0)}, 0.3);
    const OperatorFamily family({m1, m2});

    const auto hits = common_root_scan(family, 1001);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == doctest::Approx(-0.25).epsilon(1e-12));

    const double x = 0.0 - 2.0 * hits[0];  // piece m = 1
    const Eigen::MatrixXcd M = build_matrix(family, x);
    CHECK(std::abs(M.determinant()) < kDetTol);
}

TEST_CASE("tabulated escape hatch approximates the closed algebra") {
    const auto d = MultiplierSpec::derivative(1);
    std::vector<Complex> table(4097);
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double xi = -0.5 + static_cast<double>(i) / (table.size() - 1);
        table[i] = eval_multiplier(d, xi);
    }
    auto tab = MultiplierSpec::tabulated(std::move(table));
    CHECK(tab.is_tabulated());
    for (double xi : sample_xis()) {
        CHECK(std::abs(eval_multiplier(tab, xi) - eval_multiplier(d, xi)) <
              1e-7);
    }
    CHECK_THROWS_AS(eval_multiplier(tab, 0.6), std::domain_error);

    const auto tab2 = tab.pow(2);
    const Complex v = eval_multiplier(tab, 0.25);
    CHECK(std::abs(eval_multiplier(tab2, 0.25) - v * v) < 1e-12);
}

TEST_CASE("real-coefficient multipliers are conjugate symmetric") {
    // K(-xi) = conj(K(xi)) whenever the polynomial coefficients are real;
    // this is what makes the symmetric sampling schemes produce real kernels.
    const std::vector<MultiplierSpec> specs = {
        MultiplierSpec::identity(),
        MultiplierSpec::shift_by(0.8),
        MultiplierSpec::derivative(2, 0.3),
        MultiplierSpec::diff_quotient(0.5, 0.2).pow(2),
    };
    for (const auto& spec : specs) {
        for (double xi : sample_xis()) {
            const Complex a = eval_multiplier(spec, xi);
            const Complex b = eval_multiplier(spec, -xi);
            CHECK(std::abs(b - std::conj(a)) < 1e-13);
        }
    }
}

TEST_CASE("constructor preconditions") {
    CHECK_THROWS_AS(MultiplierSpec::diff_quotient(0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(MultiplierSpec::polynomial({}), std::invalid_argument);
    CHECK_THROWS_AS(OperatorFamily(std::vector<MultiplierSpec>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(OperatorFamily({MultiplierSpec::identity()}, -1.0),
                    std::invalid_argument);
    const OperatorFamily f({MultiplierSpec::identity()});
    CHECK_THROWS_AS(common_root_scan(f, 1), std::invalid_argument);
}
