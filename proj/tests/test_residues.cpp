#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helixlab/barriers.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/residues.hpp"

using namespace helixlab;

// ============================================================================
// Contour residues
// ============================================================================

TEST_CASE("contour quadrature reproduces simple residues") {
    const Complex p(0.4, -0.9);
    const Complex r = contour_residue([p](Complex z) { return 1.0 / (z - p); }, p, 0.3, 1e-12);
    CHECK(std::abs(r - 1.0) < 1e-11);

    // residue of an analytic integrand is zero
    const Complex zero =
        contour_residue([](Complex z) { return std::exp(z) + z * z; }, Complex(1, 1), 0.5, 1e-12);
    CHECK(std::abs(zero) < 1e-11);
}

TEST_CASE("log-pole kernels match their closed-form residues") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mod(0.3, 3.0);
    std::uniform_real_distribution<double> ang(-2.8, 2.8);
    for (int trial = 0; trial < 8; ++trial) {
        const Complex p = std::polar(mod(rng), ang(rng));
        const bool weighted = (trial % 2) == 1;
        auto kernel = [weighted, p](Complex z) -> Complex {
            const Complex lg = std::log(z / p);
            if (weighted) return (1.0 - z * z) / (4.0 * z * z) / (lg * lg);
            return 1.0 / lg;
        };
        const Complex quad = contour_residue(kernel, p, 0.15 * std::abs(p), 1e-12);
        CHECK(std::abs(quad - residue_log_pole(p, weighted)) < 1e-9);
    }
}

TEST_CASE("the weighted residue vanishes exactly on the equator point i") {
    CHECK(residue_log_pole(Complex(0, 1), true) == Complex(0, 0));
    CHECK(residue_log_pole(Complex(0, 1), false) == Complex(0, 1));
    CHECK_THROWS_AS((void)residue_log_pole(Complex(0, 0), false), ValidationError);
    CHECK_THROWS_AS((void)contour_residue([](Complex z) { return z; }, Complex(0, 0), -1.0,
                                          1e-10),
                    ValidationError);
}

// ============================================================================
// Domains with holes
// ============================================================================

TEST_CASE("domain validation rejects malformed hole layouts") {
    LaurentDomain bad_radius{2.0, {Disk{Complex(0, 0), -0.1}}};
    CHECK_THROWS_AS(bad_radius.validate(), DomainError);

    LaurentDomain outside{2.0, {Disk{Complex(1.9, 0), 0.5}}};
    CHECK_THROWS_AS(outside.validate(), DomainError);

    LaurentDomain overlap{5.0, {Disk{Complex(0, 0), 1.0}, Disk{Complex(1.5, 0), 1.0}}};
    CHECK_THROWS_AS(overlap.validate(), DomainError);

    LaurentDomain fine{5.0, {Disk{Complex(0, 0), 1.0}, Disk{Complex(3, 0), 1.0}}};
    CHECK_NOTHROW(fine.validate());
    CHECK(fine.contains(Complex(0, 2), 1e-9));
    CHECK_FALSE(fine.contains(Complex(0.5, 0), 1e-9));  // inside a hole
    CHECK_FALSE(fine.contains(Complex(6, 0), 1e-9));    // outside the disk
}

// ============================================================================
// Series splitting
// ============================================================================

TEST_CASE("a rational function splits into its known series") {
    // g = 3 + 2z + 1/(z - p) with the pole inside the hole about the origin
    const Complex p(0.2, 0.1);
    LaurentDomain dom{4.0, {Disk{Complex(0, 0), 0.8}}};
    auto g = [p](Complex z) { return 3.0 + 2.0 * z + 1.0 / (z - p); };
    auto dbar = [](Complex) { return Complex(0, 0); };
    const LaurentSeries s = laurent_decompose(g, dbar, dom, 12, 1e-12);

    const auto& outer = s.outer_coeffs();
    REQUIRE(outer.size() >= 3);
    CHECK(std::abs(outer[0] - Complex(3, 0)) < 1e-10);
    CHECK(std::abs(outer[1] - Complex(2, 0)) < 1e-10);
    CHECK(std::abs(outer[2]) < 1e-10);

    // 1/(z - p) = sum_k p^{k-1} z^{-k} about the origin
    const auto& inner = s.inner_coeffs(0);
    REQUIRE(inner.size() >= 4);
    Complex pw(1, 0);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(inner[k] - pw) < 1e-10);
        pw *= p;
    }
    CHECK(s.inner_tail(0) < 1e-6); // geometric decay reached the truncation
}

TEST_CASE("holomorphic reconstruction matches the function") {
    const Complex p(-0.1, 0.05);
    LaurentDomain dom{3.0, {Disk{Complex(0, 0), 0.5}, Disk{Complex(1.5, 1.0), 0.4}}};
    const Complex q = Complex(1.5, 1.0) + Complex(0.1, -0.05);
    auto g = [p, q](Complex z) { return std::sin(z) * 0.2 + 1.0 / (z - p) + 0.5 / (z - q); };
    auto dbar = [](Complex) { return Complex(0, 0); };
    const LaurentSeries s = laurent_decompose(g, dbar, dom, 24, 1e-12);
    for (const Complex z : {Complex(0.9, 0.2), Complex(-1.2, 0.8), Complex(0.3, -1.4)}) {
        REQUIRE(dom.contains(z, 1e-6));
        CHECK(std::abs(s.reconstruct(z, 1e-8) - g(z)) < 1e-6);
    }
}

TEST_CASE("the area term restores non-holomorphic functions") {
    // g = conj(z) + 1/(z - p): dbar g = 1 everywhere
    const Complex p(0.05, -0.1);
    LaurentDomain dom{2.5, {Disk{Complex(0, 0), 0.6}}};
    auto g = [p](Complex z) { return std::conj(z) + 1.0 / (z - p); };
    auto dbar = [](Complex) { return Complex(1, 0); };
    const LaurentSeries s = laurent_decompose(g, dbar, dom, 16, 1e-12);
    for (const Complex z : {Complex(1.2, 0.3), Complex(-0.4, 1.1)}) {
        CHECK(std::abs(s.reconstruct(z, 1e-8) - g(z)) < 1e-5);
    }
    CHECK_THROWS_AS((void)s.reconstruct(Complex(0.1, 0), 1e-8), DomainError);
}

TEST_CASE("first hole coefficients of gradient fields are real") {
    // g = u_z for real u: a_{i,1} is the gradient flux over 4 pi, a real number
    LaurentDomain dom{5.0, {Disk{Complex(1.2, 0.8), 0.5}, Disk{Complex(-1.5, 0.4), 0.6}}};
    const Complex q0 = Complex(1.2, 0.8) + Complex(0.1, -0.07);
    const Complex q1 = Complex(-1.5, 0.4) + Complex(-0.12, 0.05);
    const double beta = 0.37;
    const Complex gamma(0.21, -0.43);
    // u = 1.3 log|z-q0| - 0.8 log|z-q1| + beta |z|^2 + Re(gamma z^2)
    auto g = [&](Complex z) {
        return 0.5 * 1.3 / (z - q0) - 0.5 * 0.8 / (z - q1) + beta * std::conj(z) + gamma * z;
    };
    auto dbar = [beta](Complex) { return Complex(beta, 0); };
    const LaurentSeries s = laurent_decompose(g, dbar, dom, 8, 1e-12);
    CHECK(std::abs(s.inner_coeffs(0)[0].imag()) <= 1e-9);
    CHECK(std::abs(s.inner_coeffs(1)[0].imag()) <= 1e-9);
    // the real parts carry the gradient flux over 4 pi: the log source gives
    // c/2 and the |z|^2 term adds beta r^2 of area flux through the circle
    CHECK(s.inner_coeffs(0)[0].real() ==
          doctest::Approx(1.3 / 2 + beta * 0.5 * 0.5).epsilon(1e-9));
    CHECK(s.inner_coeffs(1)[0].real() ==
          doctest::Approx(-0.8 / 2 + beta * 0.6 * 0.6).epsilon(1e-9));
}

// ============================================================================
// Force integral
// ============================================================================

TEST_CASE("force integral matches its closed form on the reference pair") {
    LimitConfig lc;
    lc.poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    lc.coefficients = {1.0, 1.0};
    const ForceIntegral fi = force_integral_case1(lc, 0.2, 1e-12);
    CHECK(fi.closed_form == doctest::Approx(7.0982670146351487).epsilon(1e-14));
    CHECK(fi.contour_value == doctest::Approx(fi.closed_form).epsilon(1e-12));
    CHECK(fi.contour_value > 7.0);
    CHECK(fi.closed_form > 7.0);
}

TEST_CASE("the vertical-period term does not move the force integral") {
    LimitConfig lc;
    lc.poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    lc.coefficients = {1.0, 1.0};
    LimitConfig shifted = lc;
    shifted.c0 = 0.9;
    const double plain = force_integral_case1(lc, 0.2, 1e-12).contour_value;
    const double moved = force_integral_case1(shifted, 0.2, 1e-12).contour_value;
    CHECK(plain == doctest::Approx(moved).epsilon(1e-10));
}

TEST_CASE("force integral validates its pole layout") {
    LimitConfig off_axis;
    off_axis.poles = {CoverPoint(0.5, kPi / 3)};
    off_axis.coefficients = {1.0};
    CHECK_THROWS_AS((void)force_integral_case1(off_axis, 0.1, 1e-10), ValidationError);

    LimitConfig unsorted;
    unsorted.poles = {CoverPoint(2.0, kPi / 2), CoverPoint(0.5, kPi / 2)};
    unsorted.coefficients = {1.0, 1.0};
    CHECK_THROWS_AS((void)force_integral_case1(unsorted, 0.1, 1e-10), ValidationError);

    LimitConfig ok;
    ok.poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    ok.coefficients = {1.0, 1.0};
    CHECK_THROWS_AS((void)force_integral_case1(ok, 0.6, 1e-10), DomainError);  // eps > y_1
    CHECK_THROWS_AS((void)force_integral_case1(ok, 0.8, 1e-10), DomainError);  // eps > gap/2
    LimitConfig mismatched;
    mismatched.poles = {CoverPoint(0.5, kPi / 2)};
    CHECK_THROWS_AS((void)force_integral_case1(mismatched, 0.1, 1e-10), ValidationError);
}
