#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helixlab/barriers.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/geometry.hpp"

using namespace helixlab;

namespace {

/// Five-point Laplacian of a cover function in Cartesian coordinates near z,
/// lifting the perturbed points continuously around z's argument.
template <typename F>
double fd_laplacian(const F& f, const CoverPoint& z, double h) {
    auto lift = [&](Complex w) {
        double a = std::arg(w);
        while (a < z.argument - kPi) a += kTwoPi;
        while (a > z.argument + kPi) a -= kTwoPi;
        return CoverPoint(std::abs(w), a);
    };
    const Complex c = z.z();
    return (f(lift(c + Complex(h, 0))) + f(lift(c - Complex(h, 0))) +
            f(lift(c + Complex(0, h))) + f(lift(c - Complex(0, h))) - 4.0 * f(lift(c))) /
           (h * h);
}

} // namespace

// ============================================================================
// Green's-type function of the cover
// ============================================================================

TEST_CASE("green_h vanishes on the real ray and is positive above it") {
    const CoverPoint p(2.0, kPi / 2);
    CHECK(green_h(p, CoverPoint(1.7, 0.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(green_h(p, CoverPoint(0.4, 0.0)) == doctest::Approx(0.0).epsilon(1e-14));
    for (const double m : {0.3, 1.0, 2.5})
        for (const double a : {0.2, 1.5, 4.0, 9.0})
            CHECK(green_h(p, CoverPoint(m, a)) > 0);
}

TEST_CASE("green_h is odd under conjugation of the evaluation point") {
    const CoverPoint p(1.5, 2.0);
    const CoverPoint z(0.8, 1.1);
    CHECK(green_h(p, z.conj()) == doctest::Approx(-green_h(p, z)).epsilon(1e-12));
}

TEST_CASE("green_h blows up logarithmically at its pole") {
    const CoverPoint p(2.0, kPi / 2);
    const double near = green_h(p, CoverPoint(2.0 + 1e-6, kPi / 2));
    const double far = green_h(p, CoverPoint(3.0, kPi / 2));
    CHECK(near > 10.0);
    CHECK(near > far);
}

TEST_CASE("green_h is harmonic away from its pole at second order") {
    const CoverPoint p(2.0, kPi / 2);
    const CoverPoint z(1.3, 1.0);
    auto f = [&](const CoverPoint& w) { return green_h(p, w); };
    double prev = 0;
    double h = 1e-2;
    for (int level = 0; level < 3; ++level) {
        const double lap = std::abs(fd_laplacian(f, z, h));
        if (level > 0) CHECK(prev / lap == doctest::Approx(4.0).epsilon(0.05));
        prev = lap;
        h /= 2;
    }
}

TEST_CASE("green_h_dz matches finite differences of green_h") {
    const CoverPoint p(2.0, kPi / 2);
    const CoverPoint z(1.3, 1.0);
    auto f = [&](const CoverPoint& w) { return green_h(p, w); };
    const double h = 1e-6;
    auto lift = [&](Complex w) {
        double a = std::arg(w);
        while (a < z.argument - kPi) a += kTwoPi;
        while (a > z.argument + kPi) a -= kTwoPi;
        return CoverPoint(std::abs(w), a);
    };
    const Complex c = z.z();
    const double hx = (f(lift(c + Complex(h, 0))) - f(lift(c - Complex(h, 0)))) / (2 * h);
    const double hy = (f(lift(c + Complex(0, h))) - f(lift(c - Complex(0, h)))) / (2 * h);
    const Complex dz = green_h_dz(p, z);
    // h real: h_x = 2 Re h_z, h_y = -2 Im h_z
    CHECK(2 * dz.real() == doctest::Approx(hx).epsilon(1e-7));
    CHECK(-2 * dz.imag() == doctest::Approx(hy).epsilon(1e-7));
}

// ============================================================================
// Sliding barrier
// ============================================================================

TEST_CASE("the two barrier forms agree") {
    for (const double t : {0.5, 0.2, 0.05})
        for (const double m : {0.3, 0.9, 2.0})
            for (const double a : {0.1, 1.0, 5.0}) {
                const CoverPoint z(m, a);
                CHECK(barrier_H(t, z) == doctest::Approx(barrier_H_polar(t, z)).epsilon(1e-12));
            }
}

TEST_CASE("sampled barrier properties hold across slide parameters") {
    for (const double t : {0.5, 0.25, 0.1}) {
        const BarrierPropertyReport r = check_barrier_properties(t);
        CHECK(r.positive);
        CHECK(r.inversion_symmetric);
        CHECK(r.circle_floor);
        CHECK(r.far_angle_floor);
        CHECK(r.log_bound);
        CHECK(r.all());
    }
}

TEST_CASE("the barrier converges to the lifted angle as t drops") {
    const CoverPoint z(1.3, 1.0);
    const std::vector<double> ts = {1e-2, 1e-4, 1e-6, 1e-8};
    const std::vector<double> errs = barrier_limit_errors(z, ts);
    REQUIRE(errs.size() == ts.size());
    for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
    // the error decays like 1/|log t|
    CHECK(errs.back() * std::abs(std::log(ts.back())) ==
          doctest::Approx(errs[1] * std::abs(std::log(ts[1]))).epsilon(0.2));
}

// ============================================================================
// Comparison barrier with poles
// ============================================================================

TEST_CASE("angular cutoff interpolates between its plateaus") {
    CHECK(angular_cutoff(0.0) == doctest::Approx(1.0));
    CHECK(angular_cutoff(kPi) == doctest::Approx(1.0));
    CHECK(angular_cutoff(kTwoPi) == doctest::Approx(0.0));
    CHECK(angular_cutoff(10.0) == doctest::Approx(0.0));
    double prev = 1.0;
    for (double x = kPi; x <= kTwoPi; x += kPi / 16) {
        const double v = angular_cutoff(x);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    // C^1 at the seams: symmetric differences stay small
    const double h = 1e-5;
    CHECK(std::abs(angular_cutoff(kPi + h) - angular_cutoff(kPi - h)) / (2 * h) <
          1e-4);
    CHECK(std::abs(angular_cutoff(kTwoPi + h) - angular_cutoff(kTwoPi - h)) / (2 * h) <
          1e-4);
}

TEST_CASE("barrier delta switches between pole distance and modulus") {
    const std::vector<CoverPoint> poles = {CoverPoint(0.5, kPi / 2)};
    // in the angular window the nearest pole wins
    const CoverPoint near_pole(0.55, kPi / 2);
    CHECK(barrier_delta(poles, near_pole) < 0.1);
    // beyond the window only the modulus counts
    const CoverPoint far_angle(0.55, 4.0);
    CHECK(barrier_delta(poles, far_angle) == doctest::Approx(0.55));
}

TEST_CASE("calibrated barrier dominates the quartic threshold") {
    const std::vector<CoverPoint> poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    const double C2 = calibrate_C2(poles);
    CHECK(C2 >= 1.0);
    CHECK(barrier_g_margin(poles, C2) >= 0.0);
}

TEST_CASE("the barrier inequality fails when the strength is gutted") {
    const std::vector<CoverPoint> poles = {CoverPoint(0.5, kPi / 2)};
    CHECK(barrier_g_margin(poles, 1e-6) < 0.0);
}

// ============================================================================
// Limit configurations
// ============================================================================

TEST_CASE("limit potential assembles its parts") {
    LimitConfig lc;
    lc.c0 = 0.7;
    lc.poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    lc.coefficients = {1.0, 0.5};
    const CoverPoint z(1.3, 1.0);
    const double want = 0.7 * z.argument + 1.0 * green_h(lc.poles[0], z) +
                        0.5 * green_h(lc.poles[1], z);
    CHECK(limit_u_tilde(lc, z) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("limit potential derivative matches finite differences") {
    LimitConfig lc;
    lc.c0 = 0.4;
    lc.poles = {CoverPoint(0.5, kPi / 2), CoverPoint(2.0, kPi / 2)};
    lc.coefficients = {0.8, 1.1};
    const CoverPoint z(1.3, 0.9);
    auto lift = [&](Complex w) {
        double a = std::arg(w);
        while (a < z.argument - kPi) a += kTwoPi;
        while (a > z.argument + kPi) a -= kTwoPi;
        return CoverPoint(std::abs(w), a);
    };
    auto f = [&](const CoverPoint& w) { return limit_u_tilde(lc, w); };
    const double h = 1e-6;
    const Complex c = z.z();
    const double ux = (f(lift(c + Complex(h, 0))) - f(lift(c - Complex(h, 0)))) / (2 * h);
    const double uy = (f(lift(c + Complex(0, h))) - f(lift(c - Complex(0, h)))) / (2 * h);
    const Complex dz = limit_u_tilde_dz(lc, z);
    CHECK(2 * dz.real() == doctest::Approx(ux).epsilon(1e-6));
    CHECK(-2 * dz.imag() == doctest::Approx(uy).epsilon(1e-6));
}

TEST_CASE("symmetric pole sets are inversion-closed and sorted") {
    const std::vector<CoverPoint> poles = {CoverPoint(0.5, kPi / 2), CoverPoint(3.0, kPi / 2)};
    const std::vector<CoverPoint> sym = make_symmetric_pole_set(poles);
    REQUIRE(sym.size() == 4);
    for (std::size_t i = 1; i < sym.size(); ++i) CHECK(sym[i].modulus > sym[i - 1].modulus);
    CHECK(sym[0].modulus == doctest::Approx(1.0 / 3.0));
    CHECK(sym[1].modulus == doctest::Approx(0.5));
    CHECK(sym[2].modulus == doctest::Approx(2.0));
    CHECK(sym[3].modulus == doctest::Approx(3.0));
}
