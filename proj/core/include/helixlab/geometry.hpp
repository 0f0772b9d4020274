#pragma once

#include <complex>
#include <cmath>

#include "helixlab/errors.hpp"

namespace helixlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Conformal factor of the horizontal metric lambda(z)^2 |dz|^2.
/// Sphere of radius R: lambda = 2 R^2 / (R^2 + |z|^2). Flat plane: lambda = 1.
struct ConformalMetric {
    enum class Kind { Flat, Sphere };

    Kind kind = Kind::Sphere;
    double R = 1.0;

    static ConformalMetric flat() { return {Kind::Flat, 1.0}; }
    static ConformalMetric sphere(double radius = 1.0) {
        if (!(radius > 0.0))
            throw ValidationError("sphere radius must be positive");
        return {Kind::Sphere, radius};
    }

    double lambda(Complex z) const {
        if (kind == Kind::Flat) return 1.0;
        const double r2 = std::norm(z);
        return 2.0 * R * R / (R * R + r2);
    }

    /// (lambda_x / lambda, lambda_y / lambda) packed as a complex number.
    Complex dlog_lambda(Complex z) const {
        if (kind == Kind::Flat) return {0.0, 0.0};
        const double d = R * R + std::norm(z);
        return {-2.0 * z.real() / d, -2.0 * z.imag() / d};
    }

    /// Norm of a horizontal tangent vector v attached at z.
    double norm(Complex z, Complex v) const { return lambda(z) * std::abs(v); }
};

/// Horizontal Killing fields of S^2 x R in the conformal chart, plus the
/// vertical translation. Each horizontal field is the rotation generator
/// fixing one great circle: chiX the real axis, chiY the imaginary axis,
/// chiE the equator |z| = R.
enum class KillingFieldId { ChiX, ChiY, ChiE, Vertical };

inline const char* killing_field_name(KillingFieldId id) {
    switch (id) {
        case KillingFieldId::ChiX: return "chiX";
        case KillingFieldId::ChiY: return "chiY";
        case KillingFieldId::ChiE: return "chiE";
        case KillingFieldId::Vertical: return "vertical";
    }
    return "?";
}

/// Value of a horizontal Killing field at z. Requires a sphere metric;
/// the vertical field has no horizontal representation.
inline Complex killing_field(KillingFieldId id, Complex z, const ConformalMetric& metric) {
    if (metric.kind != ConformalMetric::Kind::Sphere)
        throw ValidationError("horizontal Killing fields require the sphere metric");
    const double R = metric.R;
    const Complex z2 = z * z;
    switch (id) {
        case KillingFieldId::ChiX: return 0.5 * (1.0 + z2 / (R * R));
        case KillingFieldId::ChiY: return Complex(0, 0.5) * (1.0 - z2 / (R * R));
        case KillingFieldId::ChiE: return Complex(0, 1) * z / R;
        case KillingFieldId::Vertical:
            throw ValidationError("the vertical field is not a horizontal vector field");
    }
    throw ValidationError("unknown Killing field");
}

/// Point of the universal cover of the punctured plane: modulus > 0 together
/// with an unrestricted argument. The winding is part of the data; nothing
/// ever re-derives it from the planar position.
struct CoverPoint {
    double modulus = 1.0;
    double argument = 0.0;

    CoverPoint() = default;
    CoverPoint(double m, double a) : modulus(m), argument(a) {
        if (!(m > 0.0)) throw ValidationError("cover point modulus must be positive");
    }

    Complex z() const { return std::polar(modulus, argument); }
    double sigma() const { return std::log(modulus); }

    CoverPoint conj() const { return CoverPoint(modulus, -argument); }
    /// Image under z -> 1/conj(z) (inversion across the unit circle).
    CoverPoint invert() const { return CoverPoint(1.0 / modulus, argument); }
};

/// log z on the cover: the carried argument is the imaginary part.
inline Complex log_cover(const CoverPoint& p) { return {std::log(p.modulus), p.argument}; }

/// Helicoid of pitch t as a graph over the cover: f = (t / 2 pi) arg z.
/// The pitch is twice the vertical gap between consecutive sheets; the
/// standard helicoid has pitch 2 pi.
inline double helicoid_value(double pitch, double argument) {
    return pitch / kTwoPi * argument;
}

/// Half catenoid as a graph over |z| > 1: f = arccosh |z|.
inline double catenoid_value(double modulus) {
    if (!(modulus >= 1.0))
        throw DomainError("catenoid graph needs modulus >= 1");
    return std::acosh(modulus);
}

/// Topology of the Y-surface fixed-point census: a Y-surface whose axis
/// quotient meets the surface in k points has e ends (1 if k is odd, else 2),
/// c components and genus g with 2 - k = 2c - 2g - e.
struct CensusResult {
    int axis_points = 0;
    int components = 0;
    int genus = 0;
    int ends = 0;
};

inline CensusResult y_surface_census(int k) {
    if (k < 0) throw ValidationError("census count must be nonnegative");
    CensusResult r;
    r.axis_points = k;
    r.ends = (k % 2 == 1) ? 1 : 2;
    if (k == 0) {
        r.components = 2;
        r.genus = 0;
    } else {
        r.components = 1;
        r.genus = (k - r.ends) / 2;
    }
    return r;
}

} // namespace helixlab
