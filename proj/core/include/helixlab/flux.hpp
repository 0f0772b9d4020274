#pragma once

#include <optional>
#include <string>
#include <vector>

#include "helixlab/grid.hpp"

namespace helixlab {

/// Closed polyline on the universal cover. Points appear once (the segment
/// back to the first point is implied) and each carries its own argument;
/// winding is never re-derived from planar positions.
struct CurvePoint {
    Complex z;
    double argument = 0.0;
};

struct Curve {
    std::vector<CurvePoint> points;
    bool closed = true;
};

/// Circle of radius rho around center, n points, counterclockwise when
/// ccw. Arguments are lifted continuously from the first point, whose
/// argument is the principal value plus 2 pi * branch.
Curve make_circle(Complex center, double rho, int n, bool ccw = true, int branch = 0);

/// Reverses orientation (exact negation of every flux value).
Curve reversed(const Curve& c);

struct FluxReport {
    double value = 0;
    KillingFieldId field = KillingFieldId::Vertical;
    std::string method;
    double curve_length = 0;
    double max_gradient = 0; // max Euclidean |grad f| met on the curve
    int quadrature_points = 0;
};

/// Flux of the vertical field through the graph curve over `curve`:
/// the line integral of (-f_y dx + f_x dy) / W.
FluxReport vertical_flux(const DiscreteGraph& graph, const ConformalMetric& metric,
                         const Curve& curve);

/// Flux of a horizontal Killing field, exact conormal pairing
///   lambda^2 Re( chi * (dy + i dx + lambda^-2 (f_y + i f_x)(f_x dx + f_y dy)) ) / W.
FluxReport horizontal_flux_exact(const DiscreteGraph& graph, const ConformalMetric& metric,
                                 const Curve& curve, KillingFieldId field);

/// Leading complex approximation -Im oint 2 f_z^2 chi(z) dz, valid to
/// O(|grad f|^4).
FluxReport horizontal_flux_complex(const DiscreteGraph& graph, const ConformalMetric& metric,
                                   const Curve& curve, KillingFieldId field);

struct HomologyCheck {
    FluxReport a, b;
    double difference = 0;
};

/// |flux(A) - flux(B)| for two closed curves, exact method per field.
HomologyCheck flux_homology_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                  const Curve& a, const Curve& b, KillingFieldId field);

/// Circle-quadrature refinement: doubles the point count from n0 until two
/// successive flux values agree to tol (cap 2^16 points).
struct CircleSpec {
    Complex center;
    double radius = 1;
    bool ccw = true;
    int branch = 0;
};

FluxReport flux_on_circle(const DiscreteGraph& graph, const ConformalMetric& metric,
                          const CircleSpec& circle, KillingFieldId field,
                          const std::string& method, double tol = 1e-12, int n0 = 64);

} // namespace helixlab
