#include "helixlab/flux.hpp"

#include <algorithm>
#include <cmath>

namespace helixlab {

namespace {

struct SampledPoint {
    Complex z;
    double fx, fy; // Cartesian gradient
    double W;
    double lambda;
};

SampledPoint sample(const DiscreteGraph& graph, const ConformalMetric& metric,
                    const CurvePoint& p) {
    SampledPoint s;
    s.z = p.z;
    const CoverPoint cp{std::abs(p.z), p.argument};
    const Complex grad = graph.gradient_xy(cp);
    s.fx = grad.real();
    s.fy = grad.imag();
    s.lambda = metric.lambda(p.z);
    const double il2 = 1.0 / (s.lambda * s.lambda);
    s.W = std::sqrt(1.0 + il2 * (s.fx * s.fx + s.fy * s.fy));
    return s;
}

void validate_curve(const Curve& c) {
    if (!c.closed) throw ValidationError("flux integrals require closed curves");
    if (c.points.size() < 3) throw ValidationError("curve needs at least 3 points");
    for (const CurvePoint& p : c.points) {
        const double principal = std::arg(p.z);
        double d = std::fmod(p.argument - principal, kTwoPi);
        if (d > kPi) d -= kTwoPi;
        if (d < -kPi) d += kTwoPi;
        if (std::abs(d) > 1e-6)
            throw ValidationError("curve point argument is inconsistent with its position");
    }
}

// Balanced pairwise reduction; mirrored inputs of power-of-two length sum to
// the bitwise-identical value, which makes orientation reversal an exact
// negation for the usual point counts.
double pairwise_sum(const double* v, std::size_t n) {
    if (n == 1) return v[0];
    if (n == 2) return v[0] + v[1];
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

// Trapezoid sum of a 1-form A dx + B dy over the closed polyline.
template <class FormAt>
FluxReport integrate_form(const DiscreteGraph& graph, const ConformalMetric& metric,
                          const Curve& curve, KillingFieldId field, const char* method,
                          FormAt&& form_at) {
    validate_curve(curve);
    const std::size_t n = curve.points.size();
    std::vector<SampledPoint> pts(n);
    double max_grad = 0;
    for (std::size_t k = 0; k < n; ++k) {
        pts[k] = sample(graph, metric, curve.points[k]);
        max_grad = std::max(max_grad, std::hypot(pts[k].fx, pts[k].fy));
    }
    std::vector<double> terms(n);
    double length = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const SampledPoint& a = pts[k];
        const SampledPoint& b = pts[(k + 1) % n];
        const double dx = b.z.real() - a.z.real();
        const double dy = b.z.imag() - a.z.imag();
        const auto [Aa, Ba] = form_at(a);
        const auto [Ab, Bb] = form_at(b);
        terms[k] = 0.5 * (Aa + Ab) * dx + 0.5 * (Ba + Bb) * dy;
        length += std::hypot(dx, dy);
    }
    FluxReport r;
    r.value = pairwise_sum(terms.data(), n);
    r.field = field;
    r.method = method;
    r.curve_length = length;
    r.max_gradient = max_grad;
    r.quadrature_points = static_cast<int>(n);
    return r;
}

} // namespace

Curve make_circle(Complex center, double rho, int n, bool ccw, int branch) {
    if (!(rho > 0)) throw ValidationError("circle radius must be positive");
    if (n < 3) throw ValidationError("circle needs at least 3 points");
    Curve c;
    c.points.resize(n);
    double prev_arg = 0;
    for (int k = 0; k < n; ++k) {
        const double t = kTwoPi * k / n * (ccw ? 1.0 : -1.0);
        const Complex z = center + std::polar(rho, t);
        double a = std::arg(z);
        if (k == 0) {
            a += kTwoPi * branch;
        } else {
            // continuous lift along the circle
            while (a - prev_arg > kPi) a -= kTwoPi;
            while (a - prev_arg < -kPi) a += kTwoPi;
        }
        c.points[k] = {z, a};
        prev_arg = a;
    }
    return c;
}

Curve reversed(const Curve& c) {
    Curve r = c;
    // keep the starting point so the reversed segment list is the exact
    // mirror of the forward one
    std::reverse(r.points.begin() + 1, r.points.end());
    return r;
}

FluxReport vertical_flux(const DiscreteGraph& graph, const ConformalMetric& metric,
                         const Curve& curve) {
    return integrate_form(graph, metric, curve, KillingFieldId::Vertical, "exact_conormal",
                          [](const SampledPoint& p) {
                              return std::pair<double, double>{-p.fy / p.W, p.fx / p.W};
                          });
}

FluxReport horizontal_flux_exact(const DiscreteGraph& graph, const ConformalMetric& metric,
                                 const Curve& curve, KillingFieldId field) {
    if (field == KillingFieldId::Vertical)
        throw ValidationError("use vertical_flux for the vertical field");
    return integrate_form(
        graph, metric, curve, field, "exact_conormal", [&](const SampledPoint& p) {
            const Complex chi = killing_field(field, p.z, metric);
            const double l2 = p.lambda * p.lambda;
            const double il2 = 1.0 / l2;
            // lambda^2/W * Re(chi * (dy + i dx + lambda^-2 (f_y + i f_x) (f_x dx + f_y dy)))
            const Complex gconj(p.fy, p.fx);
            const Complex cA = chi * (Complex(0, 1) + il2 * gconj * p.fx); // dx coefficient
            const Complex cB = chi * (Complex(1, 0) + il2 * gconj * p.fy); // dy coefficient
            return std::pair<double, double>{l2 * cA.real() / p.W, l2 * cB.real() / p.W};
        });
}

FluxReport horizontal_flux_complex(const DiscreteGraph& graph, const ConformalMetric& metric,
                                   const Curve& curve, KillingFieldId field) {
    if (field == KillingFieldId::Vertical)
        throw ValidationError("use vertical_flux for the vertical field");
    // -Im oint 2 f_z^2 chi dz as a 1-form: with G = 2 f_z^2 chi,
    // -Im(G dz) = -Im(G) dx - Re(G) dy.
    FluxReport r = integrate_form(
        graph, metric, curve, field, "complex_leading", [&](const SampledPoint& p) {
            const Complex chi = killing_field(field, p.z, metric);
            const Complex fz(0.5 * p.fx, -0.5 * p.fy);
            const Complex G = 2.0 * fz * fz * chi;
            return std::pair<double, double>{-G.imag(), -G.real()};
        });
    return r;
}

HomologyCheck flux_homology_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                  const Curve& a, const Curve& b, KillingFieldId field) {
    HomologyCheck h;
    if (field == KillingFieldId::Vertical) {
        h.a = vertical_flux(graph, metric, a);
        h.b = vertical_flux(graph, metric, b);
    } else {
        h.a = horizontal_flux_exact(graph, metric, a, field);
        h.b = horizontal_flux_exact(graph, metric, b, field);
    }
    h.difference = std::abs(h.a.value - h.b.value);
    return h;
}

FluxReport flux_on_circle(const DiscreteGraph& graph, const ConformalMetric& metric,
                          const CircleSpec& circle, KillingFieldId field,
                          const std::string& method, double tol, int n0) {
    auto eval = [&](int n) {
        const Curve c = make_circle(circle.center, circle.radius, n, circle.ccw, circle.branch);
        if (method == "complex_leading") return horizontal_flux_complex(graph, metric, c, field);
        if (method != "exact_conormal") throw ValidationError("unknown flux method: " + method);
        if (field == KillingFieldId::Vertical) return vertical_flux(graph, metric, c);
        return horizontal_flux_exact(graph, metric, c, field);
    };
    // The polyline quadrature error on a smooth closed curve shrinks like
    // 1/n^2 with only even powers, so one Richardson step per doubling gives
    // an O(1/n^4) ladder; successive extrapolated values are compared.
    FluxReport coarse = eval(n0);
    FluxReport fine = eval(2 * n0);
    double extrap = (4.0 * fine.value - coarse.value) / 3.0;
    double diff = std::abs(extrap - coarse.value);
    for (int n = 4 * n0; n <= (1 << 16); n *= 2) {
        coarse = fine;
        fine = eval(n);
        const double next = (4.0 * fine.value - coarse.value) / 3.0;
        diff = std::abs(next - extrap);
        extrap = next;
        if (diff <= tol * std::max(1.0, std::abs(extrap))) {
            fine.value = extrap;
            return fine;
        }
    }
    throw QuadratureError("flux quadrature did not stabilize at 2^16 points", diff);
}

} // namespace helixlab
