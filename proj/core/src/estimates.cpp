#include "helixlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "helixlab/errors.hpp"

namespace helixlab {

namespace {

/// True when the dual cell with lower-left node (i, j) lies outside every
/// hole box (matching the interpolation cache's validity rule).
bool cell_valid(const DiscreteGraph& graph, int i, int j) {
    for (const SnappedHole& s : graph.snapped_holes())
        if (i >= s.ilo && i + 1 <= s.ihi && j >= s.jlo && j + 1 <= s.jhi) return false;
    return true;
}

struct CellSample {
    double sigma, theta;  // cell center
    double fs, ft;        // grid-coordinate gradient
    double fmean;         // average of the corner values
};

template <typename Fn>
void for_each_cell(const DiscreteGraph& graph, Fn&& fn) {
    const GraphDomain& dom = graph.domain();
    const int ncs = graph.spec().n_sigma;
    const int nct = graph.spec().n_theta;
    const double hs = graph.h_sigma(), ht = graph.h_theta();
    for (int i = 0; i < ncs; ++i)
        for (int j = 0; j < nct; ++j) {
            if (!cell_valid(graph, i, j)) continue;
            const int jn = dom.theta_periodic ? (j + 1) % graph.cols() : j + 1;
            const double v00 = graph.value(i, j), v01 = graph.value(i, jn);
            const double v10 = graph.value(i + 1, j), v11 = graph.value(i + 1, jn);
            CellSample c;
            c.sigma = dom.sigma0 + (i + 0.5) * hs;
            c.theta = dom.theta0 + (j + 0.5) * ht;
            c.fs = (v10 + v11 - v00 - v01) / (2 * hs);
            c.ft = (v01 + v11 - v00 - v10) / (2 * ht);
            c.fmean = 0.25 * (v00 + v01 + v10 + v11);
            fn(c);
        }
}

}  // namespace

HeightReport height_bound_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                double level_tol, double grad_tol) {
    const GraphDomain& dom = graph.domain();
    if (!dom.theta_periodic || std::abs((dom.theta1 - dom.theta0) - kTwoPi) > 1e-9)
        throw ValidationError("the height estimate needs a full periodic annulus");

    const int rows = graph.rows(), cols = graph.cols();
    const double hs = graph.h_sigma(), ht = graph.h_theta();

    HeightReport rep;
    rep.r1 = std::exp(dom.sigma0);
    rep.r2 = std::exp(dom.sigma1);

    for (int j = 0; j < cols; ++j)
        if (std::abs(graph.value(rows - 1, j)) > level_tol)
            throw HypothesisError("outer boundary level",
                                  "f does not vanish on the outer circle (found " +
                                      std::to_string(graph.value(rows - 1, j)) + ")");

    const double inner = graph.value(0, 0);
    for (int j = 0; j < cols; ++j)
        if (std::abs(graph.value(0, j) - inner) > level_tol)
            throw HypothesisError("inner boundary level", "f is not constant on the inner circle");
    if (!(inner < 0))
        throw HypothesisError("inner boundary level",
                              "the inner level must sit strictly below the outer one");
    rep.drop = -inner;

    const auto& holes = graph.snapped_holes();
    std::vector<double> hole_level(holes.size(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            if (graph.node_class(i, j) != NodeClass::HoleRim) continue;
            const int k = graph.rim_hole(i, j);
            const double v = graph.value(i, j);
            if (std::isnan(hole_level[k]))
                hole_level[k] = v;
            else if (std::abs(v - hole_level[k]) > level_tol)
                throw HypothesisError("hole boundary level", "f is not constant on a hole rim");
        }
    for (double lv : hole_level) {
        if (std::isnan(lv)) continue;
        if (lv > level_tol || lv < -2 * rep.drop - level_tol)
            throw HypothesisError("hole boundary level",
                                  "a hole level lies outside [-2h, 0] (found " +
                                      std::to_string(lv) + ")");
    }

    // f must not increase toward the inner circle or into any hole rim
    for (int j = 0; j < cols; ++j)
        if ((graph.value(1, j) - graph.value(0, j)) / hs < -grad_tol)
            throw HypothesisError("inward monotonicity", "f decreases away from the inner circle");
    for (const SnappedHole& s : holes) {
        for (int j = s.jlo; j <= s.jhi; ++j) {
            if ((graph.value(s.ilo, j) - graph.value(s.ilo - 1, j)) / hs > grad_tol ||
                (graph.value(s.ihi, j) - graph.value(s.ihi + 1, j)) / hs > grad_tol)
                throw HypothesisError("inward monotonicity", "f increases into a hole rim");
        }
        for (int i = s.ilo; i <= s.ihi; ++i) {
            if ((graph.value(i, s.jlo) - graph.value(i, s.jlo - 1)) / ht > grad_tol ||
                (graph.value(i, s.jhi) - graph.value(i, s.jhi + 1)) / ht > grad_tol)
                throw HypothesisError("inward monotonicity", "f increases into a hole rim");
        }
    }

    // unit gradient bound (metric norm, sampled at cell centers) and the
    // Dirichlet energy, which is conformally invariant in the grid chart
    double sup_grad = 0, energy = 0;
    for_each_cell(graph, [&](const CellSample& c) {
        const Complex z = std::polar(std::exp(c.sigma), c.theta);
        const double g =
            std::exp(-c.sigma) * std::hypot(c.fs, c.ft) / metric.lambda(z);
        sup_grad = std::max(sup_grad, g);
        energy += c.fs * c.fs + c.ft * c.ft;
    });
    energy *= hs * ht;
    rep.sup_gradient = sup_grad;
    rep.energy = energy;
    if (sup_grad > 1 + grad_tol)
        throw HypothesisError("gradient bound", "the metric gradient norm exceeds 1 (sup " +
                                                    std::to_string(sup_grad) + ")");

    // outer flux of grad f / W through the circle |z| = r2
    double phi = 0;
    const int n = rows - 1;
    for (int j = 0; j < cols; ++j) {
        const double fsig = (3 * graph.value(n, j) - 4 * graph.value(n - 1, j) +
                             graph.value(n - 2, j)) /
                            (2 * hs);
        const double fth =
            (graph.value_wrapped(n, j + 1) - graph.value_wrapped(n, j - 1)) / (2 * ht);
        const Complex z = std::polar(rep.r2, graph.theta(j));
        const double lam = metric.lambda(z);
        const double grad2 = std::exp(-2 * dom.sigma1) * (fsig * fsig + fth * fth);
        const double W = std::sqrt(1 + grad2 / (lam * lam));
        phi += fsig / W * ht;
    }
    if (!(phi > 0))
        throw HypothesisError("outward flux", "the outer boundary flux must be positive");
    rep.flux = phi;

    rep.bound = std::sqrt(2.0) / kPi * phi * (dom.sigma1 - dom.sigma0);
    rep.bound_holds = rep.drop <= rep.bound;
    rep.energy_bound = 2 * std::sqrt(2.0) * rep.drop * phi;
    rep.energy_holds = rep.energy <= rep.energy_bound;
    return rep;
}

GoodCircleReport good_circle(const DiscreteGraph& graph,
                             const std::optional<CoverPoint>& center, double r_lo, double r_hi,
                             double flux, double outer_log_ratio, int n_radii, int n_samples) {
    if (!(r_lo > 0) || !(r_hi > r_lo))
        throw ValidationError("the radius sweep needs 0 < r_lo < r_hi");
    if (!(outer_log_ratio > 0)) throw ValidationError("outer_log_ratio must be positive");
    if (n_radii < 2 || n_samples < 8) throw ValidationError("sweep resolution is too small");
    const GraphDomain& dom = graph.domain();
    if (center) {
        if (!(r_hi < center->modulus))
            throw ValidationError("the sweep circles must stay clear of the axis");
    } else if (!dom.theta_periodic || std::abs((dom.theta1 - dom.theta0) - kTwoPi) > 1e-9) {
        throw ValidationError("axis-centered sweeps need a full periodic annulus");
    }

    GoodCircleReport rep;
    rep.bound = std::sqrt(8.0) * flux * std::sqrt(outer_log_ratio) /
                std::sqrt(std::log(r_hi / r_lo));
    rep.best_integral = std::numeric_limits<double>::infinity();
    rep.profile.reserve(n_radii);

    const double step = kTwoPi / n_samples;
    for (int k = 0; k < n_radii; ++k) {
        const double r = r_lo * std::exp(std::log(r_hi / r_lo) * k / (n_radii - 1));
        double acc = 0;
        for (int m = 0; m < n_samples; ++m) {
            const double t = (m + 0.5) * step;
            double sig, arg;
            if (center) {
                const Complex zc = center->z();
                const Complex z = zc + std::polar(r, t);
                sig = std::log(std::abs(z));
                arg = center->argument + std::arg(z / zc);
            } else {
                sig = std::log(r);
                arg = dom.theta0 + t;
            }
            if (!graph.contains_with_margin(sig, arg))
                throw DomainError("a sweep circle leaves the graph domain");
            const DiscreteGraph::Gradient g = graph.interpolate_gradient(sig, arg);
            acc += std::exp(-sig) * std::hypot(g.fs, g.ft);
        }
        const double integral = acc * r * step;
        rep.profile.emplace_back(r, integral);
        if (integral < rep.best_integral) {
            rep.best_integral = integral;
            rep.best_radius = r;
        }
    }
    rep.holds = rep.best_integral <= rep.bound;
    return rep;
}

namespace {

/// One side of an integration contour, axis-aligned in the grid chart.
struct ChartSegment {
    bool sigma_const;    // varying coordinate is theta when true
    double fixed;        // the constant coordinate
    double lo, hi;       // range of the varying coordinate
};

}  // namespace

AreaBoundReport area_bound_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                 double a, double b, double alpha, double beta) {
    if (!(b > a)) throw ValidationError("the height window needs a < b");
    if (!(beta > alpha)) throw ValidationError("the angular window needs alpha < beta");
    const GraphDomain& dom = graph.domain();
    if (dom.theta_periodic)
        throw ValidationError("the area estimate needs a single-valued angle");

    const double hs = graph.h_sigma(), ht = graph.h_theta();

    AreaBoundReport rep;

    // left side: area of the graph piece with a <= f <= b, alpha <= theta <= beta
    for_each_cell(graph, [&](const CellSample& c) {
        if (c.fmean < a || c.fmean > b) return;
        if (c.theta < alpha || c.theta > beta) return;
        const double r = std::exp(c.sigma);
        const double co = std::cos(c.theta), si = std::sin(c.theta);
        const double fx = (co * c.fs - si * c.ft) / r;
        const double fy = (si * c.fs + co * c.ft) / r;
        const double lam = metric.lambda(std::polar(r, c.theta));
        const double W = std::sqrt(1 + (fx * fx + fy * fy) / (lam * lam));
        rep.area += lam * lam * W * r * r * hs * ht;
    });

    // right side: boundary integrals on contours inset half a cell into the
    // domain, where gradient interpolation is available
    const double es = 0.5000001 * hs, et = 0.5000001 * ht;
    std::vector<ChartSegment> segs;
    segs.push_back({true, dom.sigma0 + es, dom.theta0 + et, dom.theta1 - et});
    segs.push_back({true, dom.sigma1 - es, dom.theta0 + et, dom.theta1 - et});
    segs.push_back({false, dom.theta0 + et, dom.sigma0 + es, dom.sigma1 - es});
    segs.push_back({false, dom.theta1 - et, dom.sigma0 + es, dom.sigma1 - es});
    for (const SnappedHole& s : graph.snapped_holes()) {
        const double slo = graph.sigma(s.ilo) - es, shi = graph.sigma(s.ihi) + es;
        const double tlo = graph.theta(s.jlo) - et, thi = graph.theta(s.jhi) + et;
        segs.push_back({true, slo, tlo, thi});
        segs.push_back({true, shi, tlo, thi});
        segs.push_back({false, tlo, slo, shi});
        segs.push_back({false, thi, slo, shi});
    }

    double perimeter = 0, sup_integrand = 0;
    for (const ChartSegment& seg : segs) {
        const double len = seg.hi - seg.lo;
        perimeter += len;
        const double hvar = seg.sigma_const ? ht : hs;
        const int n = std::max(32, static_cast<int>(std::ceil(len / hvar)) * 4);
        const double dt = len / n;
        for (int m = 0; m < n; ++m) {
            const double u = seg.lo + (m + 0.5) * dt;
            const double sig = seg.sigma_const ? seg.fixed : u;
            const double th = seg.sigma_const ? u : seg.fixed;
            const double r = std::exp(sig);
            const Complex z = std::polar(r, th);
            const DiscreteGraph::Gradient g = graph.interpolate_gradient(sig, th);
            const double fval = graph.interpolate_value(sig, th);
            const double co = std::cos(th), si = std::sin(th);
            const double fx = (co * g.fs - si * g.ft) / r;
            const double fy = (si * g.fs + co * g.ft) / r;
            const double lam = metric.lambda(z);
            const double il2 = 1.0 / (lam * lam);
            const double W = std::sqrt(1 + il2 * (fx * fx + fy * fy));
            // velocity in the plane per unit chart parameter
            const double vx = seg.sigma_const ? -z.imag() : z.real();
            const double vy = seg.sigma_const ? z.real() : z.imag();
            const double vert = std::abs(-fy * vx + fx * vy) / W;
            const Complex chi(-z.imag(), z.real());  // the rotation field i z
            const Complex gconj(fy, fx);
            const Complex cA = chi * (Complex(0, 1) + il2 * gconj * fx);
            const Complex cB = chi * (Complex(1, 0) + il2 * gconj * fy);
            const double rot =
                std::abs(lam * lam * (cA.real() * vx + cB.real() * vy)) / W;
            if (fval > a) rep.vertical_term += vert * dt;
            if (th > alpha) rep.rotational_term += rot * dt;
            sup_integrand = std::max(sup_integrand, (b - a) * vert + (beta - alpha) * rot);
        }
    }

    rep.slack = 3 * std::max(hs, ht) * sup_integrand * perimeter;
    rep.rhs = (b - a) * rep.vertical_term + (beta - alpha) * rep.rotational_term + rep.slack;
    rep.holds = rep.area <= rep.rhs;
    return rep;
}

SchauderReport schauder_probe(const DiscreteGraph& graph, double t) {
    if (!(t > 0)) throw ValidationError("the scale t must be positive");
    const GraphDomain& dom = graph.domain();

    SchauderReport rep;
    rep.t = t;
    for (int i = 0; i < graph.rows(); ++i)
        for (int j = 0; j < graph.cols(); ++j)
            if (graph.node_class(i, j) != NodeClass::Excluded)
                rep.sup_value = std::max(rep.sup_value, std::abs(graph.value(i, j)));
    if (rep.sup_value > t * (1 + 1e-12))
        throw HypothesisError("small solution", "sup |f| exceeds the scale t (sup " +
                                                    std::to_string(rep.sup_value) + ")");

    // planar lower bounds for the distance to each boundary component
    const auto ray_distance = [](double r, double gap) {
        return r * std::sin(std::min(std::abs(gap), kPi / 2));
    };
    const auto arc_distance = [](double r, double th, double R, double tlo, double thi) {
        if (th >= tlo && th <= thi) return std::abs(r - R);
        const double gap = std::min(std::abs(th - tlo), std::abs(th - thi));
        if (gap >= kPi) return r + R;
        return std::sqrt(std::max(0.0, r * r + R * R - 2 * r * R * std::cos(gap)));
    };
    const auto segment_distance = [](double r, double gap, double ra, double rb) {
        if (std::abs(gap) >= kPi) return r + ra;
        const double x = r * std::cos(gap), y = r * std::sin(gap);
        const double xc = std::min(std::max(x, ra), rb);
        return std::hypot(x - xc, y);
    };
    const double r1 = std::exp(dom.sigma0), r2 = std::exp(dom.sigma1);
    const auto boundary_distance = [&](double r, double th) {
        double d = std::min(std::abs(r - r1), std::abs(r - r2));
        if (!dom.theta_periodic) {
            d = std::min(d, ray_distance(r, th - dom.theta0));
            d = std::min(d, ray_distance(r, th - dom.theta1));
        }
        for (const SnappedHole& s : graph.snapped_holes()) {
            const double ra = std::exp(graph.sigma(s.ilo)), rb = std::exp(graph.sigma(s.ihi));
            const double tlo = graph.theta(s.jlo), thi = graph.theta(s.jhi);
            d = std::min(d, arc_distance(r, th, ra, tlo, thi));
            d = std::min(d, arc_distance(r, th, rb, tlo, thi));
            d = std::min(d, segment_distance(r, th - tlo, ra, rb));
            d = std::min(d, segment_distance(r, th - thi, ra, rb));
        }
        return d;
    };

    for (int i = 0; i < graph.rows(); ++i)
        for (int j = 0; j < graph.cols(); ++j) {
            if (graph.node_class(i, j) != NodeClass::Interior) continue;
            const double sig = graph.sigma(i);
            const double d = boundary_distance(std::exp(sig), graph.theta(j));
            if (d < t) continue;
            const DiscreteGraph::NodeDerivs nd = graph.node_derivs(i, j);
            const double grad = std::exp(-sig) * std::hypot(nd.fs, nd.ft);
            const double lap = std::exp(-2 * sig) * std::abs(nd.fss + nd.ftt);
            rep.grad_constant = std::max(rep.grad_constant, d * grad / t);
            rep.lap_constant = std::max(rep.lap_constant, d * d * d * d * lap / (t * t * t));
            ++rep.sampled_nodes;
        }
    if (rep.sampled_nodes == 0)
        throw DomainError("no interior node sits at distance t from the boundary");
    return rep;
}

}  // namespace helixlab
