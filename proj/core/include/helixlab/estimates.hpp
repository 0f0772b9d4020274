#pragma once

#include <optional>
#include <vector>

#include "helixlab/flux.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/grid.hpp"

namespace helixlab {

/// Outcome of the annulus height estimate.  The graph must live on a full
/// periodic annulus, vanish on the outer circle, sit at constant negative
/// levels on the inner circle and on every hole rim, be non-increasing toward
/// those curves, and satisfy the unit gradient bound.  The estimate then
/// controls the inner-level drop by the outer flux, and the Dirichlet energy
/// by the drop-flux product.
struct HeightReport {
    double r1 = 0, r2 = 0;      ///< annulus radii exp(sigma0), exp(sigma1)
    double drop = 0;            ///< h: depth of the inner boundary level
    double flux = 0;            ///< outer-circle flux of grad f / W
    double bound = 0;           ///< (sqrt(2)/pi) * flux * log(r2/r1)
    bool bound_holds = false;   ///< drop <= bound
    double energy = 0;          ///< Dirichlet energy of f over the domain
    double energy_bound = 0;    ///< 2*sqrt(2) * drop * flux
    bool energy_holds = false;  ///< energy <= energy_bound
    double sup_gradient = 0;    ///< sup of the metric gradient norm
};

/// Verifies the height-estimate hypotheses on the graph and evaluates both
/// sides of the estimate.  Throws HypothesisError naming the first hypothesis
/// that fails; level constancy is enforced within level_tol and the sign
/// conditions within grad_tol.
HeightReport height_bound_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                double level_tol = 1e-9, double grad_tol = 1e-8);

/// Circle sweep extracting a curve of small total gradient.  F(r) integrates
/// the Euclidean gradient norm over the circle of radius r about the center
/// (the annulus axis when center is empty); the minimum over a logarithmic
/// radius sweep is compared against the energy-based pigeonhole bound
/// sqrt(8) * flux * sqrt(outer_log_ratio) / sqrt(log(r_hi/r_lo)).
struct GoodCircleReport {
    double best_radius = 0;
    double best_integral = 0;
    double bound = 0;
    bool holds = false;
    std::vector<std::pair<double, double>> profile;  ///< (radius, F(radius))
};

GoodCircleReport good_circle(const DiscreteGraph& graph,
                             const std::optional<CoverPoint>& center, double r_lo, double r_hi,
                             double flux, double outer_log_ratio, int n_radii = 256,
                             int n_samples = 512);

/// Outcome of the slab-sector area estimate: the area of the graph piece with
/// a <= f <= b and alpha <= theta <= beta is controlled by boundary fluxes of
/// the vertical field and of the rotation field i*z.  Requires a single-valued
/// angle (non-periodic theta).  The right-hand side carries an explicit
/// discretization slack so the reported verdict is meaningful at finite
/// resolution.
struct AreaBoundReport {
    double area = 0;             ///< area of the selected graph piece
    double vertical_term = 0;    ///< boundary integral of |<v_z, nu>| over {f > a}
    double rotational_term = 0;  ///< boundary integral of |<i z, nu>| over {theta > alpha}
    double slack = 0;            ///< discretization allowance added to the bound
    double rhs = 0;              ///< (b-a)*vertical + (beta-alpha)*rotational + slack
    bool holds = false;
};

AreaBoundReport area_bound_check(const DiscreteGraph& graph, const ConformalMetric& metric,
                                 double a, double b, double alpha, double beta);

/// Interior regularity probe for small solutions: with sup|f| <= t, reports
/// the observed constants sup d|grad f| / t and sup d^4 |lap f| / t^3 over
/// interior nodes at boundary distance d >= t, where d is a planar
/// lower-bound distance to the domain boundary.
struct SchauderReport {
    double t = 0;
    double sup_value = 0;       ///< sup |f| over the grid
    double grad_constant = 0;   ///< sup of d * |grad f| / t
    double lap_constant = 0;    ///< sup of d^4 * |lap f| / t^3
    int sampled_nodes = 0;      ///< interior nodes with d >= t
};

SchauderReport schauder_probe(const DiscreteGraph& graph, double t);

}  // namespace helixlab
