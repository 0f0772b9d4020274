#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helixlab/errors.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/mse.hpp"

using namespace helixlab;

namespace {

/// Catenoid Dirichlet problem on a periodic flat annulus.
MseProblem catenoid_problem(int n_sigma, int n_theta) {
    MseProblem p;
    p.metric = ConformalMetric::flat();
    p.domain.sigma0 = std::log(1.5);
    p.domain.sigma1 = std::log(4.0);
    p.domain.theta0 = 0.0;
    p.domain.theta1 = kTwoPi;
    p.domain.theta_periodic = true;
    p.grid = GridSpec{n_sigma, n_theta};
    auto data = [](const CoverPoint& q) { return catenoid_value(q.modulus); };
    p.edges[Edge::SigmaMin] = dirichlet(data);
    p.edges[Edge::SigmaMax] = dirichlet(data);
    return p;
}

/// Helicoid Dirichlet problem on a non-periodic sector of the sphere chart.
MseProblem helicoid_problem(int n_sigma, int n_theta, double pitch) {
    MseProblem p;
    p.metric = ConformalMetric::sphere(1.0);
    p.domain.sigma0 = 0.0;
    p.domain.sigma1 = std::log(4.0);
    p.domain.theta0 = 0.0;
    p.domain.theta1 = 3 * kPi;
    p.grid = GridSpec{n_sigma, n_theta};
    p.pitch = pitch;
    auto data = [pitch](const CoverPoint& q) { return helicoid_value(pitch, q.argument); };
    for (Edge e : {Edge::SigmaMin, Edge::SigmaMax, Edge::ThetaMin, Edge::ThetaMax})
        p.edges[e] = dirichlet(data);
    return p;
}

double sup_error(const DiscreteGraph& got, const std::function<double(const CoverPoint&)>& f) {
    double worst = 0;
    for (int i = 0; i < got.rows(); ++i)
        for (int j = 0; j < got.cols(); ++j)
            if (got.node_class(i, j) != NodeClass::Excluded)
                worst = std::max(worst, std::abs(got.value(i, j) - f(got.point(i, j))));
    return worst;
}

} // namespace

// ============================================================================
// Residual of the exact surfaces
// ============================================================================

TEST_CASE("helicoid residual vanishes to roundoff on the sphere") {
    GraphDomain d;
    d.sigma0 = 0.0;
    d.sigma1 = std::log(4.0);
    d.theta0 = 0.0;
    d.theta1 = 3 * kPi;
    const DiscreteGraph g = make_helicoid_graph(d, GridSpec{32, 128}, kTwoPi);
    CHECK(max_interior_residual(ConformalMetric::sphere(1.0), g) <= 1e-11);
}

TEST_CASE("catenoid residual refines at second order") {
    GraphDomain d;
    d.sigma0 = std::log(1.5);
    d.sigma1 = std::log(4.0);
    d.theta0 = 0.0;
    d.theta1 = kTwoPi;
    d.theta_periodic = true;
    const ConformalMetric flat = ConformalMetric::flat();
    const double coarse = max_interior_residual(flat, make_catenoid_graph(d, GridSpec{32, 128}));
    const double fine = max_interior_residual(flat, make_catenoid_graph(d, GridSpec{64, 256}));
    CHECK(coarse > 0);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);
}

// ============================================================================
// Solver recovery of known solutions
// ============================================================================

TEST_CASE("solver recovers the helicoid from its boundary data") {
    const double pitch = kTwoPi;
    const SolveResult r = solve_minimal_graph(helicoid_problem(24, 72, pitch));
    CHECK(r.final_residual <= 1e-10);
    CHECK(r.max_principle_ok);
    CHECK(sup_error(r.graph, [pitch](const CoverPoint& q) {
              return helicoid_value(pitch, q.argument);
          }) <= 1e-8);
}

TEST_CASE("solver recovers the catenoid on a periodic annulus") {
    const SolveResult r = solve_minimal_graph(catenoid_problem(64, 8));
    CHECK(r.max_principle_ok);
    // discretization error at 64 radial cells
    CHECK(sup_error(r.graph, [](const CoverPoint& q) {
              return catenoid_value(q.modulus);
          }) <= 1e-5);
}

TEST_CASE("zero and harmonic initializers reach the same solution") {
    // a narrow annulus with data centered around zero (a vertical shift of
    // the catenoid is still a solution) keeps the cold start inside the
    // Newton basin of the genuine root
    MseProblem p = catenoid_problem(32, 8);
    p.domain.sigma1 = std::log(2.2);
    const double mid = 0.5 * (catenoid_value(1.5) + catenoid_value(2.2));
    auto shifted = [mid](const CoverPoint& q) { return catenoid_value(q.modulus) - mid; };
    p.edges[Edge::SigmaMin] = dirichlet(shifted);
    p.edges[Edge::SigmaMax] = dirichlet(shifted);
    SolveOptions harmonic;
    harmonic.initial = SolveOptions::Initial::Harmonic;
    SolveOptions zero;
    zero.initial = SolveOptions::Initial::Zero;
    zero.max_iter = 200;
    const SolveResult a = solve_minimal_graph(p, harmonic);
    const SolveResult b = solve_minimal_graph(p, zero);
    double diff = 0;
    for (int i = 0; i < a.graph.rows(); ++i)
        for (int j = 0; j < a.graph.cols(); ++j)
            diff = std::max(diff, std::abs(a.graph.value(i, j) - b.graph.value(i, j)));
    CHECK(diff <= 1e-8);
}

TEST_CASE("trace callback sees every accepted Newton step") {
    MseProblem p = catenoid_problem(24, 8);
    SolveOptions opt;
    int calls = 0;
    double last_rnorm = -1;
    opt.trace = [&](int iter, double rnorm, double eta) {
        CHECK(iter == calls + 1);
        CHECK(rnorm >= 0);
        CHECK(eta > 0);
        CHECK(eta <= 1.0);
        ++calls;
        last_rnorm = rnorm;
    };
    const SolveResult r = solve_minimal_graph(p, opt);
    CHECK(calls == r.newton_iterations);
    CHECK(last_rnorm == doctest::Approx(r.final_residual));
}

// ============================================================================
// Boundary conditions
// ============================================================================

TEST_CASE("Neumann sigma edges admit the helicoid") {
    // the helicoid is radially constant, so free sigma edges must reproduce it
    MseProblem p = helicoid_problem(16, 48, kTwoPi);
    p.edges[Edge::SigmaMin] = neumann_zero();
    p.edges[Edge::SigmaMax] = neumann_zero();
    const SolveResult r = solve_minimal_graph(p);
    CHECK(sup_error(r.graph, [](const CoverPoint& q) {
              return helicoid_value(kTwoPi, q.argument);
          }) <= 1e-8);
}

TEST_CASE("hole rims take prescribed values and stay inside the data range") {
    MseProblem p = helicoid_problem(20, 60, kTwoPi);
    HoleSpec hole;
    hole.sigma_lo = 0.45;
    hole.sigma_hi = 0.75;
    hole.theta_lo = 4.0;
    hole.theta_hi = 5.2;
    p.domain.holes.push_back(hole);
    // rim pinned to exact helicoid values: the solution must stay the helicoid
    p.hole_values.push_back(
        [](const CoverPoint& q) { return helicoid_value(kTwoPi, q.argument); });
    const SolveResult r = solve_minimal_graph(p);
    CHECK(r.max_principle_ok);
    CHECK(sup_error(r.graph, [](const CoverPoint& q) {
              return helicoid_value(kTwoPi, q.argument);
          }) <= 1e-8);

    int rim_nodes = 0;
    for (int i = 0; i < r.graph.rows(); ++i)
        for (int j = 0; j < r.graph.cols(); ++j)
            if (r.graph.node_class(i, j) == NodeClass::HoleRim) {
                ++rim_nodes;
                const CoverPoint q = r.graph.point(i, j);
                CHECK(r.graph.value(i, j) ==
                      doctest::Approx(helicoid_value(kTwoPi, q.argument)));
            }
    CHECK(rim_nodes > 0);
}

TEST_CASE("constant hole level deforms the graph but keeps the maximum principle") {
    MseProblem p = helicoid_problem(20, 60, kTwoPi);
    p.domain.holes.push_back(HoleSpec{0.45, 0.75, 4.0, 5.2});
    p.hole_values.push_back([](const CoverPoint&) { return 4.6; });
    const SolveResult r = solve_minimal_graph(p);
    CHECK(r.final_residual <= 1e-10);
    CHECK(r.max_principle_ok);
    // the rim level sits inside the helicoid data range, so extremes stay on
    // the outer boundary: all values within [min, max] of the boundary data
    double lo = 1e300, hi = -1e300;
    const DiscreteGraph& g = r.graph;
    for (int j = 0; j < g.cols(); ++j) {
        lo = std::min({lo, g.value(0, j), g.value(g.rows() - 1, j)});
        hi = std::max({hi, g.value(0, j), g.value(g.rows() - 1, j)});
    }
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            if (g.node_class(i, j) != NodeClass::Excluded) {
                CHECK(g.value(i, j) >= lo - 1e-9);
                CHECK(g.value(i, j) <= hi + 1e-9);
            }
}

// ============================================================================
// Failure modes
// ============================================================================

TEST_CASE("iteration cap raises a convergence error") {
    MseProblem p = catenoid_problem(32, 8);
    SolveOptions opt;
    opt.initial = SolveOptions::Initial::Zero;
    opt.max_iter = 2; // far too few for a cold start
    CHECK_THROWS_AS((void)solve_minimal_graph(p, opt), ConvergenceError);
    try {
        (void)solve_minimal_graph(p, opt);
    } catch (const ConvergenceError& e) {
        CHECK(e.achieved_residual > 0);
    }
}

TEST_CASE("missing boundary data is rejected") {
    MseProblem p = catenoid_problem(8, 8);
    p.edges.erase(Edge::SigmaMax);
    CHECK_THROWS_AS((void)solve_minimal_graph(p), ValidationError);
}
