#pragma once

#include <functional>
#include <map>

#include "helixlab/grid.hpp"

namespace helixlab {

enum class Edge { SigmaMin, SigmaMax, ThetaMin, ThetaMax };

enum class BoundaryKind { Dirichlet, NeumannZero };

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::Dirichlet;
    std::function<double(const CoverPoint&)> value; // Dirichlet data
};

inline BoundaryCondition dirichlet(std::function<double(const CoverPoint&)> v) {
    return {BoundaryKind::Dirichlet, std::move(v)};
}
inline BoundaryCondition neumann_zero() { return {BoundaryKind::NeumannZero, {}}; }

/// A minimal-graph boundary value problem on a log-polar rectangle.
struct MseProblem {
    ConformalMetric metric;
    GraphDomain domain;
    GridSpec grid;
    double pitch = 0.0;
    std::map<Edge, BoundaryCondition> edges;
    std::vector<std::function<double(const CoverPoint&)>> hole_values;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double damping = 0.5; // backtracking shrink factor
    enum class Initial { Harmonic, Zero, FromGraph } initial = Initial::Harmonic;
    const DiscreteGraph* initial_graph = nullptr;
    /// Called after each accepted Newton step with (iteration, residual norm,
    /// accepted step scale).
    std::function<void(int, double, double)> trace;
};

struct SolveResult {
    DiscreteGraph graph;
    int newton_iterations = 0;
    double final_residual = 0;
    // discrete maximum principle diagnostic (Dirichlet data extremes vs all nodes)
    bool max_principle_ok = true;
    double max_principle_excess = 0;
};

/// Pointwise residual of the minimal surface equation in coordinates,
///   (1 + lambda^-2 f_y^2) f_xx + (1 + lambda^-2 f_x^2) f_yy
///     - 2 lambda^-2 f_x f_y f_xy
///     + lambda^-2 (f_x^2 + f_y^2)(lambda_x/lambda f_x + lambda_y/lambda f_y) = 0,
/// with the derivatives taken by second-order central differences in the grid
/// coordinates and transformed to (x, y); lambda terms in closed form.
double mse_residual(const ConformalMetric& metric, const DiscreteGraph& graph, int i, int j);

/// Max |mse_residual| over interior nodes.
double max_interior_residual(const ConformalMetric& metric, const DiscreteGraph& graph);

/// Solution of the grid Laplace problem with the same boundary data;
/// the default Newton initializer.
DiscreteGraph initial_harmonic(const MseProblem& problem);

/// Damped Newton with backtracking on the sup norm of the discrete residual,
/// analytic Jacobian, direct sparse factorization. Throws ConvergenceError
/// when max_iter Newton steps leave the residual above tol.
SolveResult solve_minimal_graph(const MseProblem& problem, const SolveOptions& options = {});

/// HELIXLAB_THREADS cap (>=1); 1 when unset.
int thread_budget();

} // namespace helixlab
