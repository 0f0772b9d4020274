#include "helixlab/mse.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <cstdlib>
#include <thread>

namespace helixlab {

int thread_budget() {
    static const int cached = [] {
        const char* env = std::getenv("HELIXLAB_THREADS");
        if (!env) return 1;
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) return 1;
        return static_cast<int>(v);
    }();
    return cached;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Transform {
    // coefficients of the chart transform at one node
    double e1, e2, c, s, c2, s2;
};

Transform transform_at(double sigma, double theta) {
    Transform t;
    t.e1 = std::exp(-sigma);
    t.e2 = t.e1 * t.e1;
    t.c = std::cos(theta);
    t.s = std::sin(theta);
    t.c2 = t.c * t.c - t.s * t.s;
    t.s2 = 2.0 * t.s * t.c;
    return t;
}

struct CartesianDerivs {
    double fx, fy, fxx, fyy, fxy;
};

CartesianDerivs to_cartesian(const Transform& t, const DiscreteGraph::NodeDerivs& d) {
    CartesianDerivs o;
    o.fx = t.e1 * (t.c * d.fs - t.s * d.ft);
    o.fy = t.e1 * (t.s * d.fs + t.c * d.ft);
    const double sc = t.s * t.c;
    o.fxx = t.e2 * (t.c * t.c * d.fss + t.s * t.s * d.ftt - 2 * sc * d.fst - t.c2 * d.fs + t.s2 * d.ft);
    o.fyy = t.e2 * (t.s * t.s * d.fss + t.c * t.c * d.ftt + 2 * sc * d.fst + t.c2 * d.fs - t.s2 * d.ft);
    o.fxy = t.e2 * (sc * d.fss - sc * d.ftt + t.c2 * d.fst - t.s2 * d.fs - t.c2 * d.ft);
    return o;
}

double residual_value(const ConformalMetric& metric, Complex z, const CartesianDerivs& cd) {
    const double lam = metric.lambda(z);
    const double il2 = 1.0 / (lam * lam);
    const Complex gl = metric.dlog_lambda(z);
    const double A = 1.0 + il2 * cd.fy * cd.fy;
    const double B = 1.0 + il2 * cd.fx * cd.fx;
    const double C = -2.0 * il2 * cd.fx * cd.fy;
    const double grad2 = cd.fx * cd.fx + cd.fy * cd.fy;
    return A * cd.fxx + B * cd.fyy + C * cd.fxy +
           il2 * grad2 * (gl.real() * cd.fx + gl.imag() * cd.fy);
}

// d residual / d (fx, fy, fxx, fyy, fxy)
struct ResidualPartials {
    double dfx, dfy, dfxx, dfyy, dfxy;
};

ResidualPartials residual_partials(const ConformalMetric& metric, Complex z,
                                   const CartesianDerivs& cd) {
    const double lam = metric.lambda(z);
    const double il2 = 1.0 / (lam * lam);
    const Complex gl = metric.dlog_lambda(z);
    const double gx = gl.real(), gy = gl.imag();
    const double P = gx * cd.fx + gy * cd.fy;
    const double Q = cd.fx * cd.fx + cd.fy * cd.fy;
    ResidualPartials p;
    p.dfxx = 1.0 + il2 * cd.fy * cd.fy;
    p.dfyy = 1.0 + il2 * cd.fx * cd.fx;
    p.dfxy = -2.0 * il2 * cd.fx * cd.fy;
    p.dfx = 2.0 * il2 * cd.fx * cd.fyy - 2.0 * il2 * cd.fy * cd.fxy +
            il2 * (2.0 * cd.fx * P + Q * gx);
    p.dfy = 2.0 * il2 * cd.fy * cd.fxx - 2.0 * il2 * cd.fx * cd.fxy +
            il2 * (2.0 * cd.fy * P + Q * gy);
    return p;
}

// chain rule: d residual / d (fs, ft, fss, ftt, fst)
struct GridPartials {
    double dfs, dft, dfss, dftt, dfst;
};

GridPartials grid_partials(const Transform& t, const ResidualPartials& p) {
    const double sc = t.s * t.c;
    GridPartials g;
    g.dfs = p.dfx * t.e1 * t.c + p.dfy * t.e1 * t.s +
            p.dfxx * (-t.e2 * t.c2) + p.dfyy * (t.e2 * t.c2) + p.dfxy * (-t.e2 * t.s2);
    g.dft = p.dfx * (-t.e1 * t.s) + p.dfy * t.e1 * t.c +
            p.dfxx * (t.e2 * t.s2) + p.dfyy * (-t.e2 * t.s2) + p.dfxy * (-t.e2 * t.c2);
    g.dfss = p.dfxx * t.e2 * t.c * t.c + p.dfyy * t.e2 * t.s * t.s + p.dfxy * t.e2 * sc;
    g.dftt = p.dfxx * t.e2 * t.s * t.s + p.dfyy * t.e2 * t.c * t.c - p.dfxy * t.e2 * sc;
    g.dfst = -p.dfxx * t.e2 * 2 * sc + p.dfyy * t.e2 * 2 * sc + p.dfxy * t.e2 * t.c2;
    return g;
}

// Grid geometry shared by all the assembly passes.
struct Workspace {
    const MseProblem* problem = nullptr;
    const DiscreteGraph* graph = nullptr; // classification template
    int rows = 0, cols = 0;
    double hs = 0, ht = 0;
    std::vector<int> unknown_of_node; // -1 for fixed nodes
    std::vector<std::pair<int, int>> node_of_unknown;
    std::vector<unsigned char> neumann_lo_sigma, neumann_hi_sigma;
    std::vector<unsigned char> neumann_lo_theta, neumann_hi_theta;
};

bool edge_is_neumann(const MseProblem& p, Edge e) {
    auto it = p.edges.find(e);
    return it != p.edges.end() && it->second.kind == BoundaryKind::NeumannZero;
}

Workspace make_workspace(const MseProblem& problem, const DiscreteGraph& g) {
    Workspace w;
    w.problem = &problem;
    w.graph = &g;
    w.rows = g.rows();
    w.cols = g.cols();
    w.hs = g.h_sigma();
    w.ht = g.h_theta();

    const bool per = problem.domain.theta_periodic;
    if (per && (problem.edges.count(Edge::ThetaMin) || problem.edges.count(Edge::ThetaMax)))
        throw ValidationError("theta-periodic domains take no theta edge conditions");
    if (!problem.edges.count(Edge::SigmaMin) || !problem.edges.count(Edge::SigmaMax))
        throw ValidationError("sigma edge conditions are required");
    if (!per && (!problem.edges.count(Edge::ThetaMin) || !problem.edges.count(Edge::ThetaMax)))
        throw ValidationError("theta edge conditions are required on non-periodic domains");
    if (problem.hole_values.size() != problem.domain.holes.size())
        throw ValidationError("one Dirichlet value function per hole is required");

    const bool nlo_s = edge_is_neumann(problem, Edge::SigmaMin);
    const bool nhi_s = edge_is_neumann(problem, Edge::SigmaMax);
    const bool nlo_t = !per && edge_is_neumann(problem, Edge::ThetaMin);
    const bool nhi_t = !per && edge_is_neumann(problem, Edge::ThetaMax);

    w.unknown_of_node.assign(static_cast<std::size_t>(w.rows) * w.cols, -1);
    for (int i = 0; i < w.rows; ++i)
        for (int j = 0; j < w.cols; ++j) {
            const NodeClass c = g.node_class(i, j);
            bool unknown = false;
            if (c == NodeClass::Interior) {
                unknown = true;
            } else if (c == NodeClass::OuterBoundary) {
                // a boundary node is free exactly when every outer edge it
                // touches is NeumannZero
                bool free_node = true;
                if (i == 0 && !nlo_s) free_node = false;
                if (i == w.rows - 1 && !nhi_s) free_node = false;
                if (!per && j == 0 && !nlo_t) free_node = false;
                if (!per && j == w.cols - 1 && !nhi_t) free_node = false;
                const bool touches = (i == 0) || (i == w.rows - 1) ||
                                     (!per && (j == 0 || j == w.cols - 1));
                unknown = touches && free_node;
            }
            if (unknown) {
                w.unknown_of_node[g.index(i, j)] = static_cast<int>(w.node_of_unknown.size());
                w.node_of_unknown.emplace_back(i, j);
            }
        }
    return w;
}

// Stencil value fetch with Neumann mirroring and periodic wrap.  Returns the
// node actually read, so Jacobian weights can be folded onto it.
std::pair<int, int> resolve_neighbor(const Workspace& w, int i, int j) {
    const MseProblem& p = *w.problem;
    if (i < 0) i = edge_is_neumann(p, Edge::SigmaMin) ? -i : 0;
    if (i > w.rows - 1) i = edge_is_neumann(p, Edge::SigmaMax) ? 2 * (w.rows - 1) - i : w.rows - 1;
    if (p.domain.theta_periodic) {
        j = ((j % w.cols) + w.cols) % w.cols;
    } else {
        if (j < 0) j = edge_is_neumann(p, Edge::ThetaMin) ? -j : 0;
        if (j > w.cols - 1)
            j = edge_is_neumann(p, Edge::ThetaMax) ? 2 * (w.cols - 1) - j : w.cols - 1;
    }
    return {i, j};
}

struct StencilEntry {
    int di, dj;
    double w_fs, w_ft, w_fss, w_ftt, w_fst;
};

// fixed 9-point stencil weights in grid coordinates
std::array<StencilEntry, 9> stencil_weights(double hs, double ht) {
    const double i2s = 1.0 / (2 * hs), i2t = 1.0 / (2 * ht);
    const double iss = 1.0 / (hs * hs), itt = 1.0 / (ht * ht);
    const double ist = 1.0 / (4 * hs * ht);
    return {{
        {0, 0, 0, 0, -2 * iss, -2 * itt, 0},
        {1, 0, i2s, 0, iss, 0, 0},
        {-1, 0, -i2s, 0, iss, 0, 0},
        {0, 1, 0, i2t, 0, itt, 0},
        {0, -1, 0, -i2t, 0, itt, 0},
        {1, 1, 0, 0, 0, 0, ist},
        {-1, -1, 0, 0, 0, 0, ist},
        {1, -1, 0, 0, 0, 0, -ist},
        {-1, 1, 0, 0, 0, 0, -ist},
    }};
}

DiscreteGraph::NodeDerivs gather_derivs(const Workspace& w, const DiscreteGraph& g, int i, int j) {
    const auto st = stencil_weights(w.hs, w.ht);
    DiscreteGraph::NodeDerivs d{0, 0, 0, 0, 0};
    for (const StencilEntry& e : st) {
        const auto [ri, rj] = resolve_neighbor(w, i + e.di, j + e.dj);
        const double v = g.value(ri, rj);
        d.fs += e.w_fs * v;
        d.ft += e.w_ft * v;
        d.fss += e.w_fss * v;
        d.ftt += e.w_ftt * v;
        d.fst += e.w_fst * v;
    }
    return d;
}

void apply_dirichlet(const MseProblem& problem, DiscreteGraph& g) {
    const bool per = problem.domain.theta_periodic;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
            const NodeClass c = g.node_class(i, j);
            if (c == NodeClass::HoleRim) {
                const int h = g.rim_hole(i, j);
                g.value(i, j) = problem.hole_values[h](g.point(i, j));
            } else if (c == NodeClass::OuterBoundary) {
                // Dirichlet edges override; Neumann-only boundary nodes keep
                // their current (initial) values and stay unknowns
                auto set_from = [&](Edge e) {
                    auto it = problem.edges.find(e);
                    if (it != problem.edges.end() && it->second.kind == BoundaryKind::Dirichlet)
                        g.value(i, j) = it->second.value(g.point(i, j));
                };
                if (!per && j == 0) set_from(Edge::ThetaMin);
                if (!per && j == g.cols() - 1) set_from(Edge::ThetaMax);
                if (i == 0) set_from(Edge::SigmaMin);
                if (i == g.rows() - 1) set_from(Edge::SigmaMax);
            }
        }
    g.mark_values_changed();
}

void parallel_rows(int n, const std::function<void(int, int)>& run) {
    const int threads = std::min(thread_budget(), n);
    if (threads <= 1) {
        run(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run, lo, hi);
    }
    for (auto& th : pool) th.join();
}

void assemble(const Workspace& w, const DiscreteGraph& g, Eigen::VectorXd* residual,
              std::vector<std::vector<Triplet>>* jac_rows) {
    const MseProblem& p = *w.problem;
    const int n = static_cast<int>(w.node_of_unknown.size());
    const auto st = stencil_weights(w.hs, w.ht);
    parallel_rows(n, [&](int lo, int hi) {
        for (int u = lo; u < hi; ++u) {
            const auto [i, j] = w.node_of_unknown[u];
            const double sg = g.sigma(i), th = g.theta(j);
            const Transform t = transform_at(sg, th);
            const Complex z = std::polar(std::exp(sg), th);
            const DiscreteGraph::NodeDerivs d = gather_derivs(w, g, i, j);
            const CartesianDerivs cd = to_cartesian(t, d);
            if (residual) (*residual)(u) = residual_value(p.metric, z, cd);
            if (jac_rows) {
                const GridPartials gp = grid_partials(t, residual_partials(p.metric, z, cd));
                auto& out = (*jac_rows)[u];
                out.clear();
                for (const StencilEntry& e : st) {
                    const auto [ri, rj] = resolve_neighbor(w, i + e.di, j + e.dj);
                    const int v = w.unknown_of_node[g.index(ri, rj)];
                    if (v < 0) continue;
                    const double coeff = gp.dfs * e.w_fs + gp.dft * e.w_ft + gp.dfss * e.w_fss +
                                         gp.dftt * e.w_ftt + gp.dfst * e.w_fst;
                    out.emplace_back(u, v, coeff);
                }
            }
        }
    });
}

void check_max_principle(const MseProblem& problem, const DiscreteGraph& g, SolveResult* res) {
    // only meaningful when every boundary piece is Dirichlet
    for (auto e : {Edge::SigmaMin, Edge::SigmaMax, Edge::ThetaMin, Edge::ThetaMax})
        if (edge_is_neumann(problem, e)) return;
    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    double amin = bmin, amax = bmax;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
            const NodeClass c = g.node_class(i, j);
            if (c == NodeClass::Excluded) continue;
            const double v = g.value(i, j);
            amin = std::min(amin, v);
            amax = std::max(amax, v);
            if (c != NodeClass::Interior) {
                bmin = std::min(bmin, v);
                bmax = std::max(bmax, v);
            }
        }
    const double slack = 1e-9 * std::max(1.0, bmax - bmin);
    res->max_principle_excess = std::max(amax - bmax, bmin - amin);
    res->max_principle_ok = res->max_principle_excess <= slack;
}

} // namespace

double mse_residual(const ConformalMetric& metric, const DiscreteGraph& graph, int i, int j) {
    const DiscreteGraph::NodeDerivs d = graph.node_derivs(i, j);
    const Transform t = transform_at(graph.sigma(i), graph.theta(j));
    const Complex z = graph.point(i, j).z();
    return residual_value(metric, z, to_cartesian(t, d));
}

double max_interior_residual(const ConformalMetric& metric, const DiscreteGraph& graph) {
    double m = 0;
    for (int i = 1; i < graph.rows() - 1; ++i)
        for (int j = 0; j < graph.cols(); ++j)
            if (graph.node_class(i, j) == NodeClass::Interior &&
                (graph.domain().theta_periodic || (j > 0 && j < graph.cols() - 1)))
                m = std::max(m, std::abs(mse_residual(metric, graph, i, j)));
    return m;
}

DiscreteGraph initial_harmonic(const MseProblem& problem) {
    DiscreteGraph g(problem.domain, problem.grid, problem.pitch);
    Workspace w = make_workspace(problem, g);
    apply_dirichlet(problem, g);

    const int n = static_cast<int>(w.node_of_unknown.size());
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(n) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const double iss = 1.0 / (w.hs * w.hs), itt = 1.0 / (w.ht * w.ht);
    const StencilEntry lap[5] = {
        {0, 0, 0, 0, -2 * iss, -2 * itt, 0},
        {1, 0, 0, 0, iss, 0, 0},
        {-1, 0, 0, 0, iss, 0, 0},
        {0, 1, 0, 0, 0, itt, 0},
        {0, -1, 0, 0, 0, itt, 0},
    };
    for (int u = 0; u < n; ++u) {
        const auto [i, j] = w.node_of_unknown[u];
        for (const StencilEntry& e : lap) {
            const auto [ri, rj] = resolve_neighbor(w, i + e.di, j + e.dj);
            const double coeff = e.w_fss + e.w_ftt;
            const int v = w.unknown_of_node[g.index(ri, rj)];
            if (v >= 0)
                trips.emplace_back(u, v, coeff);
            else
                rhs(u) -= coeff * g.value(ri, rj);
        }
    }
    SpMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SpMat> lu(A);
    if (lu.info() != Eigen::Success)
        throw ConvergenceError("harmonic initializer factorization failed", 0.0);
    const Eigen::VectorXd x = lu.solve(rhs);
    for (int u = 0; u < n; ++u) {
        const auto [i, j] = w.node_of_unknown[u];
        g.value(i, j) = x(u);
    }
    g.mark_values_changed();
    return g;
}

SolveResult solve_minimal_graph(const MseProblem& problem, const SolveOptions& options) {
    DiscreteGraph g(problem.domain, problem.grid, problem.pitch);
    Workspace w = make_workspace(problem, g);

    switch (options.initial) {
        case SolveOptions::Initial::Harmonic:
            g = initial_harmonic(problem);
            break;
        case SolveOptions::Initial::Zero:
            break;
        case SolveOptions::Initial::FromGraph: {
            if (!options.initial_graph)
                throw ValidationError("FromGraph initial requires initial_graph");
            const DiscreteGraph& src = *options.initial_graph;
            if (src.rows() != g.rows() || src.cols() != g.cols())
                throw ValidationError("initial graph grid does not match the problem grid");
            for (int i = 0; i < g.rows(); ++i)
                for (int j = 0; j < g.cols(); ++j)
                    if (g.node_class(i, j) != NodeClass::Excluded) g.value(i, j) = src.value(i, j);
            break;
        }
    }
    apply_dirichlet(problem, g);

    const int n = static_cast<int>(w.node_of_unknown.size());
    Eigen::VectorXd r(n);
    std::vector<std::vector<Triplet>> jac_rows(n);
    std::vector<Triplet> trips;

    auto write_unknowns = [&](const Eigen::VectorXd& x) {
        for (int u = 0; u < n; ++u) {
            const auto [i, j] = w.node_of_unknown[u];
            g.value(i, j) = x(u);
        }
        g.mark_values_changed();
    };
    Eigen::VectorXd x(n);
    for (int u = 0; u < n; ++u) {
        const auto [i, j] = w.node_of_unknown[u];
        x(u) = g.value(i, j);
    }

    // Roundoff floor of the residual stencil: second differences of values of
    // size `scale` carry absolute noise ~ eps * scale / h^2, so no grid can
    // certify a residual below that. The requested tol is clamped to it.
    double scale = 0;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            if (g.node_class(i, j) != NodeClass::Excluded)
                scale = std::max(scale, std::abs(g.value(i, j)));
    const double inv_h2 = 1.0 / (w.hs * w.hs) + 1.0 / (w.ht * w.ht);
    const double floor =
        16.0 * std::numeric_limits<double>::epsilon() * inv_h2 * (1.0 + scale);
    const double tol = std::max(options.tol, floor);

    assemble(w, g, &r, nullptr);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    double merit = r.norm(); // 2-norm line-search merit; tol is checked pointwise

    int iter = 0;
    while (rnorm > tol) {
        if (iter >= options.max_iter)
            throw ConvergenceError("Newton iteration did not reach tolerance", rnorm);
        assemble(w, g, &r, &jac_rows);
        trips.clear();
        for (auto& row : jac_rows)
            for (auto& t : row) trips.push_back(t);
        SpMat J(n, n);
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<SpMat> lu(J);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("Jacobian factorization failed", rnorm);
        const Eigen::VectorXd step = lu.solve(-r);

        double eta = 1.0;
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            write_unknowns(x + eta * step);
            assemble(w, g, &r, nullptr);
            const double cand = r.norm();
            if (cand <= merit * (1.0 - 1e-4 * eta)) {
                x += eta * step;
                merit = cand;
                rnorm = r.lpNorm<Eigen::Infinity>();
                accepted = true;
                break;
            }
            eta *= options.damping;
        }
        if (!accepted) {
            write_unknowns(x);
            throw ConvergenceError("line search stalled", rnorm);
        }
        ++iter;
        if (options.trace) options.trace(iter, rnorm, eta);
    }
    write_unknowns(x);
    SolveResult res{std::move(g), iter, rnorm, true, 0.0};
    check_max_principle(problem, res.graph, &res);
    return res;
}

} // namespace helixlab
