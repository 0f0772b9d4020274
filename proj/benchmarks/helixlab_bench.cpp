#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "helixlab/flux.hpp"
#include "helixlab/forces.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/grid.hpp"
#include "helixlab/mse.hpp"
#include "helixlab/residues.hpp"

namespace {

using helixlab::Complex;

helixlab::MseProblem catenoid_problem(int n) {
    helixlab::MseProblem prob;
    prob.metric = helixlab::ConformalMetric::flat();
    prob.domain.sigma0 = std::log(1.5);
    prob.domain.sigma1 = std::log(4.0);
    prob.domain.theta0 = 0.0;
    prob.domain.theta1 = helixlab::kTwoPi;
    prob.domain.theta_periodic = true;
    prob.grid = {n, 4 * n};
    prob.edges[helixlab::Edge::SigmaMin] =
        helixlab::dirichlet([](const helixlab::CoverPoint& p) {
            return std::acosh(std::exp(p.sigma()));
        });
    prob.edges[helixlab::Edge::SigmaMax] =
        helixlab::dirichlet([](const helixlab::CoverPoint& p) {
            return std::acosh(std::exp(p.sigma()));
        });
    return prob;
}

void BM_SolveCatenoid(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    helixlab::MseProblem prob = catenoid_problem(n);
    helixlab::SolveOptions opts;
    opts.tol = 1e-10;
    for (auto _ : state) {
        helixlab::SolveResult res = helixlab::solve_minimal_graph(prob, opts);
        benchmark::DoNotOptimize(res.graph.value(0, 0));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SolveCatenoid)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_FluxVertical(benchmark::State& state) {
    helixlab::GraphDomain dom;
    dom.sigma0 = std::log(1.5);
    dom.sigma1 = std::log(4.0);
    dom.theta0 = 0.0;
    dom.theta1 = helixlab::kTwoPi;
    dom.theta_periodic = true;
    helixlab::DiscreteGraph graph = helixlab::make_catenoid_graph(dom, {96, 384});
    helixlab::CircleSpec circle;
    circle.center = Complex(0.0, 0.0);
    circle.radius = 2.0;
    for (auto _ : state) {
        helixlab::FluxReport rep =
            helixlab::flux_on_circle(graph, helixlab::ConformalMetric::flat(), circle,
                                     helixlab::KillingFieldId::Vertical, "exact_conormal", 1e-8);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_FluxVertical)->Unit(benchmark::kMillisecond);

void BM_ResidueContour(benchmark::State& state) {
    const Complex p(0.3, 0.4);
    auto kernel = [p](Complex z) { return 1.0 / std::log(z / p); };
    for (auto _ : state) {
        Complex val = helixlab::contour_residue(kernel, p, std::abs(p) / 4.0, 1e-10);
        benchmark::DoNotOptimize(val);
    }
}
BENCHMARK(BM_ResidueContour)->Unit(benchmark::kMicrosecond);

void BM_ForceEvaluation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    helixlab::NeckConfiguration config;
    for (int i = 0; i < n; ++i) {
        config.heights.push_back(0.5 * (i + 1));
        config.masses.push_back(1.0);
    }
    for (auto _ : state) {
        std::vector<double> f = helixlab::net_forces(config);
        benchmark::DoNotOptimize(f.data());
    }
}
BENCHMARK(BM_ForceEvaluation)->Arg(2)->Arg(4)->Arg(8);

void BM_PositivityScan(benchmark::State& state) {
    for (auto _ : state) {
        helixlab::ScanReport rep = helixlab::positivity_scan(2, 2000, 12345);
        benchmark::DoNotOptimize(rep.min_first_force);
    }
}
BENCHMARK(BM_PositivityScan)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
