#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace helixlab {

/// Attraction kernel between neck heights on the positive imaginary axis:
///   f(x, y) = -2 pi^2 / ((log x - log y) |log x - log y + i pi|^2).
/// Antisymmetric, and positive exactly when 0 < x < y.
double pairwise_kernel(double x, double y);

/// Ordered catenoidal-neck masses: heights y_i strictly increasing, all
/// masses c_i positive.
struct NeckConfiguration {
    std::vector<double> heights;
    std::vector<double> masses;

    std::size_t size() const { return heights.size(); }
    void validate() const;
};

/// Net force on the i-th neck (0-based):
///   F_i = c_i^2 (1 - y_i^2)/(1 + y_i^2) + sum_{j != i} c_i c_j f(y_i, y_j).
/// Repulsion from the two antipodal axis points plus pairwise attraction.
double net_force(const NeckConfiguration& config, std::size_t i);
std::vector<double> net_forces(const NeckConfiguration& config);

/// Image under the unit-circle inversion y_i -> 1/y_{N-1-i} (masses
/// reversed); maps F_i to -F_{N-1-i}.
NeckConfiguration inverted(const NeckConfiguration& config);

struct EquilibriumResult {
    NeckConfiguration config;                ///< final iterate
    bool converged = false;
    int iterations = 0;
    double max_abs_force = 0.0;              ///< at the final iterate
    std::vector<double> forces;              ///< at the final iterate
    std::vector<double> first_force_history; ///< F_1 at every iterate, initial included
};

/// Damped Newton in log-heights (numeric Jacobian, backtracking line search,
/// projection back into the ordered cone) driving every |F_i| below tol.
EquilibriumResult find_equilibrium(const NeckConfiguration& initial, double tol = 1e-10,
                                   int max_iter = 100);

struct ScanReport {
    double min_first_force = 0.0;
    NeckConfiguration argmin;
    std::size_t samples = 0;
};

/// Deterministic sampled minimum of F_1 over the admissible cone:
/// y_1 log-uniform in [1e-3, 1], successive height ratios log-uniform in
/// (1, 1e3], masses log-uniform in [0.1, 10]. For N = 1 the first sample is
/// pinned at y = 1 (the self-equilibrium) and the rest satisfy y_1 < 1.
/// Samples are drawn and reduced sequentially, so a fixed seed fixes the
/// report exactly.
ScanReport positivity_scan(int N, std::size_t samples, std::uint64_t seed);

} // namespace helixlab
