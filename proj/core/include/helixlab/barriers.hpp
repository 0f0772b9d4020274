#pragma once

#include <vector>

#include "helixlab/geometry.hpp"

namespace helixlab {

/// Green's-type function of the cover,
///   h_p(z) = -log | (log z - log p) / (log z - log pbar) |,
/// with both logs taken through the carried arguments. Positive for
/// arg p, arg z > 0; zero on the real ray arg z = 0; odd under conjugation.
double green_h(const CoverPoint& p, const CoverPoint& z);

/// d h_p / d z (Wirtinger), holomorphic part of the cover expression.
Complex green_h_dz(const CoverPoint& p, const CoverPoint& z);

/// Sliding barrier H_t(z) = Im( log t log z / (log t + i log z) ), 0 < t < 1.
double barrier_H(double t, const CoverPoint& z);

/// Same value through the expanded polar form
///   ((log t)^2 th + |log t| ((log r)^2 + th^2)) / ((log t - th)^2 + (log r)^2).
double barrier_H_polar(double t, const CoverPoint& z);

/// C^2 cutoff: 1 on (-inf, pi], 0 on [2 pi, inf), quintic in between.
double angular_cutoff(double x);

/// Comparison barrier g(z) = C2 / |z|^2 + cutoff(arg z) sum_i 1/|z - p_i|^2.
double barrier_g(const std::vector<CoverPoint>& poles, double C2, const CoverPoint& z);

/// delta(z): distance scale of the barrier inequality. min(|z|, |z - p_i|)
/// for 0 < arg z < pi, plain |z| for arg z >= pi.
double barrier_delta(const std::vector<CoverPoint>& poles, const CoverPoint& z);

/// Five-point finite-difference Laplacian of barrier_g at z.
double barrier_g_laplacian(const std::vector<CoverPoint>& poles, double C2, const CoverPoint& z,
                           double h = 1e-4);

/// Smallest C2 (times a safety factor of 2, floored at 1) for which the
/// sampled deficiency of  Lap g >= 4 / delta^4  is nonnegative on a 200 x 200
/// grid over sigma in [log(0.05), 0], arg in (0, 3 pi].
double calibrate_C2(const std::vector<CoverPoint>& poles);

/// Minimum of  Lap g - 4 / delta^4  over the calibration grid for a given C2;
/// nonnegative when the barrier inequality holds at that strength.
double barrier_g_margin(const std::vector<CoverPoint>& poles, double C2);

/// Sampled verdicts for the pointwise properties of the sliding barrier at a
/// fixed slide parameter t.
struct BarrierPropertyReport {
    bool positive = false;             ///< H_t > 0 wherever arg z > 0
    bool inversion_symmetric = false;  ///< H_t(1/conj z) = H_t(z)
    bool circle_floor = false;         ///< H_t >= |log t|/2 on |z| = t
    bool far_angle_floor = false;      ///< H_t >= |log t|/2 for large arg z, t <= |z| <= 1
    bool log_bound = false;            ///< H_t <= |log z| (cover modulus of log z)
    bool all() const {
        return positive && inversion_symmetric && circle_floor && far_angle_floor && log_bound;
    }
};

BarrierPropertyReport check_barrier_properties(double t);

/// |H_t(z) - arg z| for each slide parameter: the small-t limit diagnostics.
std::vector<double> barrier_limit_errors(const CoverPoint& z, const std::vector<double>& t_values);

/// Limit configuration: u~ = c0 arg z + sum c_i h_{p_i}(z).
struct LimitConfig {
    double c0 = 0;
    std::vector<CoverPoint> poles;
    std::vector<double> coefficients;
};

double limit_u_tilde(const LimitConfig& config, const CoverPoint& z);

/// d u~ / d z = c0/(2 i z) - sum (c_i / 2 z)(1/(log z - log p_i) - 1/(log z - log pbar_i)).
Complex limit_u_tilde_dz(const LimitConfig& config, const CoverPoint& z);

/// {p_i} united with {1/conj(p_i)}, sorted by modulus: the inversion-closed
/// pole set used by symmetric configurations.
std::vector<CoverPoint> make_symmetric_pole_set(const std::vector<CoverPoint>& poles);

} // namespace helixlab
