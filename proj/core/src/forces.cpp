#include "helixlab/forces.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "helixlab/errors.hpp"
#include "helixlab/geometry.hpp"

namespace helixlab {

double pairwise_kernel(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw ValidationError("kernel heights must be positive");
    if (x == y) throw ValidationError("kernel is singular at equal heights");
    const double d = std::log(x) - std::log(y);
    return -2.0 * kPi * kPi / (d * (d * d + kPi * kPi));
}

void NeckConfiguration::validate() const {
    if (heights.empty()) throw ValidationError("configuration needs at least one neck");
    if (masses.size() != heights.size())
        throw ValidationError("configuration needs one mass per height");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(heights[i] > 0.0)) throw ValidationError("heights must be positive");
        if (!(masses[i] > 0.0)) throw ValidationError("masses must be positive");
        if (i > 0 && !(heights[i] > heights[i - 1]))
            throw ValidationError("heights must be strictly increasing");
    }
}

double net_force(const NeckConfiguration& config, std::size_t i) {
    if (i >= config.size()) throw ValidationError("neck index out of range");
    const double y = config.heights[i];
    const double c = config.masses[i];
    double F = c * c * (1.0 - y * y) / (1.0 + y * y);
    for (std::size_t j = 0; j < config.size(); ++j)
        if (j != i) F += c * config.masses[j] * pairwise_kernel(y, config.heights[j]);
    return F;
}

std::vector<double> net_forces(const NeckConfiguration& config) {
    std::vector<double> F(config.size());
    for (std::size_t i = 0; i < config.size(); ++i) F[i] = net_force(config, i);
    return F;
}

NeckConfiguration inverted(const NeckConfiguration& config) {
    const std::size_t n = config.size();
    NeckConfiguration out;
    out.heights.resize(n);
    out.masses.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.heights[i] = 1.0 / config.heights[n - 1 - i];
        out.masses[i] = config.masses[n - 1 - i];
    }
    return out;
}

namespace {

std::vector<double> forces_at(const std::vector<double>& u, const std::vector<double>& masses) {
    NeckConfiguration c;
    c.masses = masses;
    c.heights.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) c.heights[i] = std::exp(u[i]);
    // a Newton trial step may momentarily break the ordering; evaluate anyway
    std::vector<double> F(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double y = c.heights[i];
        const double ci = c.masses[i];
        double f = ci * ci * (1.0 - y * y) / (1.0 + y * y);
        for (std::size_t j = 0; j < u.size(); ++j)
            if (j != i) f += ci * c.masses[j] * pairwise_kernel(y, c.heights[j]);
        F[i] = f;
    }
    return F;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool ordered(const std::vector<double>& u) {
    for (std::size_t i = 1; i < u.size(); ++i)
        if (!(u[i] > u[i - 1])) return false;
    return true;
}

void project_ordered(std::vector<double>& u) {
    for (std::size_t i = 1; i < u.size(); ++i)
        if (!(u[i] > u[i - 1])) u[i] = u[i - 1] + 1e-9;
}

} // namespace

EquilibriumResult find_equilibrium(const NeckConfiguration& initial, double tol, int max_iter) {
    initial.validate();
    const std::size_t n = initial.size();
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::log(initial.heights[i]);

    EquilibriumResult res;
    std::vector<double> F = forces_at(u, initial.masses);
    res.first_force_history.push_back(F[0]);

    const double jac_step = 1e-6;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (max_abs(F) <= tol) {
            res.converged = true;
            break;
        }
        Eigen::MatrixXd J(n, n);
        for (std::size_t l = 0; l < n; ++l) {
            std::vector<double> up = u, um = u;
            up[l] += jac_step;
            um[l] -= jac_step;
            const std::vector<double> Fp = forces_at(up, initial.masses);
            const std::vector<double> Fm = forces_at(um, initial.masses);
            for (std::size_t k = 0; k < n; ++k)
                J(static_cast<int>(k), static_cast<int>(l)) = (Fp[k] - Fm[k]) / (2.0 * jac_step);
        }
        Eigen::VectorXd rhs(n);
        for (std::size_t k = 0; k < n; ++k) rhs(static_cast<int>(k)) = -F[k];
        const Eigen::VectorXd du = J.colPivHouseholderQr().solve(rhs);
        if (!du.allFinite()) break;

        const double f0 = max_abs(F);
        double eta = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<double> trial = u;
            for (std::size_t k = 0; k < n; ++k) trial[k] += eta * du(static_cast<int>(k));
            if (!ordered(trial)) project_ordered(trial);
            const std::vector<double> Ft = forces_at(trial, initial.masses);
            if (max_abs(Ft) < f0) {
                u = std::move(trial);
                F = Ft;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        res.iterations = iter + 1;
        res.first_force_history.push_back(F[0]);
        if (!accepted) break; // stalled: no descent direction left
    }

    res.config.masses = initial.masses;
    res.config.heights.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.config.heights[i] = std::exp(u[i]);
    res.forces = F;
    res.max_abs_force = max_abs(F);
    res.converged = res.converged || max_abs(F) <= tol;
    return res;
}

namespace {

/// Uniform double in [0, 1) from the raw engine stream; fixed construction
/// so a seed pins the sample sequence bit for bit.
double unit_draw(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

} // namespace

ScanReport positivity_scan(int N, std::size_t samples, std::uint64_t seed) {
    if (N < 1) throw ValidationError("scan needs at least one neck");
    if (samples == 0) throw ValidationError("scan needs a nonempty sample set");

    const double log_y_lo = std::log(1e-3);
    const double log_ratio_hi = std::log(1e3);
    const double log_mass_lo = std::log(0.1);
    const double log_mass_hi = std::log(10.0);

    std::mt19937_64 rng(seed);
    ScanReport report;
    report.samples = samples;
    bool first = true;

    for (std::size_t s = 0; s < samples; ++s) {
        NeckConfiguration c;
        c.heights.resize(N);
        c.masses.resize(N);
        if (N == 1 && s == 0) {
            c.heights[0] = 1.0;
            c.masses[0] = 1.0;
        } else {
            c.heights[0] = std::exp(log_y_lo * (1.0 - unit_draw(rng)));
            for (int i = 1; i < N; ++i) {
                double ratio = std::exp(log_ratio_hi * unit_draw(rng));
                c.heights[i] = c.heights[i - 1] * ratio;
                if (!(c.heights[i] > c.heights[i - 1]))
                    c.heights[i] = std::nextafter(c.heights[i - 1], 1e308);
            }
            for (int i = 0; i < N; ++i)
                c.masses[i] = std::exp(log_mass_lo + (log_mass_hi - log_mass_lo) * unit_draw(rng));
        }
        const double F1 = net_force(c, 0);
        if (first || F1 < report.min_first_force) {
            report.min_first_force = F1;
            report.argmin = c;
            first = false;
        }
    }
    return report;
}

} // namespace helixlab
