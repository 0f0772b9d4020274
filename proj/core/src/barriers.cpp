#include "helixlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace helixlab {

namespace {

void check_pole(const CoverPoint& p, const CoverPoint& z) {
    const Complex a = log_cover(z) - log_cover(p);
    const Complex b = log_cover(z) - log_cover(p.conj());
    if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14)
        throw PoleError("green_h evaluated at its pole");
}

} // namespace

double green_h(const CoverPoint& p, const CoverPoint& z) {
    check_pole(p, z);
    const Complex num = log_cover(z) - log_cover(p);
    const Complex den = log_cover(z) - log_cover(p.conj());
    return -std::log(std::abs(num) / std::abs(den));
}

Complex green_h_dz(const CoverPoint& p, const CoverPoint& z) {
    check_pole(p, z);
    const Complex lz = log_cover(z);
    const Complex a = lz - log_cover(p);
    const Complex b = lz - log_cover(p.conj());
    return -(1.0 / a - 1.0 / b) / (2.0 * z.z());
}

double barrier_H(double t, const CoverPoint& z) {
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("barrier parameter t must lie in (0,1)");
    const double lt = std::log(t);
    const Complex lz = log_cover(z);
    return (lt * lz / (lt + Complex(0, 1) * lz)).imag();
}

double barrier_H_polar(double t, const CoverPoint& z) {
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("barrier parameter t must lie in (0,1)");
    const double lt = std::log(t);
    const double lr = std::log(z.modulus);
    const double th = z.argument;
    const double num = lt * lt * th + std::abs(lt) * (lr * lr + th * th);
    const double den = (lt - th) * (lt - th) + lr * lr;
    return num / den;
}

double angular_cutoff(double x) {
    if (x <= kPi) return 1.0;
    if (x >= kTwoPi) return 0.0;
    const double s = (x - kPi) / kPi;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double barrier_g(const std::vector<CoverPoint>& poles, double C2, const CoverPoint& z) {
    double g = C2 / (z.modulus * z.modulus);
    const double cut = angular_cutoff(z.argument);
    if (cut > 0.0) {
        const Complex zz = z.z();
        for (const CoverPoint& p : poles) {
            const double d2 = std::norm(zz - p.z());
            if (d2 == 0.0) throw PoleError("barrier_g evaluated at a pole");
            g += cut / d2;
        }
    }
    return g;
}

double barrier_delta(const std::vector<CoverPoint>& poles, const CoverPoint& z) {
    double d = z.modulus;
    if (z.argument > 0.0 && z.argument < kPi) {
        const Complex zz = z.z();
        for (const CoverPoint& p : poles) d = std::min(d, std::abs(zz - p.z()));
    }
    return d;
}

double barrier_g_laplacian(const std::vector<CoverPoint>& poles, double C2, const CoverPoint& z,
                           double h) {
    // five-point stencil in the plane; arguments follow the displacement
    const Complex zz = z.z();
    auto at = [&](double dx, double dy) {
        const Complex w = zz + Complex(dx, dy);
        const double m = std::abs(w);
        // displaced argument on the same sheet
        double a = z.argument + std::arg(w / zz);
        return barrier_g(poles, C2, CoverPoint(m, a));
    };
    const double c = barrier_g(poles, C2, z);
    return (at(h, 0) + at(-h, 0) + at(0, h) + at(0, -h) - 4.0 * c) / (h * h);
}

double calibrate_C2(const std::vector<CoverPoint>& poles) {
    const int n = 200;
    const double sig_lo = std::log(0.05), sig_hi = 0.0;
    const double th_lo = 1e-3, th_hi = 3.0 * kPi;
    double req = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sig = sig_lo + (sig_hi - sig_lo) * (i + 0.5) / n;
        const double r = std::exp(sig);
        for (int j = 0; j < n; ++j) {
            const double th = th_lo + (th_hi - th_lo) * (j + 0.5) / n;
            const CoverPoint z(r, th);
            bool near_pole = false;
            for (const CoverPoint& p : poles)
                if (std::abs(z.z() - p.z()) < 1e-2) near_pole = true;
            if (near_pole) continue;
            const double delta = barrier_delta(poles, z);
            // Lap g = C2 * 4/|z|^4 + T(z); require C2 >= (4/delta^4 - T) |z|^4 / 4
            const double T = barrier_g_laplacian(poles, 0.0, z);
            const double need = (4.0 / std::pow(delta, 4) - T) * std::pow(r, 4) / 4.0;
            req = std::max(req, need);
        }
    }
    return std::max(1.0, 2.0 * req);
}

double barrier_g_margin(const std::vector<CoverPoint>& poles, double C2) {
    const int n = 200;
    const double sig_lo = std::log(0.05), sig_hi = 0.0;
    const double th_lo = 1e-3, th_hi = 3.0 * kPi;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double sig = sig_lo + (sig_hi - sig_lo) * (i + 0.5) / n;
        const double r = std::exp(sig);
        for (int j = 0; j < n; ++j) {
            const double th = th_lo + (th_hi - th_lo) * (j + 0.5) / n;
            const CoverPoint z(r, th);
            bool near_pole = false;
            for (const CoverPoint& p : poles)
                if (std::abs(z.z() - p.z()) < 1e-2) near_pole = true;
            if (near_pole) continue;
            const double delta = barrier_delta(poles, z);
            const double lap = C2 * 4.0 / std::pow(r, 4) + barrier_g_laplacian(poles, 0.0, z);
            margin = std::min(margin, lap - 4.0 / std::pow(delta, 4));
        }
    }
    return margin;
}

BarrierPropertyReport check_barrier_properties(double t) {
    if (!(t > 0) || !(t < 1))
        throw ValidationError("the slide parameter must lie in (0, 1)");
    BarrierPropertyReport rep;
    const double L = -std::log(t);
    const double tol = 1e-12;

    // positivity, the log bound, and inversion symmetry over a sample grid
    // reaching moduli on both sides of [t, 1]
    rep.positive = true;
    rep.log_bound = true;
    rep.inversion_symmetric = true;
    for (int i = 0; i < 40; ++i) {
        const double lr_lo = std::log(t / 2), lr_hi = std::log(2.0);
        const double r = std::exp(lr_lo + (lr_hi - lr_lo) * (i + 0.5) / 40.0);
        for (int j = 0; j < 60; ++j) {
            const double th = 3.0 * kPi * (j + 0.5) / 60.0;
            const CoverPoint z(r, th);
            const double H = barrier_H(t, z);
            if (!(H > 0)) rep.positive = false;
            if (H > std::hypot(std::log(r), th) + tol) rep.log_bound = false;
            if (std::abs(barrier_H(t, z.invert()) - H) > 1e-10 * std::max(1.0, std::abs(H)))
                rep.inversion_symmetric = false;
        }
    }

    // floor on the circle |z| = t, well past one turn
    rep.circle_floor = true;
    for (int j = 0; j < 200; ++j) {
        const double th = 4.0 * kPi * (j + 0.5) / 200.0;
        if (barrier_H(t, CoverPoint(t, th)) < L / 2 - tol) rep.circle_floor = false;
    }

    // floor for large argument, uniformly over t <= |z| <= 1; the sampled
    // angles start at the sufficient threshold sqrt(2) |log t|
    rep.far_angle_floor = true;
    const double th_start = std::sqrt(2.0) * L;
    for (int k = 0; k <= 21; ++k) {
        const double r = std::pow(t, k / 21.0);
        for (int j = 0; j < 50; ++j) {
            const double th = th_start + (1000.0 - th_start) * j / 49.0;
            if (!(th > 0)) continue;
            if (barrier_H(t, CoverPoint(r, th)) < L / 2 - tol) rep.far_angle_floor = false;
        }
    }
    return rep;
}

std::vector<double> barrier_limit_errors(const CoverPoint& z, const std::vector<double>& t_values) {
    std::vector<double> out;
    out.reserve(t_values.size());
    for (double t : t_values) out.push_back(std::abs(barrier_H(t, z) - z.argument));
    return out;
}

double limit_u_tilde(const LimitConfig& config, const CoverPoint& z) {
    if (config.poles.size() != config.coefficients.size())
        throw ValidationError("limit configuration needs one coefficient per pole");
    double u = config.c0 * z.argument;
    for (std::size_t i = 0; i < config.poles.size(); ++i)
        u += config.coefficients[i] * green_h(config.poles[i], z);
    return u;
}

Complex limit_u_tilde_dz(const LimitConfig& config, const CoverPoint& z) {
    if (config.poles.size() != config.coefficients.size())
        throw ValidationError("limit configuration needs one coefficient per pole");
    const Complex zz = z.z();
    Complex d = config.c0 / (Complex(0, 2) * zz);
    for (std::size_t i = 0; i < config.poles.size(); ++i)
        d += config.coefficients[i] * green_h_dz(config.poles[i], z);
    return d;
}

std::vector<CoverPoint> make_symmetric_pole_set(const std::vector<CoverPoint>& poles) {
    std::vector<CoverPoint> out = poles;
    for (const CoverPoint& p : poles) out.push_back(p.invert());
    std::sort(out.begin(), out.end(),
              [](const CoverPoint& a, const CoverPoint& b) { return a.modulus < b.modulus; });
    // drop duplicates from self-symmetric inputs (|p| = 1)
    std::vector<CoverPoint> uniq;
    for (const CoverPoint& p : out) {
        if (!uniq.empty() && std::abs(uniq.back().modulus - p.modulus) < 1e-15 &&
            std::abs(uniq.back().argument - p.argument) < 1e-15)
            continue;
        uniq.push_back(p);
    }
    return uniq;
}

} // namespace helixlab
