#include "helixlab/residues.hpp"

#include <cmath>
#include <utility>

#include "helixlab/errors.hpp"
#include "helixlab/forces.hpp"

namespace helixlab {

namespace {

constexpr int kMinContourPoints = 64;
constexpr int kMaxContourPoints = 1 << 16;

} // namespace

Complex contour_residue(const std::function<Complex(Complex)>& fn, Complex center, double radius,
                        double tol) {
    if (!(radius > 0.0)) throw ValidationError("contour radius must be positive");
    // (1/2 pi i) contour integral = (rho / N) sum fn(c + rho e^{i theta_j}) e^{i theta_j}
    auto value_at = [&](int n) {
        Complex acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double th = kTwoPi * j / n;
            const Complex e = std::polar(1.0, th);
            acc += fn(center + radius * e) * e;
        }
        return acc * (radius / n);
    };
    Complex prev = value_at(kMinContourPoints);
    for (int n = 2 * kMinContourPoints; n <= kMaxContourPoints; n *= 2) {
        const Complex cur = value_at(n);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("contour quadrature did not converge", std::abs(prev));
}

Complex residue_log_pole(Complex p, bool weighted) {
    if (p == Complex(0.0)) throw ValidationError("residue pole must be nonzero");
    if (!weighted) return p;
    return -(1.0 + p * p) / (4.0 * p);
}

void LaurentDomain::validate() const {
    if (!(R > 0.0)) throw DomainError("outer radius must be positive");
    for (std::size_t i = 0; i < holes.size(); ++i) {
        if (!(holes[i].radius > 0.0)) throw DomainError("hole radius must be positive");
        if (!(std::abs(holes[i].center) + holes[i].radius < R))
            throw DomainError("hole must be strictly inside the outer disk");
        for (std::size_t j = i + 1; j < holes.size(); ++j) {
            if (!(std::abs(holes[i].center - holes[j].center) >
                  holes[i].radius + holes[j].radius))
                throw DomainError("holes must be pairwise disjoint");
        }
    }
}

bool LaurentDomain::contains(Complex z, double margin) const {
    if (!(std::abs(z) < R - margin)) return false;
    for (const Disk& d : holes)
        if (!(std::abs(z - d.center) > d.radius + margin)) return false;
    return true;
}

LaurentSeries::LaurentSeries(LaurentDomain domain, std::vector<Complex> outer,
                             std::vector<std::vector<Complex>> inner,
                             std::function<Complex(Complex)> dbar)
    : domain_(std::move(domain)),
      outer_(std::move(outer)),
      inner_(std::move(inner)),
      dbar_(std::move(dbar)) {}

double LaurentSeries::outer_tail() const {
    return outer_.empty() ? 0.0 : std::abs(outer_.back());
}

double LaurentSeries::inner_tail(std::size_t i) const {
    const auto& c = inner_.at(i);
    return c.empty() ? 0.0 : std::abs(c.back());
}

Complex LaurentSeries::eval_outer(Complex z, int k_max) const {
    const int kk = (k_max < 0) ? static_cast<int>(outer_.size()) - 1
                               : std::min<int>(k_max, static_cast<int>(outer_.size()) - 1);
    Complex acc = 0.0, pw = 1.0;
    for (int k = 0; k <= kk; ++k) {
        acc += outer_[k] * pw;
        pw *= z;
    }
    return acc;
}

Complex LaurentSeries::eval_hole(std::size_t i, Complex z, int k_max) const {
    const auto& c = inner_.at(i);
    const int kk = (k_max < 0) ? static_cast<int>(c.size())
                               : std::min<int>(k_max, static_cast<int>(c.size()));
    const Complex inv = 1.0 / (z - domain_.holes.at(i).center);
    Complex acc = 0.0, pw = inv;
    for (int k = 1; k <= kk; ++k) {
        acc += c[k - 1] * pw;
        pw *= inv;
    }
    return acc;
}

namespace {

/// integral over D(c, rho) of F(w)/(w - z) dA(w), z strictly inside the disk:
/// fan rule centered at z, where the kernel reduces to e^{-i phi}.
Complex disk_kernel_inside(const std::function<Complex(Complex)>& F, Complex c, double rho,
                           Complex z, int n_phi, int n_s) {
    const Complex d = z - c;
    const double d2 = std::norm(d);
    Complex acc = 0.0;
    for (int j = 0; j < n_phi; ++j) {
        const double phi = kTwoPi * (j + 0.5) / n_phi;
        const Complex e = std::polar(1.0, phi);
        const double proj = d.real() * e.real() + d.imag() * e.imag();
        const double S = -proj + std::sqrt(std::max(0.0, rho * rho - d2 + proj * proj));
        Complex ray = 0.0;
        for (int m = 0; m < n_s; ++m) {
            const double s = S * (m + 0.5) / n_s;
            ray += F(z + s * e);
        }
        acc += ray * (S / n_s) * std::conj(e);
    }
    return acc * (kTwoPi / n_phi);
}

/// Same integral for z strictly outside the closed disk: plain polar rule
/// centered at the disk center (the kernel is smooth on the disk).
Complex disk_kernel_outside(const std::function<Complex(Complex)>& F, Complex c, double rho,
                            Complex z, int n_phi, int n_s) {
    Complex acc = 0.0;
    for (int j = 0; j < n_phi; ++j) {
        const double phi = kTwoPi * (j + 0.5) / n_phi;
        const Complex e = std::polar(1.0, phi);
        Complex ray = 0.0;
        for (int m = 0; m < n_s; ++m) {
            const double s = rho * (m + 0.5) / n_s;
            const Complex w = c + s * e;
            ray += F(w) / (w - z) * s;
        }
        acc += ray * (rho / n_s);
    }
    return acc * (kTwoPi / n_phi);
}

Complex disk_kernel_integral(const std::function<Complex(Complex)>& F, Complex c, double rho,
                             Complex z, double tol) {
    const bool inside = std::abs(z - c) < rho;
    auto value_at = [&](int level) {
        const int n_phi = 32 << level;
        const int n_s = 16 << level;
        return inside ? disk_kernel_inside(F, c, rho, z, n_phi, n_s)
                      : disk_kernel_outside(F, c, rho, z, n_phi, n_s);
    };
    Complex prev = value_at(0);
    for (int level = 1; level <= 7; ++level) {
        const Complex cur = value_at(level);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("area-term quadrature did not converge", std::abs(prev));
}

} // namespace

Complex LaurentSeries::correction(Complex z, double tol) const {
    if (!dbar_) throw ValidationError("series has no d/dzbar evaluator");
    if (!domain_.contains(z, 1e-12))
        throw DomainError("correction evaluation point must lie inside the domain");
    // (1/2 pi i) int g_zbar/(w-z) dw ^ dwbar = -(1/pi) int g_zbar/(w-z) dA,
    // split as full outer disk minus the full holes (dbar must extend there).
    Complex total = disk_kernel_integral(dbar_, 0.0, domain_.R, z, tol);
    for (const Disk& d : domain_.holes)
        total -= disk_kernel_integral(dbar_, d.center, d.radius, z, tol);
    return -total / kPi;
}

Complex LaurentSeries::reconstruct(Complex z, double tol, int k_max) const {
    Complex acc = eval_outer(z, k_max);
    for (std::size_t i = 0; i < inner_.size(); ++i) acc += eval_hole(i, z, k_max);
    return acc + correction(z, tol);
}

LaurentSeries laurent_decompose(const std::function<Complex(Complex)>& g,
                                const std::function<Complex(Complex)>& dbar,
                                const LaurentDomain& domain, int K, double tol) {
    domain.validate();
    if (K < 1) throw ValidationError("series truncation must be at least 1");

    // One circle's worth of coefficients at a fixed sample count. The outer
    // circle pairs g with e^{-ik theta} R^{-k}; a hole circle pairs it with
    // e^{+ik theta} r^{+k} (k shifted to 1..K).
    auto circle_coeffs = [](const std::function<Complex(Complex)>& fn, Complex center,
                            double radius, int n, int K_, bool outer_circle) {
        std::vector<Complex> coeff(outer_circle ? K_ + 1 : K_, Complex(0.0));
        for (int j = 0; j < n; ++j) {
            const double th = kTwoPi * j / n;
            const Complex e = std::polar(1.0, th);
            const Complex v = fn(center + radius * e);
            if (outer_circle) {
                Complex pw = 1.0; // e^{-i k theta} / R^k, k = 0
                for (int k = 0; k <= K_; ++k) {
                    coeff[k] += v * pw;
                    pw *= std::conj(e) / radius;
                }
            } else {
                Complex pw = e * radius; // e^{+i k theta} r^k, k = 1
                for (int k = 1; k <= K_; ++k) {
                    coeff[k - 1] += v * pw;
                    pw *= e * radius;
                }
            }
        }
        for (Complex& c : coeff) c /= static_cast<double>(n);
        return coeff;
    };

    auto all_coeffs = [&](int n) {
        std::pair<std::vector<Complex>, std::vector<std::vector<Complex>>> out;
        out.first = circle_coeffs(g, 0.0, domain.R, n, K, true);
        for (const Disk& d : domain.holes)
            out.second.push_back(circle_coeffs(g, d.center, d.radius, n, K, false));
        return out;
    };

    auto max_diff = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
        return m;
    };

    auto prev = all_coeffs(256);
    for (int n = 512; n <= kMaxContourPoints; n *= 2) {
        auto cur = all_coeffs(n);
        double d = max_diff(cur.first, prev.first);
        double scale = 1.0;
        for (const Complex& c : cur.first) scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < cur.second.size(); ++i) {
            d = std::max(d, max_diff(cur.second[i], prev.second[i]));
            for (const Complex& c : cur.second[i]) scale = std::max(scale, std::abs(c));
        }
        if (d <= tol * scale)
            return LaurentSeries(domain, std::move(cur.first), std::move(cur.second), dbar);
        prev = std::move(cur);
    }
    throw QuadratureError("coefficient quadrature did not converge", 0.0);
}

ForceIntegral force_integral_case1(const LimitConfig& config, double eps, double tol) {
    const std::size_t m = config.poles.size();
    if (m == 0) throw ValidationError("force integral needs at least one pole");
    if (config.coefficients.size() != m)
        throw ValidationError("limit configuration needs one coefficient per pole");
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(config.poles[i].argument - kPi / 2) > 1e-9)
            throw ValidationError("force poles must lie on the positive imaginary axis");
        y[i] = config.poles[i].modulus;
        if (i > 0 && !(y[i] > y[i - 1]))
            throw ValidationError("pole moduli must be strictly increasing");
    }
    if (!(eps > 0.0) || !(eps < y[0]))
        throw DomainError("contour radius must be positive and below the lowest pole");
    for (std::size_t i = 1; i < m; ++i)
        if (!(eps < (y[i] - y[i - 1]) / 2.0))
            throw DomainError("contour radius must be below half the minimal pole gap");

    const Complex p1(0.0, y[0]);
    auto integrand = [&](Complex w) {
        const CoverPoint cp(std::abs(w), std::arg(w));
        const Complex uz = limit_u_tilde_dz(config, cp);
        return uz * uz * (1.0 - w * w);
    };
    // -Re of (2 pi i) * residue = 2 pi * Im(residue)
    const Complex res = contour_residue(integrand, p1, eps, tol);
    ForceIntegral out;
    out.contour_value = kTwoPi * res.imag();

    const double y1 = y[0];
    const double c1 = config.coefficients[0];
    double bracket = c1 * c1 * (1.0 - y1 * y1) / (1.0 + y1 * y1);
    for (std::size_t i = 1; i < m; ++i)
        bracket += c1 * config.coefficients[i] * pairwise_kernel(y1, y[i]);
    out.closed_form = kPi * (y1 * y1 + 1.0) / (2.0 * y1) * bracket;
    return out;
}

} // namespace helixlab
