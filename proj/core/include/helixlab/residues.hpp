#pragma once

#include <functional>
#include <vector>

#include "helixlab/barriers.hpp"
#include "helixlab/geometry.hpp"

namespace helixlab {

/// (1/2 pi i) times the contour integral of fn over the ccw circle
/// C(center, radius). Trapezoid rule with point doubling (64 .. 2^16) until
/// two successive values agree within tol * max(1, |value|).
Complex contour_residue(const std::function<Complex(Complex)>& fn, Complex center, double radius,
                        double tol = 1e-12);

/// Closed-form residues at z = p of the logarithmic kernels:
///   weighted = false:  Res_p 1/(log z - log p)               = p,
///   weighted = true:   Res_p (1-z^2)/(4 z^2 (log z - log p)^2) = -(1+p^2)/(4p).
Complex residue_log_pole(Complex p, bool weighted);

/// Closed disk in the plane.
struct Disk {
    Complex center = 0.0;
    double radius = 1.0;
};

/// Annular-type domain D(0, R) minus closed disks D(p_i, r_i).
struct LaurentDomain {
    double R = 1.0;
    std::vector<Disk> holes;

    /// Throws DomainError unless the closed holes are pairwise disjoint and
    /// strictly inside D(0, R), each with positive radius.
    void validate() const;
    /// True if z is strictly inside the domain with the given margin.
    bool contains(Complex z, double margin = 0.0) const;
};

/// Decomposition g = g_outer + sum_i g_hole_i + correction of a C^1 function
/// on a multiply connected domain:
///   a_k     = (1/2 pi i) contour_{C(0,R)}  g(z) / z^{k+1} dz        (k = 0..K)
///   a_{i,k} = (1/2 pi i) contour_{C(p_i,r_i)} g(z) (z-p_i)^{k-1} dz (k = 1..K)
///   correction(z) = (1/2 pi i) int_domain g_zbar(w)/(w-z) dw ^ dwbar
/// so that g(z) = eval_outer(z) + sum_i eval_hole(i, z) + correction(z)
/// for z in the domain. For holomorphic g the correction vanishes.
class LaurentSeries {
  public:
    LaurentSeries(LaurentDomain domain, std::vector<Complex> outer,
                  std::vector<std::vector<Complex>> inner,
                  std::function<Complex(Complex)> dbar);

    const LaurentDomain& domain() const { return domain_; }
    int truncation() const { return static_cast<int>(outer_.size()) - 1; }

    /// a_k for k = 0..K.
    const std::vector<Complex>& outer_coeffs() const { return outer_; }
    /// a_{i,k} for k = 1..K (index k-1).
    const std::vector<Complex>& inner_coeffs(std::size_t i) const { return inner_.at(i); }

    /// Magnitude of the last retained coefficient, per series.
    double outer_tail() const;
    double inner_tail(std::size_t i) const;

    /// Truncated outer series sum a_k z^k; pass k_max < 0 for all terms.
    Complex eval_outer(Complex z, int k_max = -1) const;
    /// Truncated principal series sum a_{i,k} (z-p_i)^{-k}.
    Complex eval_hole(std::size_t i, Complex z, int k_max = -1) const;

    /// Area-integral correction term, evaluated by adaptive quadrature over
    /// the full outer disk minus the full holes; requires the supplied
    /// d/dzbar derivative to be evaluable on the closed outer disk (holes
    /// included). tol is the successive-refinement agreement target.
    Complex correction(Complex z, double tol = 1e-6) const;

    /// eval_outer + sum eval_hole + correction: reproduces g(z) in the domain.
    Complex reconstruct(Complex z, double tol = 1e-6, int k_max = -1) const;

  private:
    LaurentDomain domain_;
    std::vector<Complex> outer_;
    std::vector<std::vector<Complex>> inner_;
    std::function<Complex(Complex)> dbar_;
};

/// Compute the series coefficients of the decomposition above for a C^1
/// function g with Wirtinger derivative dbar = dg/dzbar, truncated at K.
LaurentSeries laurent_decompose(const std::function<Complex(Complex)>& g,
                                const std::function<Complex(Complex)>& dbar,
                                const LaurentDomain& domain, int K = 30, double tol = 1e-12);

/// Both evaluations of the neck force integral around the lowest pole
/// p_1 = i y_1 of a limit configuration (poles on the positive imaginary
/// axis, moduli strictly increasing):
///   contour_value = -Re contour_{C(p_1, eps)} (u~_z)^2 (1 - z^2) dz,
///   closed_form   = (pi (y_1^2+1) / 2 y_1) * [ c_1^2 (1-y_1^2)/(1+y_1^2)
///                   + sum_{i>=2} c_1 c_i f(y_1, y_i) ]
/// with f the pairwise kernel of the force module.
struct ForceIntegral {
    double contour_value = 0.0;
    double closed_form = 0.0;
};

ForceIntegral force_integral_case1(const LimitConfig& config, double eps, double tol = 1e-12);

} // namespace helixlab
