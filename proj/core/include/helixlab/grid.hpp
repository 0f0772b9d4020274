#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "helixlab/geometry.hpp"

namespace helixlab {

/// Axis-aligned rectangle in (sigma, theta) removed from the domain.
/// Edges are snapped to the nearest grid lines at graph construction.
struct HoleSpec {
    double sigma_lo = 0, sigma_hi = 0;
    double theta_lo = 0, theta_hi = 0;
};

/// Rectangle [sigma0, sigma1] x [theta0, theta1] of the universal cover in
/// log-polar coordinates (sigma = log|z|, theta = arg z), minus holes.
/// With theta_periodic the theta extent is one period and the theta edges
/// are identified.
struct GraphDomain {
    double sigma0 = 0, sigma1 = 1;
    double theta0 = 0, theta1 = kTwoPi;
    bool theta_periodic = false;
    std::vector<HoleSpec> holes;
};

/// Cell counts per direction. Nodes: n+1 per direction (n for periodic theta).
struct GridSpec {
    int n_sigma = 8;
    int n_theta = 8;
};

enum class NodeClass : unsigned char {
    Interior,
    OuterBoundary,
    HoleRim,
    Excluded, // strictly inside a hole; holds no data
};

struct SnappedHole {
    int ilo = 0, ihi = 0, jlo = 0, jhi = 0;
};

/// f sampled on the log-polar grid, row-major with sigma as the slow index.
class DiscreteGraph {
public:
    DiscreteGraph(GraphDomain domain, GridSpec spec, double pitch = 0.0);

    const GraphDomain& domain() const { return domain_; }
    const GridSpec& spec() const { return spec_; }
    double pitch() const { return pitch_; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double h_sigma() const { return h_sigma_; }
    double h_theta() const { return h_theta_; }
    double sigma(int i) const { return domain_.sigma0 + i * h_sigma_; }
    double theta(int j) const { return domain_.theta0 + j * h_theta_; }
    CoverPoint point(int i, int j) const { return {std::exp(sigma(i)), theta(j)}; }

    double value(int i, int j) const { return values_[index(i, j)]; }
    double& value(int i, int j) { return values_[index(i, j)]; }
    /// Neighbor access with periodic wrap in j.
    double value_wrapped(int i, int j) const;

    NodeClass node_class(int i, int j) const { return cls_[index(i, j)]; }
    /// Index of the hole whose rim the node lies on (node_class == HoleRim).
    int rim_hole(int i, int j) const;
    const std::vector<SnappedHole>& snapped_holes() const { return snapped_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

    /// Fill all non-excluded nodes from a callable on the cover.
    void sample(const std::function<double(const CoverPoint&)>& f);

    /// Derivatives with respect to the grid coordinates at an interior node,
    /// second-order central stencils.
    struct NodeDerivs {
        double fs, ft, fss, ftt, fst;
    };
    NodeDerivs node_derivs(int i, int j) const;

    /// Cell-centered (f_sigma, f_theta) bilinearly interpolated at a cover
    /// point; the query must keep a one-cell margin from all boundaries.
    struct Gradient {
        double fs, ft;
    };
    Gradient interpolate_gradient(double sigma, double theta) const;

    /// Bilinear interpolation of the node values; the four surrounding nodes
    /// must not be excluded.
    double interpolate_value(double sigma, double theta) const;

    /// Cartesian gradient (f_x, f_y) at a cover point, from the interpolated
    /// grid-coordinate gradient and the exact chart transform.
    Complex gradient_xy(const CoverPoint& p) const;

    /// True when the point admits gradient interpolation (one-cell margin).
    bool contains_with_margin(double sigma, double theta) const;

    void write_csv(const std::string& path) const;
    static std::vector<std::array<double, 3>> read_csv(const std::string& path);
    static DiscreteGraph from_records(GraphDomain domain, GridSpec spec,
                                      const std::vector<std::array<double, 3>>& records,
                                      double pitch = 0.0);
    /// The (sigma, theta, f) triples in serialization order.
    std::vector<std::array<double, 3>> records() const;

private:
    void classify();
    void invalidate_gradient_cache() const { grad_cache_valid_ = false; }
    void build_gradient_cache() const;
    double wrap_theta(double theta) const;

    GraphDomain domain_;
    GridSpec spec_;
    double pitch_ = 0.0;
    int rows_ = 0, cols_ = 0;
    double h_sigma_ = 0, h_theta_ = 0;
    std::vector<double> values_;
    std::vector<NodeClass> cls_;
    std::vector<SnappedHole> snapped_;

    // cell-centered gradients, rebuilt lazily after value edits
    mutable bool grad_cache_valid_ = false;
    mutable std::vector<double> cell_fs_, cell_ft_;
    mutable std::vector<unsigned char> cell_valid_;

public:
    /// Call after editing values through value(i,j)& to refresh interpolation.
    void mark_values_changed() { invalidate_gradient_cache(); }
};

/// Convenience samplers for the two reference surfaces.
DiscreteGraph make_helicoid_graph(const GraphDomain& domain, const GridSpec& spec, double pitch);
DiscreteGraph make_catenoid_graph(const GraphDomain& domain, const GridSpec& spec);

} // namespace helixlab
