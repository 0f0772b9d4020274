#include "helixlab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace helixlab {

namespace {

int snap_index(double coord, double origin, double h, const char* what, int n) {
    const double u = (coord - origin) / h;
    const int i = static_cast<int>(std::lround(u));
    if (i < 0 || i > n)
        throw ValidationError(std::string("hole ") + what + " lies outside the domain");
    return i;
}

} // namespace

DiscreteGraph::DiscreteGraph(GraphDomain domain, GridSpec spec, double pitch)
    : domain_(std::move(domain)), spec_(spec), pitch_(pitch) {
    if (!(domain_.sigma1 > domain_.sigma0) || !(domain_.theta1 > domain_.theta0))
        throw ValidationError("domain ranges must be increasing");
    if (spec_.n_sigma < 1 || spec_.n_theta < 1)
        throw ValidationError("grid needs at least one cell per direction");

    const int interior_sigma = spec_.n_sigma - 1;
    const int interior_theta = domain_.theta_periodic ? spec_.n_theta : spec_.n_theta - 1;
    if (interior_sigma < 4 || interior_theta < 4)
        throw ValidationError("under-resolved grid: fewer than 4 interior points in a direction");

    rows_ = spec_.n_sigma + 1;
    cols_ = domain_.theta_periodic ? spec_.n_theta : spec_.n_theta + 1;
    h_sigma_ = (domain_.sigma1 - domain_.sigma0) / spec_.n_sigma;
    h_theta_ = (domain_.theta1 - domain_.theta0) / spec_.n_theta;

    for (const HoleSpec& h : domain_.holes) {
        SnappedHole s;
        s.ilo = snap_index(h.sigma_lo, domain_.sigma0, h_sigma_, "sigma_lo", spec_.n_sigma);
        s.ihi = snap_index(h.sigma_hi, domain_.sigma0, h_sigma_, "sigma_hi", spec_.n_sigma);
        s.jlo = snap_index(h.theta_lo, domain_.theta0, h_theta_, "theta_lo", spec_.n_theta);
        s.jhi = snap_index(h.theta_hi, domain_.theta0, h_theta_, "theta_hi", spec_.n_theta);
        if (s.ihi - s.ilo < 1 || s.jhi - s.jlo < 1)
            throw ValidationError("hole snaps to an empty rectangle");
        if (s.ilo < 2 || s.ihi > spec_.n_sigma - 2)
            throw ValidationError("hole touches the sigma boundary");
        const int jmax = domain_.theta_periodic ? spec_.n_theta - 2 : spec_.n_theta - 2;
        if (s.jlo < 2 || s.jhi > jmax)
            throw ValidationError("hole touches the theta boundary");
        snapped_.push_back(s);
    }
    for (std::size_t a = 0; a < snapped_.size(); ++a)
        for (std::size_t b = a + 1; b < snapped_.size(); ++b) {
            const SnappedHole& p = snapped_[a];
            const SnappedHole& q = snapped_[b];
            const bool sep = p.ihi + 1 < q.ilo || q.ihi + 1 < p.ilo ||
                             p.jhi + 1 < q.jlo || q.jhi + 1 < p.jlo;
            if (!sep) throw ValidationError("holes overlap or touch");
        }

    values_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
    cls_.assign(values_.size(), NodeClass::Interior);
    classify();
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (cls_[k] == NodeClass::Excluded)
            values_[k] = std::numeric_limits<double>::quiet_NaN();
}

void DiscreteGraph::classify() {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            NodeClass c = NodeClass::Interior;
            if (i == 0 || i == rows_ - 1) c = NodeClass::OuterBoundary;
            if (!domain_.theta_periodic && (j == 0 || j == cols_ - 1)) c = NodeClass::OuterBoundary;
            for (const SnappedHole& s : snapped_) {
                if (i >= s.ilo && i <= s.ihi && j >= s.jlo && j <= s.jhi) {
                    const bool inside = i > s.ilo && i < s.ihi && j > s.jlo && j < s.jhi;
                    c = inside ? NodeClass::Excluded : NodeClass::HoleRim;
                }
            }
            cls_[index(i, j)] = c;
        }
}

int DiscreteGraph::rim_hole(int i, int j) const {
    for (std::size_t k = 0; k < snapped_.size(); ++k) {
        const SnappedHole& s = snapped_[k];
        if (i >= s.ilo && i <= s.ihi && j >= s.jlo && j <= s.jhi) return static_cast<int>(k);
    }
    return -1;
}

double DiscreteGraph::value_wrapped(int i, int j) const {
    if (domain_.theta_periodic) {
        j = ((j % cols_) + cols_) % cols_;
    }
    return value(i, j);
}

void DiscreteGraph::sample(const std::function<double(const CoverPoint&)>& f) {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (cls_[index(i, j)] != NodeClass::Excluded)
                values_[index(i, j)] = f(point(i, j));
    invalidate_gradient_cache();
}

DiscreteGraph::NodeDerivs DiscreteGraph::node_derivs(int i, int j) const {
    if (node_class(i, j) != NodeClass::Interior)
        throw DomainError("node derivatives are defined at interior nodes only");
    const double c = value(i, j);
    const double e = value_wrapped(i + 1, j), w = value_wrapped(i - 1, j);
    const double n = value_wrapped(i, j + 1), s = value_wrapped(i, j - 1);
    const double ne = value_wrapped(i + 1, j + 1), nw = value_wrapped(i - 1, j + 1);
    const double se = value_wrapped(i + 1, j - 1), sw = value_wrapped(i - 1, j - 1);
    NodeDerivs d;
    d.fs = (e - w) / (2 * h_sigma_);
    d.ft = (n - s) / (2 * h_theta_);
    d.fss = (e - 2 * c + w) / (h_sigma_ * h_sigma_);
    d.ftt = (n - 2 * c + s) / (h_theta_ * h_theta_);
    d.fst = (ne - nw - se + sw) / (4 * h_sigma_ * h_theta_);
    return d;
}

void DiscreteGraph::build_gradient_cache() const {
    const int ncs = spec_.n_sigma;
    const int nct = spec_.n_theta;
    cell_fs_.assign(static_cast<std::size_t>(ncs) * nct, 0.0);
    cell_ft_.assign(cell_fs_.size(), 0.0);
    cell_valid_.assign(cell_fs_.size(), 1);
    for (int i = 0; i < ncs; ++i)
        for (int j = 0; j < nct; ++j) {
            const std::size_t q = static_cast<std::size_t>(i) * nct + j;
            for (const SnappedHole& s : snapped_)
                if (i >= s.ilo && i + 1 <= s.ihi && j >= s.jlo && j + 1 <= s.jhi)
                    cell_valid_[q] = 0;
            if (!cell_valid_[q]) continue;
            const int jn = domain_.theta_periodic ? (j + 1) % cols_ : j + 1;
            const double v00 = value(i, j), v01 = value(i, jn);
            const double v10 = value(i + 1, j), v11 = value(i + 1, jn);
            cell_fs_[q] = (v10 + v11 - v00 - v01) / (2 * h_sigma_);
            cell_ft_[q] = (v01 + v11 - v00 - v10) / (2 * h_theta_);
        }
    grad_cache_valid_ = true;
}

double DiscreteGraph::wrap_theta(double theta) const {
    if (!domain_.theta_periodic) return theta;
    const double period = domain_.theta1 - domain_.theta0;
    double u = std::fmod(theta - domain_.theta0, period);
    if (u < 0) u += period;
    return domain_.theta0 + u;
}

bool DiscreteGraph::contains_with_margin(double sig, double theta) const {
    if (sig < domain_.sigma0 + 0.5 * h_sigma_ || sig > domain_.sigma1 - 0.5 * h_sigma_)
        return false;
    const double th = wrap_theta(theta);
    if (!domain_.theta_periodic &&
        (th < domain_.theta0 + 0.5 * h_theta_ || th > domain_.theta1 - 0.5 * h_theta_))
        return false;
    // the four dual-grid cells feeding the interpolation must all be valid
    if (!grad_cache_valid_) build_gradient_cache();
    const int nct = spec_.n_theta;
    const double us = (sig - domain_.sigma0) / h_sigma_ - 0.5;
    const double ut = (th - domain_.theta0) / h_theta_ - 0.5;
    int i0 = static_cast<int>(std::floor(us));
    int j0 = static_cast<int>(std::floor(ut));
    for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj) {
            int i = std::min(std::max(i0 + di, 0), spec_.n_sigma - 1);
            int j = j0 + dj;
            if (domain_.theta_periodic)
                j = ((j % nct) + nct) % nct;
            else
                j = std::min(std::max(j, 0), nct - 1);
            if (!cell_valid_[static_cast<std::size_t>(i) * nct + j]) return false;
        }
    return true;
}

DiscreteGraph::Gradient DiscreteGraph::interpolate_gradient(double sig, double theta) const {
    if (!contains_with_margin(sig, theta))
        throw DomainError("gradient query outside the domain's one-cell margin");
    const double th = wrap_theta(theta);
    const int nct = spec_.n_theta;
    double us = (sig - domain_.sigma0) / h_sigma_ - 0.5;
    double ut = (th - domain_.theta0) / h_theta_ - 0.5;
    int i0 = static_cast<int>(std::floor(us));
    int j0 = static_cast<int>(std::floor(ut));
    double as = us - i0;
    double at = ut - j0;
    // clamp at the margin (queries half a cell from the edge)
    if (i0 < 0) { i0 = 0; as = 0.0; }
    if (i0 > spec_.n_sigma - 2) { i0 = spec_.n_sigma - 2; as = 1.0; }
    if (!domain_.theta_periodic) {
        if (j0 < 0) { j0 = 0; at = 0.0; }
        if (j0 > nct - 2) { j0 = nct - 2; at = 1.0; }
    }
    auto cell = [&](int i, int j) -> std::size_t {
        if (domain_.theta_periodic) j = ((j % nct) + nct) % nct;
        return static_cast<std::size_t>(i) * nct + j;
    };
    const std::size_t q00 = cell(i0, j0), q01 = cell(i0, j0 + 1);
    const std::size_t q10 = cell(i0 + 1, j0), q11 = cell(i0 + 1, j0 + 1);
    Gradient g;
    g.fs = (1 - as) * ((1 - at) * cell_fs_[q00] + at * cell_fs_[q01]) +
           as * ((1 - at) * cell_fs_[q10] + at * cell_fs_[q11]);
    g.ft = (1 - as) * ((1 - at) * cell_ft_[q00] + at * cell_ft_[q01]) +
           as * ((1 - at) * cell_ft_[q10] + at * cell_ft_[q11]);
    return g;
}

double DiscreteGraph::interpolate_value(double sig, double theta) const {
    if (sig < domain_.sigma0 - 1e-12 || sig > domain_.sigma1 + 1e-12)
        throw DomainError("value query outside the sigma range");
    const double th = wrap_theta(theta);
    if (!domain_.theta_periodic && (th < domain_.theta0 - 1e-12 || th > domain_.theta1 + 1e-12))
        throw DomainError("value query outside the theta range");
    double us = (sig - domain_.sigma0) / h_sigma_;
    double ut = (th - domain_.theta0) / h_theta_;
    int i0 = static_cast<int>(std::floor(us));
    int j0 = static_cast<int>(std::floor(ut));
    if (i0 < 0) i0 = 0;
    if (i0 > rows_ - 2) i0 = rows_ - 2;
    const int jmax = domain_.theta_periodic ? cols_ - 1 : cols_ - 2;
    if (j0 < 0) j0 = 0;
    if (j0 > jmax) j0 = jmax;
    const double as = std::min(std::max(us - i0, 0.0), 1.0);
    const double at = std::min(std::max(ut - j0, 0.0), 1.0);
    const int j1 = domain_.theta_periodic ? (j0 + 1) % cols_ : j0 + 1;
    for (int i : {i0, i0 + 1})
        for (int j : {j0, j1})
            if (node_class(i, j) == NodeClass::Excluded)
                throw DomainError("value query touches an excluded node");
    const double v00 = value(i0, j0), v01 = value(i0, j1);
    const double v10 = value(i0 + 1, j0), v11 = value(i0 + 1, j1);
    return (1 - as) * ((1 - at) * v00 + at * v01) + as * ((1 - at) * v10 + at * v11);
}

Complex DiscreteGraph::gradient_xy(const CoverPoint& p) const {
    const Gradient g = interpolate_gradient(std::log(p.modulus), p.argument);
    const double c = std::cos(p.argument), s = std::sin(p.argument);
    const double inv_r = 1.0 / p.modulus;
    return {inv_r * (c * g.fs - s * g.ft), inv_r * (s * g.fs + c * g.ft)};
}

std::vector<std::array<double, 3>> DiscreteGraph::records() const {
    std::vector<std::array<double, 3>> out;
    out.reserve(values_.size());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (node_class(i, j) != NodeClass::Excluded)
                out.push_back({sigma(i), theta(j), value(i, j)});
    return out;
}

void DiscreteGraph::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    os << "sigma,theta,f\n";
    char buf[96];
    for (const auto& rec : records()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rec[0], rec[1], rec[2]);
        os << buf;
    }
    if (!os) throw ValidationError("write failed: " + path);
}

std::vector<std::array<double, 3>> DiscreteGraph::read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "sigma,theta,f")
        throw ValidationError("bad CSV header in " + path);
    std::vector<std::array<double, 3>> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 3> rec{};
        char* end = nullptr;
        const char* s = line.c_str();
        for (int k = 0; k < 3; ++k) {
            rec[k] = std::strtod(s, &end);
            if (end == s) throw ValidationError("bad CSV row: " + line);
            s = end;
            if (k < 2) {
                if (*s != ',') throw ValidationError("bad CSV row: " + line);
                ++s;
            }
        }
        out.push_back(rec);
    }
    return out;
}

DiscreteGraph DiscreteGraph::from_records(GraphDomain domain, GridSpec spec,
                                          const std::vector<std::array<double, 3>>& records,
                                          double pitch) {
    DiscreteGraph g(std::move(domain), spec, pitch);
    std::size_t k = 0;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
            if (g.node_class(i, j) == NodeClass::Excluded) continue;
            if (k >= records.size()) throw ValidationError("CSV has too few rows for the grid");
            const auto& rec = records[k++];
            if (std::abs(rec[0] - g.sigma(i)) > 1e-9 || std::abs(rec[1] - g.theta(j)) > 1e-9)
                throw ValidationError("CSV coordinates do not match the grid");
            g.value(i, j) = rec[2];
        }
    if (k != records.size()) throw ValidationError("CSV has extra rows for the grid");
    g.mark_values_changed();
    return g;
}

DiscreteGraph make_helicoid_graph(const GraphDomain& domain, const GridSpec& spec, double pitch) {
    DiscreteGraph g(domain, spec, pitch);
    g.sample([pitch](const CoverPoint& p) { return helicoid_value(pitch, p.argument); });
    return g;
}

DiscreteGraph make_catenoid_graph(const GraphDomain& domain, const GridSpec& spec) {
    DiscreteGraph g(domain, spec, 0.0);
    g.sample([](const CoverPoint& p) { return catenoid_value(p.modulus); });
    return g;
}

} // namespace helixlab
