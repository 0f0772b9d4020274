#include "helixlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helixlab/barriers.hpp"
#include "helixlab/errors.hpp"
#include "helixlab/estimates.hpp"
#include "helixlab/flux.hpp"
#include "helixlab/forces.hpp"
#include "helixlab/geometry.hpp"
#include "helixlab/grid.hpp"
#include "helixlab/mse.hpp"
#include "helixlab/residues.hpp"
#include "helixlab/sha256.hpp"

namespace helixlab {

namespace {

using nlohmann::json;

constexpr const char* kArtifactVersion = "0.1.0";

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

/// Collects run outputs; every file goes through here so the manifest lists
/// all of them with digests by construction.
class OutputWriter {
public:
    explicit OutputWriter(std::string dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        const std::string path = dir_ + "/" + name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ValidationError("cannot open for writing: " + path);
        os << content;
        if (!os) throw ValidationError("write failed: " + path);
        files_.emplace_back(name, sha256_hex(content));
    }

    void write_json(const std::string& name, const json& j) { write(name, canonical_dump(j)); }

    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string graph_csv(const DiscreteGraph& g) {
    std::string out = "sigma,theta,f\n";
    char buf[96];
    for (const auto& rec : g.records()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", rec[0], rec[1], rec[2]);
        out += buf;
    }
    return out;
}

ConformalMetric metric_from(const json& p) {
    if (!p.contains("metric")) return ConformalMetric::flat();
    const json& m = p.at("metric");
    if (m.at("kind").get<std::string>() == "sphere")
        return ConformalMetric::sphere(m.value("radius", 1.0));
    return ConformalMetric::flat();
}

GraphDomain domain_from(const json& d) {
    GraphDomain dom;
    dom.sigma0 = d.at("sigma").at(0).get<double>();
    dom.sigma1 = d.at("sigma").at(1).get<double>();
    dom.theta0 = d.at("theta").at(0).get<double>();
    dom.theta1 = d.at("theta").at(1).get<double>();
    dom.theta_periodic = d.value("periodic", false);
    if (d.contains("holes"))
        for (const json& h : d.at("holes")) {
            HoleSpec hole;
            hole.sigma_lo = h.at("sigma").at(0).get<double>();
            hole.sigma_hi = h.at("sigma").at(1).get<double>();
            hole.theta_lo = h.at("theta").at(0).get<double>();
            hole.theta_hi = h.at("theta").at(1).get<double>();
            dom.holes.push_back(hole);
        }
    return dom;
}

GridSpec spec_from(const json& g) {
    GridSpec spec;
    spec.n_sigma = g.at("n_sigma").get<int>();
    spec.n_theta = g.at("n_theta").get<int>();
    return spec;
}

DiscreteGraph surface_from(const json& s, const GraphDomain& dom, const GridSpec& spec) {
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "helicoid") return make_helicoid_graph(dom, spec, s.at("pitch").get<double>());
    if (kind == "catenoid") {
        const double shift = s.value("shift", 0.0);
        DiscreteGraph g(dom, spec, 0.0);
        g.sample([shift](const CoverPoint& q) { return catenoid_value(q.modulus) + shift; });
        return g;
    }
    if (kind == "zero") return DiscreteGraph(dom, spec, 0.0);
    return DiscreteGraph::from_records(dom, spec,
                                       DiscreteGraph::read_csv(s.at("path").get<std::string>()),
                                       0.0);
}

KillingFieldId field_from(const std::string& name) {
    if (name == "vertical") return KillingFieldId::Vertical;
    if (name == "chi_x") return KillingFieldId::ChiX;
    if (name == "chi_y") return KillingFieldId::ChiY;
    return KillingFieldId::ChiE;
}

bool cell_in_hole(const DiscreteGraph& g, int i, int j) {
    for (const SnappedHole& s : g.snapped_holes())
        if (i >= s.ilo && i + 1 <= s.ihi && j >= s.jlo && j + 1 <= s.jhi) return true;
    return false;
}

/// Marching-squares level curves of the graph, emitted as plot-ready planar
/// segments (level, x1, y1, x2, y2).
std::string level_set_csv(const DiscreteGraph& g, int n_levels) {
    std::string out = "level,x1,y1,x2,y2\n";
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& rec : g.records()) {
        lo = std::min(lo, rec[2]);
        hi = std::max(hi, rec[2]);
    }
    if (!(hi > lo)) return out;

    const bool periodic = g.domain().theta_periodic;
    const int ncs = g.spec().n_sigma, nct = g.spec().n_theta;
    char buf[200];
    auto planar = [&](double sig, double th) {
        return std::pair<double, double>{std::exp(sig) * std::cos(th),
                                         std::exp(sig) * std::sin(th)};
    };
    for (int L = 0; L < n_levels; ++L) {
        const double level = lo + (hi - lo) * (L + 1.0) / (n_levels + 1.0);
        for (int i = 0; i < ncs; ++i)
            for (int j = 0; j < nct; ++j) {
                if (cell_in_hole(g, i, j)) continue;
                const int jn = periodic ? (j + 1) % g.cols() : j + 1;
                // corners counterclockwise in the chart
                const double v[4] = {g.value(i, j), g.value(i, jn), g.value(i + 1, jn),
                                     g.value(i + 1, j)};
                const double sg[4] = {g.sigma(i), g.sigma(i), g.sigma(i + 1), g.sigma(i + 1)};
                const double th[4] = {g.theta(j), g.theta(j) + g.h_theta(),
                                      g.theta(j) + g.h_theta(), g.theta(j)};
                std::pair<double, double> pts[4];
                int edge_of[4];
                int found = 0;
                for (int k = 0; k < 4; ++k) {
                    const double a = v[k], b = v[(k + 1) % 4];
                    if ((a < level) == (b < level)) continue;
                    const double s = (level - a) / (b - a);
                    const double ps = sg[k] + s * (sg[(k + 1) % 4] - sg[k]);
                    const double pt = th[k] + s * (th[(k + 1) % 4] - th[k]);
                    pts[found] = planar(ps, pt);
                    edge_of[found] = k;
                    ++found;
                }
                auto emit = [&](int a, int b) {
                    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", level,
                                  pts[a].first, pts[a].second, pts[b].first, pts[b].second);
                    out += buf;
                };
                if (found == 2) {
                    emit(0, 1);
                } else if (found == 4) {
                    // saddle cell: separate by the side the center lies on
                    const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    (void)edge_of;
                    if ((center < level) == (v[0] < level)) {
                        emit(0, 1);
                        emit(2, 3);
                    } else {
                        emit(1, 2);
                        emit(3, 0);
                    }
                }
            }
    }
    return out;
}

std::map<std::string, bool> run_solve(const json& p, OutputWriter& out) {
    MseProblem prob;
    prob.metric = metric_from(p);
    prob.domain = domain_from(p.at("domain"));
    prob.grid = spec_from(p.at("grid"));
    prob.pitch = p.value("pitch", 0.0);

    const double pitch = prob.pitch;
    auto make_bc = [pitch](const json& b) -> BoundaryCondition {
        const std::string kind = b.at("kind").get<std::string>();
        if (kind == "helicoid")
            return dirichlet(
                [pitch](const CoverPoint& q) { return helicoid_value(pitch, q.argument); });
        if (kind == "catenoid")
            return dirichlet([](const CoverPoint& q) { return catenoid_value(q.modulus); });
        if (kind == "constant") {
            const double v = b.at("value").get<double>();
            return dirichlet([v](const CoverPoint&) { return v; });
        }
        return neumann_zero();
    };
    const json& bcs = p.at("boundaries");
    prob.edges[Edge::SigmaMin] = make_bc(bcs.at("sigma_min"));
    prob.edges[Edge::SigmaMax] = make_bc(bcs.at("sigma_max"));
    if (!prob.domain.theta_periodic) {
        prob.edges[Edge::ThetaMin] = make_bc(bcs.at("theta_min"));
        prob.edges[Edge::ThetaMax] = make_bc(bcs.at("theta_max"));
    }
    if (p.contains("hole_levels"))
        for (const json& v : p.at("hole_levels")) {
            const double lv = v.get<double>();
            prob.hole_values.push_back([lv](const CoverPoint&) { return lv; });
        }

    SolveOptions opts;
    if (p.contains("solver")) {
        const json& s = p.at("solver");
        opts.tol = s.value("tol", 1e-10);
        opts.max_iter = static_cast<int>(s.value("max_iter", 50));
        opts.damping = s.value("damping", 0.5);
        if (s.value("initial", "harmonic") == std::string("zero"))
            opts.initial = SolveOptions::Initial::Zero;
    }

    const SolveResult res = solve_minimal_graph(prob, opts);
    out.write("solution.csv", graph_csv(res.graph));
    const int n_levels =
        p.contains("level_sets") ? p.at("level_sets").at("count").get<int>() : 9;
    out.write("level_sets.csv", level_set_csv(res.graph, n_levels));
    out.write_json("solve_report.json",
                   json{{"newton_iterations", res.newton_iterations},
                        {"final_residual", res.final_residual},
                        {"max_principle_ok", res.max_principle_ok},
                        {"max_principle_excess", res.max_principle_excess}});
    return {{"converged", true}, {"max_principle", res.max_principle_ok}};
}

std::map<std::string, bool> run_flux(const json& p, OutputWriter& out) {
    const ConformalMetric metric = metric_from(p);
    const GraphDomain dom = domain_from(p.at("domain"));
    const GridSpec spec = spec_from(p.at("grid"));
    const DiscreteGraph graph = surface_from(p.at("surface"), dom, spec);
    const std::string field_name = p.at("field").get<std::string>();
    const KillingFieldId field = field_from(field_name);
    const std::string method_name = p.value("method", "exact");
    const std::string method = method_name == "complex" ? "complex_leading" : "exact_conormal";
    const double tol = p.value("tol", 1e-12);

    json circle_reports = json::array();
    std::vector<double> values;
    for (const json& c : p.at("circles")) {
        CircleSpec circ;
        circ.center = Complex(c.at("center").at(0).get<double>(),
                              c.at("center").at(1).get<double>());
        circ.radius = c.at("radius").get<double>();
        circ.branch = static_cast<int>(c.value("branch", 0));
        const FluxReport fr = flux_on_circle(graph, metric, circ, field, method, tol);
        values.push_back(fr.value);
        circle_reports.push_back({{"center", complex_json(circ.center)},
                                  {"radius", circ.radius},
                                  {"branch", circ.branch},
                                  {"value", fr.value},
                                  {"method", fr.method},
                                  {"curve_length", fr.curve_length},
                                  {"max_gradient", fr.max_gradient},
                                  {"quadrature_points", fr.quadrature_points}});
    }
    json rep{{"field", field_name}, {"method", method_name}, {"circles", circle_reports}};
    if (values.size() >= 2) rep["difference_first_two"] = std::abs(values[0] - values[1]);
    out.write_json("flux_report.json", rep);

    if (p.contains("sweep")) {
        const json& s = p.at("sweep");
        const double lo = s.at("radius_range").at(0).get<double>();
        const double hi = s.at("radius_range").at(1).get<double>();
        const int count = s.at("count").get<int>();
        Complex center(0, 0);
        if (s.contains("center"))
            center = Complex(s.at("center").at(0).get<double>(),
                             s.at("center").at(1).get<double>());
        std::string csv = "radius,value\n";
        for (int k = 0; k < count; ++k) {
            const double r = lo * std::exp(std::log(hi / lo) * k / (count - 1));
            CircleSpec circ;
            circ.center = center;
            circ.radius = r;
            const FluxReport fr = flux_on_circle(graph, metric, circ, field, method, tol);
            csv += format_g17(r) + "," + format_g17(fr.value) + "\n";
        }
        out.write("flux_sweep.csv", csv);
    }
    return {{"quadrature_converged", true}};
}

std::map<std::string, bool> run_force(const json& p, OutputWriter& out) {
    NeckConfiguration cfg;
    cfg.heights = p.at("heights").get<std::vector<double>>();
    cfg.masses = p.at("masses").get<std::vector<double>>();
    const std::vector<double> forces = net_forces(cfg);
    json rep{{"heights", cfg.heights},
             {"masses", cfg.masses},
             {"forces", forces},
             {"first_force", forces.front()}};
    std::map<std::string, bool> verdicts{{"first_force_positive", forces.front() > 0}};

    double eq_residual = -1.0;
    if (p.value("find_equilibrium", false)) {
        double tol = 1e-10;
        int max_iter = 100;
        if (p.contains("equilibrium")) {
            tol = p.at("equilibrium").value("tol", 1e-10);
            max_iter = static_cast<int>(p.at("equilibrium").value("max_iter", 100));
        }
        const EquilibriumResult eq = find_equilibrium(cfg, tol, max_iter);
        rep["equilibrium"] = json{{"converged", eq.converged},
                                  {"iterations", eq.iterations},
                                  {"heights", eq.config.heights},
                                  {"forces", eq.forces},
                                  {"max_abs_force", eq.max_abs_force},
                                  {"first_force_history", eq.first_force_history}};
        verdicts["equilibrium_converged"] = eq.converged;
        if (!eq.converged) eq_residual = eq.max_abs_force;
    }
    out.write_json("force_report.json", rep);
    if (eq_residual >= 0)
        throw ConvergenceError("the equilibrium search stalled; the report holds the last state",
                               eq_residual);

    if (p.contains("landscape")) {
        const json& l = p.at("landscape");
        const int index = l.at("index").get<int>();
        const double lo = l.at("range").at(0).get<double>();
        const double hi = l.at("range").at(1).get<double>();
        const int count = l.at("count").get<int>();
        std::string csv = "height,net_force,first_force\n";
        for (int k = 0; k < count; ++k) {
            const double y = lo + (hi - lo) * k / (count - 1);
            NeckConfiguration varied = cfg;
            varied.heights[index] = y;
            const std::vector<double> f = net_forces(varied);
            csv += format_g17(y) + "," + format_g17(f[index]) + "," + format_g17(f[0]) + "\n";
        }
        out.write("force_landscape.csv", csv);
    }
    return verdicts;
}

std::map<std::string, bool> run_residue(const json& p, OutputWriter& out) {
    const CoverPoint pole(p.at("pole").at("modulus").get<double>(),
                          p.at("pole").at("argument").get<double>());
    const bool weighted = p.value("weighted", false);
    const double radius = p.value("radius", pole.modulus / 4);
    const double tol = p.value("tol", 1e-10);
    const Complex closed = residue_log_pole(pole.z(), weighted);
    const Complex pz = pole.z();
    auto kernel = [weighted, pz](Complex z) -> Complex {
        const Complex lg = std::log(z / pz);  // principal branch: z stays near the pole
        if (weighted) return (1.0 - z * z) / (4.0 * z * z) / (lg * lg);
        return 1.0 / lg;
    };
    const Complex quad = contour_residue(kernel, pz, radius, tol);
    const double diff = std::abs(quad - closed);
    out.write_json("residue_report.json",
                   json{{"pole", {{"modulus", pole.modulus}, {"argument", pole.argument}}},
                        {"weighted", weighted},
                        {"radius", radius},
                        {"closed_form", complex_json(closed)},
                        {"quadrature", complex_json(quad)},
                        {"difference", diff}});
    return {{"residue_matches", diff <= tol * std::max(1.0, std::abs(closed))}};
}

std::map<std::string, bool> run_barrier(const json& p, OutputWriter& out) {
    std::map<std::string, bool> verdicts;
    json t_reports = json::array();
    bool all_props = true;
    for (const double t : p.at("t_values").get<std::vector<double>>()) {
        const BarrierPropertyReport r = check_barrier_properties(t);
        all_props = all_props && r.all();
        t_reports.push_back({{"t", t},
                             {"positive", r.positive},
                             {"inversion_symmetric", r.inversion_symmetric},
                             {"circle_floor", r.circle_floor},
                             {"far_angle_floor", r.far_angle_floor},
                             {"log_bound", r.log_bound}});
    }
    json rep{{"slide_properties", t_reports}};
    verdicts["slide_barrier_properties"] = all_props;

    CoverPoint zlim(1.0, kPi / 4);
    if (p.contains("limit_point"))
        zlim = CoverPoint(p.at("limit_point").at("modulus").get<double>(),
                          p.at("limit_point").at("argument").get<double>());
    std::vector<double> t_seq;
    for (int e = 1; e <= 8; ++e) t_seq.push_back(std::pow(10.0, -e));
    const std::vector<double> errs = barrier_limit_errors(zlim, t_seq);
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i)
        if (!(errs[i] < errs[i - 1])) decreasing = false;
    rep["small_t_limit"] = json{
        {"point", {{"modulus", zlim.modulus}, {"argument", zlim.argument}}},
        {"t_values", t_seq},
        {"errors", errs}};
    verdicts["small_t_limit"] = decreasing && errs.back() <= 0.05;

    if (p.contains("poles") && !p.at("poles").empty()) {
        std::vector<CoverPoint> poles;
        for (const json& q : p.at("poles"))
            poles.emplace_back(q.at("modulus").get<double>(), q.at("argument").get<double>());
        const double C2 = calibrate_C2(poles);
        const double margin = barrier_g_margin(poles, C2);
        rep["comparison_barrier"] = json{{"C2", C2}, {"margin", margin}};
        verdicts["comparison_barrier"] = margin >= 0;
    }

    if (p.contains("profile")) {
        const double t = p.at("profile").at("t").get<double>();
        const int count = p.at("profile").at("count").get<int>();
        std::string csv = "theta,H\n";
        for (int k = 0; k < count; ++k) {
            const double th = 4.0 * kPi * (k + 0.5) / count;
            csv += format_g17(th) + "," + format_g17(barrier_H(t, CoverPoint(t, th))) + "\n";
        }
        out.write("barrier_profile.csv", csv);
    }
    out.write_json("barrier_report.json", rep);
    return verdicts;
}

std::map<std::string, bool> run_height(const json& p, OutputWriter& out) {
    const ConformalMetric metric = metric_from(p);
    const double r1 = p.at("r1").get<double>();
    const double r2 = p.at("r2").get<double>();
    GraphDomain dom;
    dom.sigma0 = std::log(r1);
    dom.sigma1 = std::log(r2);
    dom.theta0 = 0.0;
    dom.theta1 = kTwoPi;
    dom.theta_periodic = true;
    const GridSpec spec = spec_from(p.at("grid"));

    DiscreteGraph graph = [&]() -> DiscreteGraph {
        if (p.contains("surface") && p.at("surface").at("kind").get<std::string>() == "csv")
            return DiscreteGraph::from_records(
                dom, spec, DiscreteGraph::read_csv(p.at("surface").at("path").get<std::string>()),
                0.0);
        double shift = -catenoid_value(r2);
        if (p.contains("surface") && p.at("surface").contains("shift"))
            shift = p.at("surface").at("shift").get<double>();
        DiscreteGraph g(dom, spec, 0.0);
        g.sample([shift](const CoverPoint& q) { return catenoid_value(q.modulus) + shift; });
        return g;
    }();

    const HeightReport hr = height_bound_check(graph, metric, p.value("level_tol", 1e-9),
                                               p.value("grad_tol", 1e-8));
    json rep{{"r1", hr.r1},
             {"r2", hr.r2},
             {"drop", hr.drop},
             {"flux", hr.flux},
             {"bound", hr.bound},
             {"bound_holds", hr.bound_holds},
             {"energy", hr.energy},
             {"energy_bound", hr.energy_bound},
             {"energy_holds", hr.energy_holds},
             {"sup_gradient", hr.sup_gradient}};
    std::map<std::string, bool> verdicts{{"height_bound", hr.bound_holds},
                                         {"energy_bound", hr.energy_holds}};

    if (p.contains("good_circle")) {
        const json& g = p.at("good_circle");
        std::optional<CoverPoint> center;
        if (g.contains("center"))
            center = CoverPoint(g.at("center").at("modulus").get<double>(),
                                g.at("center").at("argument").get<double>());
        const GoodCircleReport gc = good_circle(
            graph, center, g.at("r_lo").get<double>(), g.at("r_hi").get<double>(), hr.flux,
            dom.sigma1 - dom.sigma0, static_cast<int>(g.value("n_radii", 256)),
            static_cast<int>(g.value("n_samples", 512)));
        rep["good_circle"] = json{{"best_radius", gc.best_radius},
                                  {"best_integral", gc.best_integral},
                                  {"bound", gc.bound},
                                  {"holds", gc.holds}};
        verdicts["good_circle"] = gc.holds;
        std::string csv = "radius,gradient_integral\n";
        for (const auto& [r, F] : gc.profile)
            csv += format_g17(r) + "," + format_g17(F) + "\n";
        out.write("circle_sweep.csv", csv);
    }
    out.write_json("height_report.json", rep);
    return verdicts;
}

std::map<std::string, bool> run_area(const json& p, OutputWriter& out) {
    const ConformalMetric metric = metric_from(p);
    const GraphDomain dom = domain_from(p.at("domain"));
    const GridSpec spec = spec_from(p.at("grid"));
    const DiscreteGraph graph = surface_from(p.at("surface"), dom, spec);
    const json& w = p.at("window");
    const AreaBoundReport ar = area_bound_check(
        graph, metric, w.at("f").at(0).get<double>(), w.at("f").at(1).get<double>(),
        w.at("theta").at(0).get<double>(), w.at("theta").at(1).get<double>());
    out.write_json("area_report.json", json{{"area", ar.area},
                                            {"vertical_term", ar.vertical_term},
                                            {"rotational_term", ar.rotational_term},
                                            {"slack", ar.slack},
                                            {"rhs", ar.rhs},
                                            {"holds", ar.holds},
                                            {"window", w}});
    return {{"area_bound", ar.holds}};
}

std::map<std::string, bool> run_census(const json& p, OutputWriter& out) {
    const int k = p.at("k").get<int>();
    const CensusResult c = y_surface_census(k);
    out.write_json("census_report.json", json{{"axis_points", c.axis_points},
                                              {"components", c.components},
                                              {"genus", c.genus},
                                              {"ends", c.ends}});
    bool identity = 2 - k == 2 * c.components - 2 * c.genus - c.ends;
    if (p.contains("sweep_max")) {
        const int k_max = p.at("sweep_max").get<int>();
        std::string csv = "axis_points,components,genus,ends\n";
        for (int kk = 0; kk <= k_max; ++kk) {
            const CensusResult cc = y_surface_census(kk);
            identity = identity && (2 - kk == 2 * cc.components - 2 * cc.genus - cc.ends);
            csv += std::to_string(kk) + "," + std::to_string(cc.components) + "," +
                   std::to_string(cc.genus) + "," + std::to_string(cc.ends) + "\n";
        }
        out.write("census_sweep.csv", csv);
    }
    return {{"euler_identity", identity}};
}

std::map<std::string, bool> run_scan(const json& p, std::uint64_t seed, OutputWriter& out) {
    const int n = p.at("n_necks").get<int>();
    const std::size_t samples = p.at("samples").get<std::size_t>();
    const ScanReport rep = positivity_scan(n, samples, seed);
    out.write_json("scan_report.json",
                   json{{"n_necks", n},
                        {"samples", rep.samples},
                        {"seed", seed},
                        {"min_first_force", rep.min_first_force},
                        {"argmin", {{"heights", rep.argmin.heights},
                                    {"masses", rep.argmin.masses}}}});
    return {{"first_force_positive", rep.min_first_force > 0}};
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(config.output_dir);
    OutputWriter out(config.output_dir);

    std::map<std::string, bool> verdicts;
    const json& p = config.parameters;
    if (config.command == "solve")
        verdicts = run_solve(p, out);
    else if (config.command == "flux")
        verdicts = run_flux(p, out);
    else if (config.command == "force")
        verdicts = run_force(p, out);
    else if (config.command == "residue")
        verdicts = run_residue(p, out);
    else if (config.command == "barrier")
        verdicts = run_barrier(p, out);
    else if (config.command == "height")
        verdicts = run_height(p, out);
    else if (config.command == "area")
        verdicts = run_area(p, out);
    else if (config.command == "census")
        verdicts = run_census(p, out);
    else if (config.command == "scan")
        verdicts = run_scan(p, config.seed, out);
    else
        throw ValidationError("unknown command: " + config.command);

    RunManifest manifest;
    manifest.artifact_version = kArtifactVersion;
    manifest.command = config.command;
    manifest.config_echo = config.canonical;
    manifest.verdicts = std::move(verdicts);
    manifest.files = out.files();
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(manifest, config.output_dir);
    return manifest;
}

}  // namespace helixlab
