#include "helixlab/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <vector>

#include "helixlab/errors.hpp"
#include "helixlab/geometry.hpp"

namespace helixlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ValidationError("config field '" + path + "': " + msg);
}

std::string sub(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(sub(path, it.key()), "unknown key");
    }
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(sub(path, key), "missing required field");
    return j.at(key);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
}

double get_number(const json& j, const std::string& path, const char* key) {
    return as_number(member(j, path, key), sub(path, key));
}

double get_number_or(const json& j, const std::string& path, const char* key, double def) {
    if (!j.contains(key)) return def;
    return as_number(j.at(key), sub(path, key));
}

long long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "must be an integer");
    return v.get<long long>();
}

long long get_integer(const json& j, const std::string& path, const char* key) {
    return as_integer(member(j, path, key), sub(path, key));
}

long long get_integer_or(const json& j, const std::string& path, const char* key, long long def) {
    if (!j.contains(key)) return def;
    return as_integer(j.at(key), sub(path, key));
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_string()) fail(sub(path, key), "must be a string");
    return v.get<std::string>();
}

void get_bool_or(const json& j, const std::string& path, const char* key) {
    if (j.contains(key) && !j.at(key).is_boolean()) fail(sub(path, key), "must be a boolean");
}

std::pair<double, double> as_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "must be a [lo, hi] pair");
    return {as_number(v.at(0), path + "[0]"), as_number(v.at(1), path + "[1]")};
}

std::pair<double, double> get_range(const json& j, const std::string& path, const char* key) {
    const auto [lo, hi] = as_pair(member(j, path, key), sub(path, key));
    if (!(lo < hi)) fail(sub(path, key), "range must be increasing");
    return {lo, hi};
}

void validate_metric(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"kind", "radius"});
    const std::string kind = get_string(j, path, "kind");
    if (kind == "flat") {
        if (j.contains("radius")) fail(sub(path, "radius"), "only spherical metrics take a radius");
    } else if (kind == "sphere") {
        if (!(get_number_or(j, path, "radius", 1.0) > 0))
            fail(sub(path, "radius"), "must be positive");
    } else {
        fail(sub(path, "kind"), "must be 'flat' or 'sphere'");
    }
}

std::size_t validate_domain(const json& j, const std::string& path, bool* periodic_out = nullptr) {
    require_object(j, path);
    check_keys(j, path, {"sigma", "theta", "periodic", "holes"});
    get_range(j, path, "sigma");
    get_range(j, path, "theta");
    get_bool_or(j, path, "periodic");
    if (periodic_out) *periodic_out = j.value("periodic", false);
    std::size_t n_holes = 0;
    if (j.contains("holes")) {
        const json& holes = j.at("holes");
        if (!holes.is_array()) fail(sub(path, "holes"), "must be an array");
        for (std::size_t k = 0; k < holes.size(); ++k) {
            const std::string hp = sub(path, "holes[" + std::to_string(k) + "]");
            require_object(holes.at(k), hp);
            check_keys(holes.at(k), hp, {"sigma", "theta"});
            get_range(holes.at(k), hp, "sigma");
            get_range(holes.at(k), hp, "theta");
        }
        n_holes = holes.size();
    }
    return n_holes;
}

void validate_grid(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"n_sigma", "n_theta"});
    if (get_integer(j, path, "n_sigma") < 4) fail(sub(path, "n_sigma"), "must be at least 4");
    if (get_integer(j, path, "n_theta") < 4) fail(sub(path, "n_theta"), "must be at least 4");
}

void validate_pole(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"modulus", "argument"});
    if (!(get_number(j, path, "modulus") > 0)) fail(sub(path, "modulus"), "must be positive");
    get_number(j, path, "argument");
}

void validate_surface(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string kind =
        j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "helicoid") {
        check_keys(j, path, {"kind", "pitch"});
        get_number(j, path, "pitch");
    } else if (kind == "catenoid") {
        check_keys(j, path, {"kind", "shift"});
        get_number_or(j, path, "shift", 0.0);
    } else if (kind == "zero") {
        check_keys(j, path, {"kind"});
    } else if (kind == "csv") {
        check_keys(j, path, {"kind", "path"});
        get_string(j, path, "path");
    } else {
        fail(sub(path, "kind"), "must be one of helicoid|catenoid|zero|csv");
    }
}

void validate_boundary_condition(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string kind =
        j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "constant") {
        check_keys(j, path, {"kind", "value"});
        get_number(j, path, "value");
    } else if (kind == "helicoid" || kind == "catenoid" || kind == "neumann") {
        check_keys(j, path, {"kind"});
    } else {
        fail(sub(path, "kind"), "must be one of helicoid|catenoid|constant|neumann");
    }
}

void validate_solve(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path,
               {"metric", "domain", "grid", "pitch", "boundaries", "hole_levels", "solver",
                "level_sets"});
    if (p.contains("metric")) validate_metric(p.at("metric"), sub(path, "metric"));
    bool periodic = false;
    const std::size_t n_holes =
        validate_domain(member(p, path, "domain"), sub(path, "domain"), &periodic);
    validate_grid(member(p, path, "grid"), sub(path, "grid"));
    get_number_or(p, path, "pitch", 0.0);

    const json& bc = member(p, path, "boundaries");
    const std::string bpath = sub(path, "boundaries");
    require_object(bc, bpath);
    check_keys(bc, bpath, {"sigma_min", "sigma_max", "theta_min", "theta_max"});
    validate_boundary_condition(member(bc, bpath, "sigma_min"), sub(bpath, "sigma_min"));
    validate_boundary_condition(member(bc, bpath, "sigma_max"), sub(bpath, "sigma_max"));
    if (periodic) {
        if (bc.contains("theta_min") || bc.contains("theta_max"))
            fail(bpath, "periodic domains take no theta boundaries");
    } else {
        validate_boundary_condition(member(bc, bpath, "theta_min"), sub(bpath, "theta_min"));
        validate_boundary_condition(member(bc, bpath, "theta_max"), sub(bpath, "theta_max"));
    }

    if (p.contains("hole_levels")) {
        const json& hl = p.at("hole_levels");
        if (!hl.is_array()) fail(sub(path, "hole_levels"), "must be an array");
        for (std::size_t k = 0; k < hl.size(); ++k)
            as_number(hl.at(k), sub(path, "hole_levels[" + std::to_string(k) + "]"));
        if (hl.size() != n_holes)
            fail(sub(path, "hole_levels"), "needs one level per hole");
    } else if (n_holes > 0) {
        fail(sub(path, "hole_levels"), "missing required field");
    }

    if (p.contains("solver")) {
        const json& s = p.at("solver");
        const std::string spath = sub(path, "solver");
        require_object(s, spath);
        check_keys(s, spath, {"tol", "max_iter", "damping", "initial"});
        if (!(get_number_or(s, spath, "tol", 1e-10) > 0)) fail(sub(spath, "tol"), "must be positive");
        if (get_integer_or(s, spath, "max_iter", 50) < 1)
            fail(sub(spath, "max_iter"), "must be at least 1");
        const double damping = get_number_or(s, spath, "damping", 0.5);
        if (!(damping > 0 && damping <= 1)) fail(sub(spath, "damping"), "must lie in (0, 1]");
        if (s.contains("initial")) {
            const std::string init = get_string(s, spath, "initial");
            if (init != "harmonic" && init != "zero")
                fail(sub(spath, "initial"), "must be 'harmonic' or 'zero'");
        }
    }

    if (p.contains("level_sets")) {
        const json& ls = p.at("level_sets");
        const std::string lpath = sub(path, "level_sets");
        require_object(ls, lpath);
        check_keys(ls, lpath, {"count"});
        const long long count = get_integer(ls, lpath, "count");
        if (count < 1 || count > 64) fail(sub(lpath, "count"), "must lie in [1, 64]");
    }
}

void validate_flux(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path,
               {"metric", "surface", "domain", "grid", "field", "method", "circles", "tol",
                "sweep"});
    std::string metric_kind = "flat";
    if (p.contains("metric")) {
        validate_metric(p.at("metric"), sub(path, "metric"));
        metric_kind = p.at("metric").value("kind", "flat");
    }
    validate_surface(member(p, path, "surface"), sub(path, "surface"));
    validate_domain(member(p, path, "domain"), sub(path, "domain"));
    validate_grid(member(p, path, "grid"), sub(path, "grid"));

    const std::string field = get_string(p, path, "field");
    if (field != "vertical" && field != "chi_x" && field != "chi_y" && field != "chi_e")
        fail(sub(path, "field"), "must be one of vertical|chi_x|chi_y|chi_e");
    if (field != "vertical" && metric_kind != "sphere")
        fail(sub(path, "field"), "horizontal fields need the spherical metric");

    std::string method = "exact";
    if (p.contains("method")) {
        method = get_string(p, path, "method");
        if (method != "exact" && method != "complex")
            fail(sub(path, "method"), "must be 'exact' or 'complex'");
    }
    if (field == "vertical" && method == "complex")
        fail(sub(path, "method"), "the complex method applies to horizontal fields");

    const json& circles = member(p, path, "circles");
    if (!circles.is_array() || circles.empty())
        fail(sub(path, "circles"), "must be a non-empty array");
    for (std::size_t k = 0; k < circles.size(); ++k) {
        const std::string cpath = sub(path, "circles[" + std::to_string(k) + "]");
        const json& c = circles.at(k);
        require_object(c, cpath);
        check_keys(c, cpath, {"center", "radius", "branch"});
        as_pair(member(c, cpath, "center"), sub(cpath, "center"));
        if (!(get_number(c, cpath, "radius") > 0)) fail(sub(cpath, "radius"), "must be positive");
        get_integer_or(c, cpath, "branch", 0);
    }

    if (!(get_number_or(p, path, "tol", 1e-12) > 0)) fail(sub(path, "tol"), "must be positive");

    if (p.contains("sweep")) {
        const json& s = p.at("sweep");
        const std::string spath = sub(path, "sweep");
        require_object(s, spath);
        check_keys(s, spath, {"radius_range", "count", "center"});
        const auto [lo, hi] = get_range(s, spath, "radius_range");
        if (!(lo > 0)) fail(sub(spath, "radius_range"), "radii must be positive");
        const long long count = get_integer(s, spath, "count");
        if (count < 2 || count > 100000) fail(sub(spath, "count"), "must lie in [2, 100000]");
        if (s.contains("center")) as_pair(s.at("center"), sub(spath, "center"));
    }
}

void validate_force(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"heights", "masses", "find_equilibrium", "equilibrium", "landscape"});
    const json& hs = member(p, path, "heights");
    if (!hs.is_array() || hs.empty()) fail(sub(path, "heights"), "must be a non-empty array");
    std::vector<double> heights;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const double v = as_number(hs.at(k), sub(path, "heights[" + std::to_string(k) + "]"));
        if (!(v > 0)) fail(sub(path, "heights"), "heights must be positive");
        if (!heights.empty() && !(v > heights.back()))
            fail(sub(path, "heights"), "heights must be strictly increasing");
        heights.push_back(v);
    }
    const json& ms = member(p, path, "masses");
    if (!ms.is_array() || ms.size() != hs.size())
        fail(sub(path, "masses"), "needs one mass per height");
    for (std::size_t k = 0; k < ms.size(); ++k)
        if (!(as_number(ms.at(k), sub(path, "masses[" + std::to_string(k) + "]")) > 0))
            fail(sub(path, "masses"), "masses must be positive");
    get_bool_or(p, path, "find_equilibrium");

    if (p.contains("equilibrium")) {
        const json& e = p.at("equilibrium");
        const std::string epath = sub(path, "equilibrium");
        require_object(e, epath);
        check_keys(e, epath, {"tol", "max_iter"});
        if (!(get_number_or(e, epath, "tol", 1e-10) > 0)) fail(sub(epath, "tol"), "must be positive");
        if (get_integer_or(e, epath, "max_iter", 100) < 1)
            fail(sub(epath, "max_iter"), "must be at least 1");
    }

    if (p.contains("landscape")) {
        const json& l = p.at("landscape");
        const std::string lpath = sub(path, "landscape");
        require_object(l, lpath);
        check_keys(l, lpath, {"index", "range", "count"});
        const long long index = get_integer(l, lpath, "index");
        if (index < 0 || index >= static_cast<long long>(heights.size()))
            fail(sub(lpath, "index"), "must index a height");
        const auto [lo, hi] = get_range(l, lpath, "range");
        if (!(lo > 0)) fail(sub(lpath, "range"), "heights must be positive");
        if (index > 0 && !(lo > heights[index - 1]))
            fail(sub(lpath, "range"), "range must stay above the previous height");
        if (index + 1 < static_cast<long long>(heights.size()) && !(hi < heights[index + 1]))
            fail(sub(lpath, "range"), "range must stay below the next height");
        const long long count = get_integer(l, lpath, "count");
        if (count < 2 || count > 100000) fail(sub(lpath, "count"), "must lie in [2, 100000]");
    }
}

void validate_residue(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"pole", "weighted", "radius", "tol"});
    validate_pole(member(p, path, "pole"), sub(path, "pole"));
    get_bool_or(p, path, "weighted");
    const double modulus = p.at("pole").at("modulus").get<double>();
    const double radius = get_number_or(p, path, "radius", modulus / 4);
    if (!(radius > 0 && radius < modulus))
        fail(sub(path, "radius"), "must lie in (0, pole modulus)");
    if (!(get_number_or(p, path, "tol", 1e-10) > 0)) fail(sub(path, "tol"), "must be positive");
}

void validate_barrier(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"t_values", "poles", "limit_point", "profile"});
    const json& ts = member(p, path, "t_values");
    if (!ts.is_array() || ts.empty()) fail(sub(path, "t_values"), "must be a non-empty array");
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double t = as_number(ts.at(k), sub(path, "t_values[" + std::to_string(k) + "]"));
        if (!(t > 0 && t < 1)) fail(sub(path, "t_values"), "values must lie in (0, 1)");
    }
    if (p.contains("poles")) {
        const json& poles = p.at("poles");
        if (!poles.is_array()) fail(sub(path, "poles"), "must be an array");
        for (std::size_t k = 0; k < poles.size(); ++k) {
            const std::string pp = sub(path, "poles[" + std::to_string(k) + "]");
            validate_pole(poles.at(k), pp);
            const double m = poles.at(k).at("modulus").get<double>();
            const double a = poles.at(k).at("argument").get<double>();
            if (!(m <= 1)) fail(sub(pp, "modulus"), "must not exceed 1");
            if (!(a > 0 && a < kPi)) fail(sub(pp, "argument"), "must lie in (0, pi)");
        }
    }
    if (p.contains("limit_point")) validate_pole(p.at("limit_point"), sub(path, "limit_point"));
    if (p.contains("profile")) {
        const json& pr = p.at("profile");
        const std::string ppath = sub(path, "profile");
        require_object(pr, ppath);
        check_keys(pr, ppath, {"t", "count"});
        const double t = get_number(pr, ppath, "t");
        if (!(t > 0 && t < 1)) fail(sub(ppath, "t"), "must lie in (0, 1)");
        const long long count = get_integer(pr, ppath, "count");
        if (count < 16 || count > 100000) fail(sub(ppath, "count"), "must lie in [16, 100000]");
    }
}

void validate_height(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path,
               {"metric", "r1", "r2", "grid", "surface", "level_tol", "grad_tol", "good_circle"});
    if (p.contains("metric")) validate_metric(p.at("metric"), sub(path, "metric"));
    const double r1 = get_number(p, path, "r1");
    const double r2 = get_number(p, path, "r2");
    if (!(r1 > 0)) fail(sub(path, "r1"), "must be positive");
    if (!(r2 > r1)) fail(sub(path, "r2"), "must exceed r1");
    validate_grid(member(p, path, "grid"), sub(path, "grid"));
    if (p.contains("surface")) {
        validate_surface(p.at("surface"), sub(path, "surface"));
        const std::string kind = p.at("surface").value("kind", "");
        if (kind == "helicoid" || kind == "zero")
            fail(sub(path, "surface.kind"), "the height check takes catenoid or csv surfaces");
        if (kind == "catenoid" && !(r1 >= 1))
            fail(sub(path, "r1"), "catenoid surfaces need r1 >= 1");
    } else if (!(r1 >= 1)) {
        fail(sub(path, "r1"), "catenoid surfaces need r1 >= 1");
    }
    if (!(get_number_or(p, path, "level_tol", 1e-9) > 0))
        fail(sub(path, "level_tol"), "must be positive");
    if (!(get_number_or(p, path, "grad_tol", 1e-8) > 0))
        fail(sub(path, "grad_tol"), "must be positive");
    if (p.contains("good_circle")) {
        const json& g = p.at("good_circle");
        const std::string gpath = sub(path, "good_circle");
        require_object(g, gpath);
        check_keys(g, gpath, {"center", "r_lo", "r_hi", "n_radii", "n_samples"});
        if (g.contains("center")) validate_pole(g.at("center"), sub(gpath, "center"));
        const double lo = get_number(g, gpath, "r_lo");
        const double hi = get_number(g, gpath, "r_hi");
        if (!(lo > 0)) fail(sub(gpath, "r_lo"), "must be positive");
        if (!(hi > lo)) fail(sub(gpath, "r_hi"), "must exceed r_lo");
        if (get_integer_or(g, gpath, "n_radii", 256) < 2)
            fail(sub(gpath, "n_radii"), "must be at least 2");
        if (get_integer_or(g, gpath, "n_samples", 512) < 8)
            fail(sub(gpath, "n_samples"), "must be at least 8");
    }
}

void validate_area(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"metric", "domain", "grid", "surface", "window"});
    if (p.contains("metric")) validate_metric(p.at("metric"), sub(path, "metric"));
    bool periodic = false;
    validate_domain(member(p, path, "domain"), sub(path, "domain"), &periodic);
    if (periodic) fail(sub(path, "domain.periodic"), "the area estimate needs a single-valued angle");
    validate_grid(member(p, path, "grid"), sub(path, "grid"));
    validate_surface(member(p, path, "surface"), sub(path, "surface"));
    const json& w = member(p, path, "window");
    const std::string wpath = sub(path, "window");
    require_object(w, wpath);
    check_keys(w, wpath, {"f", "theta"});
    get_range(w, wpath, "f");
    get_range(w, wpath, "theta");
}

void validate_census(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"k", "sweep_max"});
    if (get_integer(p, path, "k") < 0) fail(sub(path, "k"), "must be nonnegative");
    if (p.contains("sweep_max") && get_integer(p, path, "sweep_max") < 0)
        fail(sub(path, "sweep_max"), "must be nonnegative");
}

void validate_scan(const json& p) {
    const std::string path = "parameters";
    check_keys(p, path, {"n_necks", "samples"});
    const long long n = get_integer(p, path, "n_necks");
    if (n < 1 || n > 16) fail(sub(path, "n_necks"), "must lie in [1, 16]");
    const long long s = get_integer(p, path, "samples");
    if (s < 1 || s > 100000000) fail(sub(path, "samples"), "must lie in [1, 1e8]");
}

}  // namespace

ExperimentConfig validate_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config root must be a JSON object");
    check_keys(j, "", {"command", "parameters", "output_dir", "seed"});
    if (!j.contains("command")) fail("command", "missing required field");
    if (!j.at("command").is_string()) fail("command", "must be a string");

    ExperimentConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    cfg.parameters = json::object();
    if (j.contains("parameters")) {
        require_object(j.at("parameters"), "parameters");
        cfg.parameters = j.at("parameters");
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) fail("output_dir", "must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (s.is_number_unsigned())
            cfg.seed = s.get<std::uint64_t>();
        else if (s.is_number_integer() && s.get<long long>() >= 0)
            cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
        else
            fail("seed", "must be a nonnegative integer");
    }

    if (cfg.command == "solve")
        validate_solve(cfg.parameters);
    else if (cfg.command == "flux")
        validate_flux(cfg.parameters);
    else if (cfg.command == "force")
        validate_force(cfg.parameters);
    else if (cfg.command == "residue")
        validate_residue(cfg.parameters);
    else if (cfg.command == "barrier")
        validate_barrier(cfg.parameters);
    else if (cfg.command == "height")
        validate_height(cfg.parameters);
    else if (cfg.command == "area")
        validate_area(cfg.parameters);
    else if (cfg.command == "census")
        validate_census(cfg.parameters);
    else if (cfg.command == "scan")
        validate_scan(cfg.parameters);
    else
        fail("command",
             "unknown command '" + cfg.command +
                 "' (expected solve|flux|force|residue|barrier|height|area|census|scan)");

    cfg.canonical = json{
        {"command", cfg.command}, {"parameters", cfg.parameters}, {"seed", cfg.seed}};
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return validate_config(ss.str());
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace helixlab
