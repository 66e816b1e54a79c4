#include "dfem/config.hpp"

#include <set>
#include <stdexcept>

#include <json.hpp>

#include "dfem/io.hpp"

namespace dfem {

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("config: alpha must lie in (0,2)");
    if (dimension != 2)
        throw std::invalid_argument("config: N must be 2 for the FEM driver");
    if (!(R0 > 0.0)) throw std::invalid_argument("config: R0 must be positive");
    if (!(mesh.h > 0.0 && mesh.h < R0))
        throw std::invalid_argument("config: mesh.h must lie in (0, R0)");
    if (!(mesh.grading >= 1.0))
        throw std::invalid_argument("config: mesh.grading must be >= 1");
    if (!(solver.tol > 0.0)) throw std::invalid_argument("config: solver.tol must be positive");
    if (solver.max_iter < 1)
        throw std::invalid_argument("config: solver.max_iter must be positive");
    for (std::size_t i = 0; i + 1 < checks.ks.size(); ++i)
        if (checks.ks[i] >= checks.ks[i + 1])
            throw std::invalid_argument("config: checks.ks must increase strictly");
    for (int k : checks.ks)
        if (k < 1) throw std::invalid_argument("config: checks.ks must be positive");
    if (!(checks.tol_three_sphere > 0.0 && checks.tol_frequency > 0.0 &&
          checks.tol_identity > 0.0 && checks.caccioppoli_spread > 0.0))
        throw std::invalid_argument("config: tolerances must be positive");
    if (!(checks.eta > 0.0 && checks.eta < R0))
        throw std::invalid_argument("config: checks.eta must lie in (0, R0)");
    auto check_radius = [this](double r, const char* what) {
        if (!(r > 0.0 && r < R0))
            throw std::invalid_argument(std::string("config: ") + what +
                                        " must lie in (0, R0)");
    };
    check_radius(regions.omega_radius, "regions.omega.radius");
    check_radius(regions.target_radius, "regions.target.radius");
    check_radius(propagation.r0, "propagation.r0");
    for (double r : checks.r_grid) check_radius(r, "checks.r_grid entries");
    for (const auto& t : checks.triples) {
        if (!(0.0 < t[0] && t[0] < t[1] && t[1] < t[2] && t[2] < R0))
            throw std::invalid_argument("config: checks.triples must be ordered inside (0, R0)");
    }
    if (!(propagation.penalty > 0.0))
        throw std::invalid_argument("config: propagation.penalty must be positive");
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir must be nonempty");
}

std::vector<double> RunConfig::effective_r_grid() const {
    if (!checks.r_grid.empty()) return checks.r_grid;
    std::vector<double> grid;
    const int n = 20;
    for (int i = 0; i < n; ++i)
        grid.push_back(R0 * (0.2 + 0.7 * i / (n - 1.0)));
    return grid;
}

std::vector<std::array<double, 3>> RunConfig::effective_triples() const {
    if (!checks.triples.empty()) return checks.triples;
    std::vector<std::array<double, 3>> t;
    for (const auto& base : {std::array<double, 3>{0.2, 0.4, 0.8},
                             {0.25, 0.5, 0.75},
                             {0.3, 0.45, 0.9},
                             {0.2, 0.3, 0.45},
                             {0.3, 0.6, 0.9},
                             {0.2, 0.45, 0.9},
                             {0.4, 0.6, 0.9},
                             {0.25, 0.35, 0.7},
                             {0.2, 0.5, 0.8},
                             {0.35, 0.55, 0.85}})
        t.push_back({base[0] * R0, base[1] * R0, base[2] * R0});
    return t;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "alpha",
        "N",
        "R0",
        "mesh.h",
        "mesh.grading",
        "solver.tol",
        "solver.max_iter",
        "solver.deterministic",
        "checks.ks",
        "checks.r_grid",
        "checks.triples",
        "checks.tol.three_sphere",
        "checks.tol.frequency",
        "checks.tol.identity",
        "checks.caccioppoli_spread",
        "checks.eta",
        "regions.omega.center",
        "regions.omega.radius",
        "regions.target.center",
        "regions.target.radius",
        "regions.gamma",
        "propagation.r0",
        "propagation.penalty",
        "output_dir",
    };
    return keys;
}

double as_number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number())
        throw std::invalid_argument("config: key '" + key + "' must be a number");
    return v.get<double>();
}

Vec2 as_point(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument("config: key '" + key + "' must be a [x,y] pair");
    return {as_number(v[0], key), as_number(v[1], key)};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
        if (key == "alpha") cfg.alpha = as_number(value, key);
        else if (key == "N") cfg.dimension = static_cast<int>(as_number(value, key));
        else if (key == "R0") cfg.R0 = as_number(value, key);
        else if (key == "mesh.h") cfg.mesh.h = as_number(value, key);
        else if (key == "mesh.grading") cfg.mesh.grading = as_number(value, key);
        else if (key == "solver.tol") cfg.solver.tol = as_number(value, key);
        else if (key == "solver.max_iter")
            cfg.solver.max_iter = static_cast<int>(as_number(value, key));
        else if (key == "solver.deterministic") {
            if (!value.is_boolean())
                throw std::invalid_argument("config: key 'solver.deterministic' must be a bool");
            cfg.solver.deterministic = value.get<bool>();
        } else if (key == "checks.ks") {
            cfg.checks.ks.clear();
            for (const auto& v : value)
                cfg.checks.ks.push_back(static_cast<int>(as_number(v, key)));
        } else if (key == "checks.r_grid") {
            cfg.checks.r_grid.clear();
            for (const auto& v : value) cfg.checks.r_grid.push_back(as_number(v, key));
        } else if (key == "checks.triples") {
            cfg.checks.triples.clear();
            for (const auto& v : value) {
                if (!v.is_array() || v.size() != 3)
                    throw std::invalid_argument(
                        "config: checks.triples entries must be [r1,r2,r3]");
                cfg.checks.triples.push_back(
                    {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)});
            }
        } else if (key == "checks.tol.three_sphere")
            cfg.checks.tol_three_sphere = as_number(value, key);
        else if (key == "checks.tol.frequency")
            cfg.checks.tol_frequency = as_number(value, key);
        else if (key == "checks.tol.identity")
            cfg.checks.tol_identity = as_number(value, key);
        else if (key == "checks.caccioppoli_spread")
            cfg.checks.caccioppoli_spread = as_number(value, key);
        else if (key == "checks.eta") cfg.checks.eta = as_number(value, key);
        else if (key == "regions.omega.center")
            cfg.regions.omega_center = as_point(value, key);
        else if (key == "regions.omega.radius")
            cfg.regions.omega_radius = as_number(value, key);
        else if (key == "regions.target.center")
            cfg.regions.target_center = as_point(value, key);
        else if (key == "regions.target.radius")
            cfg.regions.target_radius = as_number(value, key);
        else if (key == "regions.gamma") {
            if (!value.is_array() || value.size() != 2)
                throw std::invalid_argument("config: regions.gamma must be [begin,end]");
            cfg.regions.gamma_begin = as_number(value[0], key);
            cfg.regions.gamma_end = as_number(value[1], key);
        } else if (key == "propagation.r0")
            cfg.propagation.r0 = as_number(value, key);
        else if (key == "propagation.penalty")
            cfg.propagation.penalty = as_number(value, key);
        else if (key == "output_dir") {
            if (!value.is_string())
                throw std::invalid_argument("config: output_dir must be a string");
            cfg.output_dir = value.get<std::string>();
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

}  // namespace dfem
