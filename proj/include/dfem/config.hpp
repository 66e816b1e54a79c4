#pragma once

#include <array>
#include <string>
#include <vector>

#include "dfem/geometry.hpp"

namespace dfem {

/// Flat configuration document with dotted keys; unknown keys are hard
/// errors. Defaults reproduce the baseline desk-scale setup.
struct RunConfig {
    double alpha = 1.0;
    int dimension = 2;
    double R0 = 1.0;

    struct MeshConfig {
        double h = 0.05;
        double grading = 2.0;
    } mesh;

    struct SolverConfig {
        double tol = 1e-10;
        int max_iter = 20000;
        bool deterministic = true;
    } solver;

    struct ChecksConfig {
        std::vector<int> ks = {4, 8, 16, 32};
        std::vector<double> r_grid;                  // empty: derived from R0
        std::vector<std::array<double, 3>> triples;  // empty: derived from R0
        double tol_three_sphere = 2e-2;
        double tol_frequency = 1e-2;
        double tol_identity = 5e-2;
        double caccioppoli_spread = 3.0;
        double eta = 0.5;
    } checks;

    struct RegionsConfig {
        Vec2 omega_center{0.0, 0.0};
        double omega_radius = 0.12;
        Vec2 target_center{0.3, 0.0};
        double target_radius = 0.1;
        double gamma_begin = 0.0;
        double gamma_end = kPi;
    } regions;

    struct PropagationConfig {
        double r0 = 0.1;
        double penalty = 1e6;
    } propagation;

    std::string output_dir = "out";

    void validate() const;
    std::vector<double> effective_r_grid() const;
    std::vector<std::array<double, 3>> effective_triples() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace dfem
