#include <doctest.h>

#include <stdexcept>

#include <string>

#include "dfem/config.hpp"

using namespace dfem;

TEST_CASE("minimal config fills the documented defaults") {
    const RunConfig cfg = parse_config(R"({"alpha": 1})");
    CHECK(cfg.alpha == 1.0);
    CHECK(cfg.R0 == 1.0);
    CHECK(cfg.mesh.h == 0.05);
    CHECK(cfg.mesh.grading == 2.0);
    CHECK(cfg.solver.tol == 1e-10);
    CHECK(cfg.checks.ks == std::vector<int>{4, 8, 16, 32});
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("alpha out of range names the constraint") {
    try {
        parse_config(R"({"alpha": 2.5})");
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("alpha must lie in (0,2)") != std::string::npos);
    }
}

TEST_CASE("unknown keys are hard errors naming the key") {
    try {
        parse_config(R"({"aplha": 1})");
        FAIL("expected an unknown-key error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("aplha") != std::string::npos);
    }
}

TEST_CASE("full document parses and validates") {
    const RunConfig cfg = parse_config(R"({
        "alpha": 0.75,
        "N": 2,
        "R0": 2.0,
        "mesh.h": 0.1,
        "mesh.grading": 3,
        "solver.tol": 1e-9,
        "solver.max_iter": 500,
        "solver.deterministic": true,
        "checks.ks": [4, 8],
        "checks.r_grid": [0.4, 0.8, 1.2],
        "checks.triples": [[0.4, 0.8, 1.6]],
        "checks.tol.three_sphere": 0.05,
        "checks.eta": 0.9,
        "regions.omega.center": [0.0, 0.0],
        "regions.omega.radius": 0.25,
        "regions.target.center": [0.6, 0.0],
        "regions.target.radius": 0.2,
        "regions.gamma": [0.0, 3.141592653589793],
        "propagation.r0": 0.2,
        "propagation.penalty": 1e5,
        "output_dir": "artifacts"
    })");
    CHECK(cfg.alpha == 0.75);
    CHECK(cfg.R0 == 2.0);
    CHECK(cfg.checks.triples.size() == 1);
    CHECK(cfg.regions.target_center.x == 0.6);
    CHECK(cfg.output_dir == "artifacts");
}

TEST_CASE("validation rejects inconsistent documents") {
    CHECK_THROWS_AS(parse_config(R"({"alpha": 1, "mesh.h": 2.0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 1, "checks.ks": [8, 4]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 1, "checks.triples": [[0.5, 0.4, 0.8]]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"alpha": 1, "output_dir": 7})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"([1,2,3])"), std::invalid_argument);
}

TEST_CASE("derived grids respect the domain") {
    const RunConfig cfg = parse_config(R"({"alpha": 1, "R0": 2.0})");
    const auto grid = cfg.effective_r_grid();
    CHECK(grid.size() == 20);
    CHECK(grid.front() >= 0.2 * 2.0 - 1e-12);
    CHECK(grid.back() <= 0.9 * 2.0 + 1e-12);
    for (const auto& t : cfg.effective_triples()) {
        CHECK(t[0] < t[1]);
        CHECK(t[1] < t[2]);
        CHECK(t[2] < 2.0);
    }
}
