#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dfem/io.hpp"

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli_output.txt";
    const std::string cmd = std::string(DFEM_CLI_PATH) + " " + args + " > " +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WEXITSTATUS(status);
    r.output = dfem::read_text_file(log.string());
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dfem_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("unknown subcommand exits 2 with usage") {
    const auto dir = fresh_dir("usage");
    const CliRun r = run_cli("frobnicate", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("Usage") != std::string::npos);
}

TEST_CASE("mesh command writes the serialized mesh") {
    const auto dir = fresh_dir("mesh");
    const CliRun r = run_cli("mesh --h 0.2 --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "out" / "mesh.json"));
    const dfem::Mesh m =
        dfem::mesh_from_json(dfem::read_text_file((dir / "out" / "mesh.json").string()));
    CHECK(m.radius == 1.0);
}

TEST_CASE("hardy on the zero field passes with zero ratios") {
    const auto dir = fresh_dir("hardy");
    const CliRun r =
        run_cli("hardy --alpha 1 --field zero --h 0.2 --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("CHECK hardy PASS") != std::string::npos);
}

TEST_CASE("three-sphere spec example passes with positive margin") {
    const auto dir = fresh_dir("three");
    const CliRun r = run_cli(
        "three-sphere --alpha 1 --r 0.5,1,2 --field mode:l=1 --h 0.1 --out " +
            (dir / "out").string(),
        dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("CHECK three-sphere PASS") != std::string::npos);
    CHECK(r.output.find("margin=-") == std::string::npos);
}

TEST_CASE("config errors exit 2") {
    const auto dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"alpha": 2.5})";
    }
    const CliRun r = run_cli("mesh --config " + (dir / "bad.json").string(), dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("alpha must lie in (0,2)") != std::string::npos);

    {
        std::ofstream cfg(dir / "typo.json");
        cfg << R"({"aplha": 1.0})";
    }
    const CliRun r2 = run_cli("mesh --config " + (dir / "typo.json").string(), dir);
    CHECK(r2.exit_code == 2);
    CHECK(r2.output.find("aplha") != std::string::npos);
}

TEST_CASE("profile output is byte-identical across runs") {
    const auto dir = fresh_dir("determinism");
    const std::string args =
        "profile --alpha 1 --field random:seed=5 --h 0.15 --out " + (dir / "out").string();
    const CliRun r1 = run_cli(args, dir);
    REQUIRE(r1.exit_code == 0);
    const std::string first = dfem::read_text_file((dir / "out" / "profile.csv").string());
    const CliRun r2 = run_cli(args, dir);
    REQUIRE(r2.exit_code == 0);
    const std::string second = dfem::read_text_file((dir / "out" / "profile.csv").string());
    CHECK(first == second);
    CHECK(first.rfind("r,H,D,Phi,R_eps\n", 0) == 0);
}

TEST_CASE("converge command reports the remainder decay") {
    const auto dir = fresh_dir("converge");
    const CliRun r = run_cli("converge --alpha 1 --h 0.1 --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("CHECK converge PASS") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "converge.json"));
    CHECK(fs::exists(dir / "out" / "converge.csv"));
}
