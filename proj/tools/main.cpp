#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "dfem/acceptance.hpp"
#include "dfem/config.hpp"
#include "dfem/io.hpp"
#include "dfem/propagation.hpp"
#include "dfem/radial_oracle.hpp"

namespace {

using namespace dfem;

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Context {
    RunConfig cfg;
    std::optional<Mesh> plain;  // single "boundary" marker
    std::optional<Mesh> marked; // Gamma / rest split

    const Mesh& mesh() {
        if (!plain) plain = build_disc_mesh(cfg.R0, cfg.mesh.h, cfg.mesh.grading);
        return *plain;
    }
    const Mesh& gamma_mesh() {
        if (!marked)
            marked = mark_boundary(mesh(), cfg.regions.gamma_begin, cfg.regions.gamma_end);
        return *marked;
    }
    WeightSpec weight(double eps = 0.0) const {
        WeightSpec w;
        w.alpha = cfg.alpha;
        w.epsilon = eps;
        w.dimension = 2;
        w.domain_bound = cfg.R0 + 1.0;
        return w;
    }
    SolveOptions solve_options() const {
        SolveOptions o;
        o.tol = cfg.solver.tol;
        o.max_iter = cfg.solver.max_iter;
        return o;
    }
    std::string out_path(const std::string& name) const {
        std::filesystem::create_directories(cfg.output_dir);
        return cfg.output_dir + "/" + name;
    }
};

/// Field descriptors: zero | const:<c> | mode:l=<l> | imode:l=<l> |
/// random:seed=<n> | nodal:seed=<n>. mode/random are boundary-data solves,
/// imode is the nodal interpolant, nodal is a non-harmonic control field.
Field build_field(Context& ctx, const std::string& desc, const WeightSpec& w) {
    auto value_after = [&](const std::string& key) {
        const auto pos = desc.find(key + "=");
        if (pos == std::string::npos)
            throw std::invalid_argument("field descriptor '" + desc + "' needs " + key + "=");
        return std::stod(desc.substr(pos + key.size() + 1));
    };
    const Mesh& mesh = ctx.mesh();
    if (desc == "zero") return zero_field(mesh);
    if (desc.rfind("const:", 0) == 0) {
        const double c = std::stod(desc.substr(6));
        return make_field(mesh, [c](Vec2) { return c; });
    }
    if (desc.rfind("imode:", 0) == 0) {
        const auto mode = ModeSolution::make(2, w.alpha, static_cast<int>(value_after("l")));
        return exact_mode_field(mesh, mode);
    }
    if (desc.rfind("mode:", 0) == 0) {
        const auto mode = ModeSolution::make(2, w.alpha, static_cast<int>(value_after("l")));
        ProblemSpec p;
        p.weight = w;
        p.dirichlet["boundary"] = [mode](Vec2 x) { return mode_value(mode, x); };
        return solve_dirichlet(mesh, p, ctx.solve_options());
    }
    if (desc.rfind("random:", 0) == 0) {
        std::mt19937_64 rng(static_cast<unsigned>(value_after("seed")));
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        const double a0 = 0.4 * c(rng) + 0.6, a1 = c(rng), b1 = c(rng), a2 = 0.5 * c(rng);
        ProblemSpec p;
        p.weight = w;
        p.dirichlet["boundary"] = [=](Vec2 x) {
            const double t = angle_of(x);
            return a0 + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2.0 * t);
        };
        return solve_dirichlet(mesh, p, ctx.solve_options());
    }
    if (desc.rfind("nodal:", 0) == 0)
        return random_interior_field(mesh, static_cast<unsigned>(value_after("seed")));
    throw std::invalid_argument("unknown field descriptor '" + desc + "'");
}

int report_outcome(Context& ctx, const std::string& name, const CheckReport& rep) {
    std::cout << "CHECK " << name << " " << (rep.passed ? "PASS" : "FAIL")
              << " margin=" << rep.worst_margin << "\n";
    write_text_file(ctx.out_path(name + ".json"), report_to_json(rep));
    write_text_file(ctx.out_path(name + ".csv"), report_to_csv(rep));
    return rep.passed ? kExitPass : kExitCheckFail;
}

std::vector<double> parse_radii(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for the degenerate weighted Dirichlet problem"};
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    double alpha_override = -1.0;
    double h_override = -1.0;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_override, "output directory");
    app.add_option("--alpha", alpha_override, "weight exponent in (0,2)");
    app.add_option("--h", h_override, "outer mesh size");

    std::string field_desc = "mode:l=1";
    std::string radii_csv;
    double eps = 0.0;
    int quiet = 0;
    app.add_flag("--quiet", quiet, "suppress detail logging");

    auto* cmd_mesh = app.add_subcommand("mesh", "build and serialize the graded disc mesh");
    auto* cmd_solve = app.add_subcommand("solve", "solve and serialize one field");
    cmd_solve->add_option("--field", field_desc, "field descriptor");
    auto* cmd_hardy = app.add_subcommand("hardy", "Hardy-inequality ratios of a field");
    cmd_hardy->add_option("--field", field_desc, "field descriptor");
    auto* cmd_profile = app.add_subcommand("profile", "sphere functionals along a radius grid");
    cmd_profile->add_option("--field", field_desc, "field descriptor");
    cmd_profile->add_option("--eps", eps, "weight regularization radius");
    auto* cmd_three = app.add_subcommand("three-sphere", "log-convexity of the sphere mass");
    cmd_three->add_option("--field", field_desc, "field descriptor");
    cmd_three->add_option("--r", radii_csv, "three radii r1,r2,r3")->required();
    auto* cmd_freq = app.add_subcommand("frequency", "monotonicity of r^alpha Phi(r)");
    cmd_freq->add_option("--field", field_desc, "field descriptor");
    cmd_freq->add_option("--eps", eps, "weight regularization radius");
    auto* cmd_cacc = app.add_subcommand("caccioppoli", "annulus estimate constants");
    cmd_cacc->add_option("--field", field_desc, "field descriptor");
    auto* cmd_conv = app.add_subcommand("converge", "approximation sequence and remainders");
    auto* cmd_prop = app.add_subcommand("propagate", "chain-of-balls propagation check");
    cmd_prop->add_option("--field", field_desc, "field descriptor (Gamma-vanishing solve)");
    auto* cmd_wucp = app.add_subcommand("wucp", "unique-continuation probe");
    auto* cmd_all = app.add_subcommand("all", "full acceptance battery");

    for (auto* sub : {cmd_mesh, cmd_solve, cmd_hardy, cmd_profile, cmd_three, cmd_freq,
                      cmd_cacc, cmd_conv, cmd_prop, cmd_wucp, cmd_all})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    Context ctx;
    if (!config_path.empty()) ctx.cfg = load_config(config_path);
    if (alpha_override > 0.0) ctx.cfg.alpha = alpha_override;
    if (h_override > 0.0) ctx.cfg.mesh.h = h_override;
    if (!out_override.empty()) ctx.cfg.output_dir = out_override;
    if (const char* env = std::getenv("DFEM_OUT")) ctx.cfg.output_dir = env;
    ctx.cfg.validate();

    if (cmd_mesh->parsed()) {
        const Mesh& mesh = ctx.mesh();
        write_text_file(ctx.out_path("mesh.json"), mesh_to_json(mesh));
        std::cout << "mesh: " << mesh.nodes.size() << " nodes, " << mesh.triangles.size()
                  << " triangles, area " << format_real(mesh.area()) << "\n";
        return kExitPass;
    }
    if (cmd_solve->parsed()) {
        const WeightSpec w = ctx.weight(eps);
        const Field f = build_field(ctx, field_desc, w);
        write_text_file(ctx.out_path("field.json"), field_to_json(f, w));
        const NormReport n = weighted_norms(f, w);
        std::cout << "solve: L2w=" << format_real(n.l2w) << " H1w=" << format_real(n.h1w_semi)
                  << " L2=" << format_real(n.l2) << "\n";
        return kExitPass;
    }
    if (cmd_hardy->parsed()) {
        const WeightSpec w = ctx.weight(1.0 / 8.0);
        const Field f = build_field(ctx, field_desc, w);
        const HardyReport hr = hardy_report(f, w);
        CheckReport rep;
        rep.name = "hardy";
        const double tol = 2e-2;
        rep.add_row("gradient-form", 1.0 + tol - hr.ratio_gradient_form, 0.0);
        rep.add_row("l2-form", 1.0 + tol - hr.ratio_l2_form, 0.0);
        rep.add_row("regularized-gradient-form", 1.0 + tol - hr.ratio_reg_gradient_form, 0.0);
        rep.add_row("regularized-l2-form", 1.0 + tol - hr.ratio_reg_l2_form, 0.0);
        return report_outcome(ctx, "hardy", rep);
    }
    if (cmd_profile->parsed()) {
        const WeightSpec w = ctx.weight(eps);
        const Field f = build_field(ctx, field_desc, w);
        const auto samples = profile(f, w, ctx.cfg.effective_r_grid());
        write_text_file(ctx.out_path("profile.csv"), profile_to_csv(samples));
        std::cout << "profile: " << samples.size() << " radii written\n";
        return kExitPass;
    }
    if (cmd_three->parsed()) {
        const auto radii = parse_radii(radii_csv);
        if (radii.size() != 3)
            throw std::invalid_argument("three-sphere needs exactly three radii");
        if (radii[2] >= ctx.cfg.R0) {
            // Grow the domain (and the mesh scale with it) to cover r3.
            const double scale = radii[2] / (0.9 * ctx.cfg.R0);
            ctx.cfg.R0 *= scale;
            ctx.cfg.mesh.h *= scale;
            ctx.plain.reset();
            ctx.marked.reset();
        }
        const WeightSpec w = ctx.weight(0.0);
        const Field f = build_field(ctx, field_desc, w);
        CheckOptions opts;
        opts.log_tol = ctx.cfg.checks.tol_three_sphere;
        return report_outcome(ctx, "three-sphere",
                              three_sphere_check(f, w, radii[0], radii[1], radii[2], opts));
    }
    if (cmd_freq->parsed()) {
        const WeightSpec w = ctx.weight(eps > 0.0 ? eps : 1.0 / 8.0);
        const Field f = build_field(ctx, field_desc, w);
        std::vector<double> grid;
        for (double r : ctx.cfg.effective_r_grid())
            if (r > 2.0 * w.epsilon) grid.push_back(r);
        CheckOptions opts;
        opts.monotone_tol = ctx.cfg.checks.tol_frequency;
        return report_outcome(ctx, "frequency",
                              frequency_monotonicity_check(f, w, grid, opts));
    }
    if (cmd_cacc->parsed()) {
        const WeightSpec w = ctx.weight(0.0);
        const Field f = build_field(ctx, field_desc, w);
        std::vector<double> r_list;
        for (double frac : {0.125, 0.1875, 0.25, 0.3125, 0.375, 0.4375, 0.5})
            r_list.push_back(frac * ctx.cfg.R0);
        CheckOptions opts;
        opts.caccioppoli_spread = ctx.cfg.checks.caccioppoli_spread;
        return report_outcome(ctx, "caccioppoli", caccioppoli_check(f, w, r_list, opts));
    }
    if (cmd_conv->parsed()) {
        ProblemSpec p;
        p.weight = ctx.weight(0.0);
        p.rhs = [](Vec2) { return 1.0; };
        p.zero_markers = {"boundary"};
        p.dirichlet["boundary"] = nullptr;
        const CheckReport rep = remainder_decay_check(
            ctx.mesh(), p, ctx.cfg.checks.ks, ctx.cfg.checks.eta, ctx.solve_options());
        return report_outcome(ctx, "converge", rep);
    }
    if (cmd_prop->parsed()) {
        const Mesh& mesh = ctx.gamma_mesh();
        const RegionSpec omega =
            RegionSpec::ball(ctx.cfg.regions.omega_center, ctx.cfg.regions.omega_radius);
        const RegionSpec target =
            RegionSpec::ball(ctx.cfg.regions.target_center, ctx.cfg.regions.target_radius);
        ProblemSpec p;
        p.weight = ctx.weight(0.0);
        p.zero_markers = {"Gamma"};
        p.dirichlet["Gamma"] = nullptr;
        p.dirichlet["rest"] = [](Vec2 x) {
            const double t = angle_of(x);
            return std::sin(t - kPi) + 0.25 * std::sin(2.0 * (t - kPi));
        };
        const Field f = solve_dirichlet(mesh, p, ctx.solve_options());
        const ChainPlan plan =
            plan_chain(mesh, omega, target, ctx.cfg.propagation.r0, ctx.cfg.alpha, &f,
                       &p.weight);
        write_text_file(ctx.out_path("chain_plan.json"), plan_to_json(plan));
        return report_outcome(ctx, "propagate", propagate_check(f, p.weight, plan));
    }
    if (cmd_wucp->parsed()) {
        const Mesh& mesh = ctx.gamma_mesh();
        const RegionSpec omega =
            RegionSpec::ball(ctx.cfg.regions.omega_center, ctx.cfg.regions.omega_radius);
        const RegionSpec target =
            RegionSpec::ball(ctx.cfg.regions.target_center, ctx.cfg.regions.target_radius);
        ProblemSpec base;
        base.weight = ctx.weight(0.0);
        base.zero_markers = {"Gamma"};
        base.dirichlet["Gamma"] = nullptr;
        base.dirichlet["rest"] = nullptr;
        const ChainPlan plan =
            plan_chain(mesh, omega, target, ctx.cfg.propagation.r0, ctx.cfg.alpha);
        WucpProbeOptions opts;
        opts.penalty = ctx.cfg.propagation.penalty;
        opts.solve = ctx.solve_options();
        return report_outcome(ctx, "wucp", wucp_probe(mesh, base, plan, opts));
    }
    if (cmd_all->parsed()) {
        AcceptanceOptions opts;
        opts.R0 = ctx.cfg.R0;
        opts.h_base = ctx.cfg.mesh.h;
        opts.grading = ctx.cfg.mesh.grading;
        opts.out_dir = ctx.cfg.output_dir;
        std::ostringstream sink;
        const auto results = run_acceptance(opts, quiet ? sink : std::cout);
        return print_results(results, std::cout) ? kExitPass : kExitCheckFail;
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
