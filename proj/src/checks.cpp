#include "dfem/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfem {

void CheckReport::add_row(const std::string& label, double margin, double tolerance) {
    const bool ok = margin >= -tolerance;
    rows.push_back({label, margin, ok});
    passed = passed && ok;
    worst_margin = std::min(worst_margin, margin);
}

void CheckReport::add_info(const std::string& label, double value) {
    fitted_constants[label] = value;
}

double harmonic_residual(const Field& field, const WeightSpec& weight,
                         const std::function<double(Vec2)>& rhs, int quad_order) {
    field.validate();
    const Mesh& mesh = *field.mesh;
    const auto A = assemble_stiffness(mesh, weight, quad_order);
    const auto load = assemble_load(mesh, rhs, quad_order);
    const auto boundary = mesh.boundary_node_mask();

    Eigen::VectorXd u(mesh.nodes.size());
    Eigen::VectorXd ub = Eigen::VectorXd::Zero(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        u[i] = field.values[i];
        if (boundary[i]) ub[i] = field.values[i];
    }
    const Eigen::VectorXd Au = A * u;
    const Eigen::VectorXd coupling = A * ub;
    double res2 = 0.0, scale2 = 0.0;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (boundary[i]) continue;
        const double r = Au[i] - load[i];
        res2 += r * r;
        scale2 += coupling[i] * coupling[i] + load[i] * load[i];
    }
    if (scale2 == 0.0) return res2 == 0.0 ? 0.0 : std::sqrt(res2);
    return std::sqrt(res2 / scale2);
}

double inverse_power_gap(double r_small, double r_large, double alpha) {
    // r_small^-a - r_large^-a = r_large^-a * expm1(a log(r_large/r_small))
    return std::pow(r_large, -alpha) * std::expm1(alpha * std::log(r_large / r_small));
}

MuPair mu_exponent(double r1, double r2, double r3, double alpha) {
    if (!(0.0 < r1 && r1 < r2 && r2 < r3))
        throw std::invalid_argument("mu_exponent: radii must satisfy 0 < r1 < r2 < r3");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (0,2)");
    const double a = inverse_power_gap(r1, r2, alpha);
    const double b = inverse_power_gap(r2, r3, alpha);
    MuPair mu;
    mu.paper = a / (a + b);
    mu.derived = b / (a + b);
    return mu;
}

CheckReport three_sphere_check(const Field& field, const WeightSpec& weight, double r1,
                               double r2, double r3, const CheckOptions& opts) {
    if (!(0.0 < r1 && r1 < r2 && r2 < r3))
        throw std::invalid_argument("three_sphere_check: need 0 < r1 < r2 < r3");
    CheckReport rep;
    rep.name = "three-sphere";

    const double residual = harmonic_residual(field, weight, nullptr, opts.quad_order);
    rep.add_info("harmonic_residual", residual);
    rep.add_row("hypothesis:harmonic", kHarmonicGate - residual, 0.0);

    const double H1 = sphere_mass(field, weight, r1, opts.functionals);
    const double H2 = sphere_mass(field, weight, r2, opts.functionals);
    const double H3 = sphere_mass(field, weight, r3, opts.functionals);
    rep.add_info("H1", H1);
    rep.add_info("H2", H2);
    rep.add_info("H3", H3);

    if (H1 <= kMassFloor || H2 <= kMassFloor || H3 <= kMassFloor) {
        // Degenerate (zero-field) report: vacuous pass.
        rep.add_row("degenerate:zero-mass", 0.0, 0.0);
        return rep;
    }

    const double a = inverse_power_gap(r1, r2, weight.alpha);
    const double b = inverse_power_gap(r2, r3, weight.alpha);
    const double lhs = std::log(H2 / H1) / a;
    const double rhs = std::log(H3 / H2) / b;
    rep.add_row("log-quotient", rhs - lhs, opts.log_tol);

    const MuPair mu = mu_exponent(r1, r2, r3, weight.alpha);
    rep.add_info("mu_paper", mu.paper);
    rep.add_info("mu_derived", mu.derived);
    const double logH1 = std::log(H1), logH2 = std::log(H2), logH3 = std::log(H3);
    const double margin_paper = mu.paper * logH1 + (1.0 - mu.paper) * logH3 - logH2;
    const double margin_derived = mu.derived * logH1 + (1.0 - mu.derived) * logH3 - logH2;
    rep.add_info("product_margin_paper", margin_paper);
    rep.add_info("product_margin_derived", margin_derived);
    rep.add_info("paper_assignment_holds", margin_paper >= -opts.log_tol ? 1.0 : 0.0);
    rep.add_info("derived_assignment_holds", margin_derived >= -opts.log_tol ? 1.0 : 0.0);
    // The theorem asserts the product form for some exponent in (0,1).
    rep.add_row("product-form", std::max(margin_paper, margin_derived), opts.log_tol);
    return rep;
}

CheckReport frequency_monotonicity_check(const Field& field, const WeightSpec& weight,
                                         const std::vector<double>& r_grid,
                                         const CheckOptions& opts) {
    if (r_grid.size() < 2)
        throw std::invalid_argument("frequency_monotonicity_check: need at least two radii");
    if (weight.epsilon > 0.0 && !(r_grid.front() > 2.0 * weight.epsilon))
        throw std::invalid_argument(
            "frequency_monotonicity_check: grid must start above 2*epsilon");

    CheckReport rep;
    rep.name = "frequency-monotonicity";
    const double residual = harmonic_residual(field, weight, nullptr, opts.quad_order);
    rep.add_info("harmonic_residual", residual);
    rep.add_row("hypothesis:harmonic", kHarmonicGate - residual, 0.0);

    const auto samples = profile(field, weight, r_grid, opts.functionals);
    std::vector<double> v(samples.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        v[i] = std::pow(samples[i].r, weight.alpha) * samples[i].Phi;
        scale = std::max(scale, std::abs(v[i]));
    }
    rep.add_info("scale", scale);
    if (scale == 0.0) {
        rep.add_row("degenerate:zero-frequency", 0.0, 0.0);
        return rep;
    }
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double margin = (v[i + 1] - v[i]) / scale;
        rep.add_row("r=" + std::to_string(samples[i].r), margin, opts.monotone_tol);
    }
    return rep;
}

namespace {

/// Five-point central first derivative on a uniform grid (j in [2, n-3]).
double stencil5(const std::vector<double>& f, std::size_t j, double h) {
    return (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * h);
}

}  // namespace

CheckReport derivative_identity_check(const Field& field, const WeightSpec& weight,
                                      const std::vector<double>& r_grid,
                                      const CheckOptions& opts) {
    if (r_grid.size() < 5)
        throw std::invalid_argument("derivative_identity_check: need at least five radii");
    const double h = r_grid[1] - r_grid[0];
    for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
        if (std::abs((r_grid[i + 1] - r_grid[i]) - h) > 1e-9 * h)
            throw std::invalid_argument("derivative_identity_check: grid must be uniform");

    CheckReport rep;
    rep.name = "derivative-identities";
    const double residual = harmonic_residual(field, weight, nullptr, opts.quad_order);
    rep.add_info("harmonic_residual", residual);
    rep.add_row("hypothesis:harmonic", kHarmonicGate - residual, 0.0);

    const auto samples = profile(field, weight, r_grid, opts.functionals);
    const std::size_t n = samples.size();
    std::vector<double> H(n), D(n), E(n);
    for (std::size_t i = 0; i < n; ++i) {
        H[i] = samples[i].H;
        D[i] = samples[i].D;
        E[i] = gradient_energy(field, weight, r_grid[i], opts.functionals);
    }
    const double R = samples.empty() ? 0.0 : samples.front().R_eps;
    const double N_alpha = weight.dimension + weight.alpha;

    double scaleH = 0.0, scaleD = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scaleH = std::max(scaleH, std::abs(H[i]));
        scaleD = std::max(scaleD, std::abs(D[i]));
    }
    if (scaleH == 0.0) {
        rep.add_row("degenerate:zero-mass", 0.0, 0.0);
        return rep;
    }

    for (std::size_t j = 2; j + 2 < n; ++j) {
        const double r = r_grid[j];
        const double dH = stencil5(H, j, h);
        const double rhsH = (N_alpha / r) * H[j] + D[j] / r - R / (2.0 * r);
        const double defectH = std::abs(dH - rhsH) / std::max(std::abs(dH), scaleH / r);
        rep.add_row("H'@r=" + std::to_string(r), opts.identity_tol - defectH, 0.0);

        const double dD = stencil5(D, j, h);
        const double rhsD = 2.0 * r * E[j];
        const double defectD =
            std::abs(dD - rhsD) / std::max(std::abs(dD), std::max(scaleD / r, 1e-300));
        rep.add_row("D'@r=" + std::to_string(r), opts.identity_tol - defectD, 0.0);
    }

    // Worst relative defects, for refinement comparisons.
    double worstH = 0.0, worstD = 0.0;
    for (std::size_t j = 2; j + 2 < n; ++j) {
        const double r = r_grid[j];
        const double dH = stencil5(H, j, h);
        const double rhsH = (N_alpha / r) * H[j] + D[j] / r - R / (2.0 * r);
        worstH = std::max(worstH, std::abs(dH - rhsH) / std::max(std::abs(dH), scaleH / r));
        const double dD = stencil5(D, j, h);
        const double rhsD = 2.0 * r * E[j];
        worstD = std::max(worstD, std::abs(dD - rhsD) /
                                      std::max(std::abs(dD), std::max(scaleD / r, 1e-300)));
    }
    rep.add_info("worst_defect_H", worstH);
    rep.add_info("worst_defect_D", worstD);
    return rep;
}

CheckReport caccioppoli_check(const Field& field, const WeightSpec& weight,
                              const std::vector<double>& r_list, const CheckOptions& opts) {
    if (r_list.empty())
        throw std::invalid_argument("caccioppoli_check: empty radius list");
    CheckReport rep;
    rep.name = "caccioppoli";
    const double residual = harmonic_residual(field, weight, nullptr, opts.quad_order);
    rep.add_info("harmonic_residual", residual);
    rep.add_row("hypothesis:harmonic", kHarmonicGate - residual, 0.0);

    double sup_c = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    bool any = false;
    for (double r : r_list) {
        const double inner = sphere_mass(field, weight, 0.5 * r, opts.functionals);
        const QuadRule annulus =
            region_quadrature(*field.mesh, RegionSpec::annulus({0.0, 0.0}, 0.75 * r, r),
                              opts.functionals.quad_order, opts.functionals.cut_depth);
        double ring = 0.0;
        for (const auto& qp : annulus.points) {
            const double v = field.eval(qp.tri, qp.x);
            ring += qp.w * weight_value(weight, qp.x) * v * v;
        }
        if (ring <= kMassFloor) {
            if (inner <= kMassFloor) continue; // vacuous at this radius
            rep.add_row("empty-annulus@r=" + std::to_string(r), -1.0, 0.0);
            continue;
        }
        const double c_obs = r * r * inner / ring;
        rep.add_info("C_obs@r=" + std::to_string(r), c_obs);
        sup_c = std::max(sup_c, c_obs);
        const double per_r2 = c_obs / (r * r);
        min_ratio = std::min(min_ratio, per_r2);
        max_ratio = std::max(max_ratio, per_r2);
        any = true;
    }
    if (!any) {
        rep.add_row("degenerate:zero-field", 0.0, 0.0);
        return rep;
    }
    rep.add_info("C_sup", sup_c);
    rep.add_info("spread", max_ratio / min_ratio);
    rep.add_row("r-independence", opts.caccioppoli_spread - max_ratio / min_ratio, 0.0);
    return rep;
}

CheckReport remainder_decay_check(const Mesh& mesh, const ProblemSpec& problem,
                                  const std::vector<int>& ks, double eta,
                                  const SolveOptions& solve_opts, const CheckOptions& opts) {
    CheckReport rep;
    rep.name = "remainder-decay";
    const auto seq = approximation_sequence(mesh, problem, ks, solve_opts);

    std::vector<double> remainders;
    std::vector<double> mass_gap;
    const double mass_limit =
        sphere_mass(seq.limit, problem.weight, eta, opts.functionals);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const WeightSpec wk = problem.weight.with_epsilon(1.0 / ks[i]);
        remainders.push_back(remainder(seq.fields[i], wk, opts.functionals));
        const double mass_k = sphere_mass(seq.fields[i], wk, eta, opts.functionals);
        mass_gap.push_back(std::abs(mass_k - mass_limit));
        rep.add_info("R_k" + std::to_string(ks[i]), remainders.back());
        rep.add_info("massgap_k" + std::to_string(ks[i]), mass_gap.back());
    }

    const double r_scale = *std::max_element(remainders.begin(), remainders.end());
    if (r_scale == 0.0) {
        rep.add_row("degenerate:zero-data", 0.0, 0.0);
        return rep;
    }
    for (std::size_t i = 0; i + 1 < remainders.size(); ++i)
        rep.add_row("R-decay:k=" + std::to_string(ks[i]),
                    (remainders[i] - remainders[i + 1]) / r_scale, 1e-9);

    const double g_scale = *std::max_element(mass_gap.begin(), mass_gap.end());
    if (g_scale > 0.0)
        rep.add_row("mass-convergence", 0.25 - mass_gap.back() / g_scale, 0.0);
    rep.add_info("stability_constant", seq.stability_constant);
    return rep;
}

}  // namespace dfem
