#include "dfem/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "dfem/solver.hpp"

namespace dfem {

namespace {

void check_ball_inside(const Field& field, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("functionals: radius must be positive");
    if (r > field.mesh->radius * (1.0 + 1e-12))
        throw std::domain_error("functionals: ball exits the mesh domain");
}

QuadRule ball_rule(const Field& field, double r, const FunctionalOptions& opts) {
    check_ball_inside(field, r);
    return region_quadrature(*field.mesh, RegionSpec::ball({0.0, 0.0}, r), opts.quad_order,
                             opts.cut_depth);
}

}  // namespace

double sphere_mass(const Field& field, const WeightSpec& weight, double r,
                   const FunctionalOptions& opts) {
    field.validate();
    const QuadRule rule = ball_rule(field, r, opts);
    double s = 0.0;
    for (const auto& qp : rule.points) {
        const double v = field.eval(qp.tri, qp.x);
        s += qp.w * weight_value(weight, qp.x) * v * v;
    }
    return s;
}

double dirichlet_kernel(const Field& field, const WeightSpec& weight, double r,
                        const FunctionalOptions& opts) {
    field.validate();
    const QuadRule rule = ball_rule(field, r, opts);
    const double r2 = r * r;
    double s = 0.0;
    int last_tri = -1;
    double g2 = 0.0;
    for (const auto& qp : rule.points) {
        if (qp.tri != last_tri) {
            g2 = norm2(field.grad(qp.tri));
            last_tri = qp.tri;
        }
        const double kernel = r2 - norm2(qp.x);
        if (kernel > 0.0) s += qp.w * weight_value(weight, qp.x) * g2 * kernel;
    }
    return s;
}

double gradient_energy(const Field& field, const WeightSpec& weight, double r,
                       const FunctionalOptions& opts) {
    field.validate();
    const QuadRule rule = ball_rule(field, r, opts);
    double s = 0.0;
    int last_tri = -1;
    double g2 = 0.0;
    for (const auto& qp : rule.points) {
        if (qp.tri != last_tri) {
            g2 = norm2(field.grad(qp.tri));
            last_tri = qp.tri;
        }
        s += qp.w * weight_value(weight, qp.x) * g2;
    }
    return s;
}

double frequency(const Field& field, const WeightSpec& weight, double r,
                 const FunctionalOptions& opts) {
    const double H = sphere_mass(field, weight, r, opts);
    if (H <= kMassFloor) return 0.0;
    return dirichlet_kernel(field, weight, r, opts) / H;
}

double remainder(const Field& field, const WeightSpec& weight,
                 const FunctionalOptions& opts) {
    field.validate();
    weight.validate();
    if (!(weight.epsilon > 0.0))
        throw std::invalid_argument("remainder: weight must be regularized (epsilon > 0)");
    require_resolved_radius(*field.mesh, weight.epsilon, "remainder");

    const double eps = weight.epsilon;
    const QuadRule rule = ball_rule(field, eps, opts);
    const double e2 = eps * eps;
    double s = 0.0;
    for (const auto& qp : rule.points) {
        const double v = field.eval(qp.tri, qp.x);
        const double base = 0.75 * norm2(qp.x) + 0.25 * e2;
        s += qp.w * std::pow(base, 0.5 * weight.alpha - 1.0) * v * v;
    }
    return 0.5 * weight.alpha * e2 * s;
}

HardyReport hardy_report(const Field& field, const WeightSpec& weight,
                         const FunctionalOptions& opts) {
    field.validate();
    weight.validate();
    const Mesh& mesh = *field.mesh;
    const auto boundary = mesh.boundary_node_mask();
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (boundary[i] && field.values[i] != 0.0)
            throw std::invalid_argument("hardy_report: field does not vanish on the boundary");

    const WeightSpec exact = [&] {
        WeightSpec w = weight;
        w.epsilon = 0.0;
        return w;
    }();

    const QuadRule rule = domain_quadrature(mesh, opts.quad_order);
    double mass_sing = 0.0;     // ∫ |x|^{alpha-2} u^2
    double energy_exact = 0.0;  // ∫ |x|^alpha |grad u|^2
    double mass_plain = 0.0;    // ∫ u^2
    double mass_sing_reg = 0.0; // ∫ w_eps^{1-2/alpha} u^2
    double mass_reg = 0.0;      // ∫ w_eps u^2
    double energy_reg = 0.0;    // ∫ w_eps |grad u|^2
    int last_tri = -1;
    double g2 = 0.0;
    const double sing_exp = 1.0 - 2.0 / weight.alpha;
    for (const auto& qp : rule.points) {
        if (qp.tri != last_tri) {
            g2 = norm2(field.grad(qp.tri));
            last_tri = qp.tri;
        }
        const double v = field.eval(qp.tri, qp.x);
        const double v2 = v * v;
        const double w0 = weight_value(exact, qp.x);
        const double weps = weight_value(weight, qp.x);
        const double rr = norm(qp.x);
        mass_sing += qp.w * std::pow(rr, weight.alpha - 2.0) * v2;
        energy_exact += qp.w * w0 * g2;
        mass_plain += qp.w * v2;
        mass_sing_reg += qp.w * std::pow(weps, sing_exp) * v2;
        mass_reg += qp.w * weps * v2;
        energy_reg += qp.w * weps * g2;
    }

    const HardyConstants hc = hardy_constant(exact);
    const double denom = weight.dimension - 2.0 + weight.alpha;
    HardyReport rep;
    auto ratio = [](double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : 0.0; };
    rep.ratio_gradient_form = ratio(std::sqrt(mass_sing), hc.gradient_form * std::sqrt(energy_exact));
    rep.ratio_l2_form = ratio(std::sqrt(mass_plain), hc.l2_form * std::sqrt(energy_exact));
    rep.ratio_reg_gradient_form =
        ratio(std::sqrt(mass_sing_reg), (2.0 / denom) * std::sqrt(mass_reg + energy_reg));
    rep.ratio_reg_l2_form =
        ratio(std::sqrt(mass_reg), (2.0 * weight.domain_bound / denom) * std::sqrt(energy_reg));
    return rep;
}

std::vector<SphereSample> profile(const Field& field, const WeightSpec& weight,
                                  const std::vector<double>& r_grid,
                                  const FunctionalOptions& opts) {
    for (std::size_t i = 0; i + 1 < r_grid.size(); ++i)
        if (!(r_grid[i] < r_grid[i + 1]))
            throw std::invalid_argument("profile: r_grid must increase strictly");

    const double R = (weight.epsilon > 0.0) ? remainder(field, weight, opts) : 0.0;
    std::vector<SphereSample> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        SphereSample s;
        s.r = r;
        const QuadRule rule = ball_rule(field, r, opts);
        const double r2 = r * r;
        int last_tri = -1;
        double g2 = 0.0;
        for (const auto& qp : rule.points) {
            if (qp.tri != last_tri) {
                g2 = norm2(field.grad(qp.tri));
                last_tri = qp.tri;
            }
            const double w = weight_value(weight, qp.x);
            const double v = field.eval(qp.tri, qp.x);
            s.H += qp.w * w * v * v;
            const double kernel = r2 - norm2(qp.x);
            if (kernel > 0.0) s.D += qp.w * w * g2 * kernel;
        }
        s.Phi = (s.H > kMassFloor) ? s.D / s.H : 0.0;
        s.R_eps = R;
        out.push_back(s);
    }
    return out;
}

}  // namespace dfem
