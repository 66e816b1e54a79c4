#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "dfem/propagation.hpp"
#include "dfem/radial_oracle.hpp"

using namespace dfem;

namespace {

WeightSpec weight(double alpha) {
    WeightSpec w;
    w.alpha = alpha;
    w.dimension = 2;
    w.domain_bound = 2.0;
    return w;
}

const Mesh& marked_mesh() {
    static const Mesh mesh = mark_boundary(build_disc_mesh(1.0, 0.1, 2.0), 0.0, kPi);
    return mesh;
}

Field gamma_vanishing_solve(const Mesh& mesh, const WeightSpec& w, double a1, double a2) {
    ProblemSpec p;
    p.weight = w;
    p.zero_markers = {"Gamma"};
    p.dirichlet["Gamma"] = nullptr;
    p.dirichlet["rest"] = [a1, a2](Vec2 x) {
        const double t = angle_of(x);
        return a1 * std::sin(t - kPi) + a2 * std::sin(2.0 * (t - kPi));
    };
    return solve_dirichlet(mesh, p);
}

}  // namespace

TEST_CASE("chain planning, case 1") {
    const RegionSpec omega = RegionSpec::ball({0.0, 0.0}, 0.12);
    const RegionSpec target = RegionSpec::ball({0.3, 0.0}, 0.1);
    const ChainPlan plan = plan_chain(marked_mesh(), omega, target, 0.1, 1.0);
    plan.validate(1.0);

    CHECK(plan.case_tag == ChainPlan::CaseTag::OriginInsideOmega);
    REQUIRE(plan.centers.size() == 4); // q_0 = 0 plus three steps
    CHECK(norm(plan.centers.front()) == 0.0);
    CHECK(norm(plan.centers.back() - Vec2{0.3, 0.0}) < 1e-14);
    for (std::size_t j = 0; j + 1 < plan.centers.size(); ++j)
        CHECK(norm(plan.centers[j + 1] - plan.centers[j]) ==
              doctest::Approx(0.1).epsilon(1e-12));
    REQUIRE(plan.per_step_mu.size() == 3);
    for (double m : plan.per_step_mu) CHECK(m == chain_step_mu());
    double expected = origin_step_mu(1.0);
    for (int j = 0; j < 3; ++j) expected *= chain_step_mu();
    CHECK(plan.composite_mu == expected);
    CHECK(origin_step_mu(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_FALSE(plan.annulus_step.has_value());
}

TEST_CASE("chain planning, trivial overlap") {
    const RegionSpec omega = RegionSpec::ball({0.0, 0.0}, 0.2);
    const RegionSpec target = RegionSpec::ball({0.05, 0.0}, 0.1);
    const ChainPlan plan = plan_chain(marked_mesh(), omega, target, 0.1, 1.0);
    CHECK(plan.centers.size() == 1);
    CHECK(plan.composite_mu == 1.0);
    CHECK(plan.per_step_mu.empty());
}

TEST_CASE("chain planning, case 2") {
    const RegionSpec omega = RegionSpec::ball({0.55, 0.0}, 0.22);
    const RegionSpec target = RegionSpec::ball({0.0, 0.0}, 0.2);
    const ChainPlan plan = plan_chain(marked_mesh(), omega, target, 0.1, 1.0);
    plan.validate(1.0);

    CHECK(plan.case_tag == ChainPlan::CaseTag::OriginOutsideOmega);
    REQUIRE(plan.annulus_step.has_value());
    CHECK(plan.annulus_step->r_inner == doctest::Approx(0.25));
    CHECK(plan.annulus_step->r_outer == doctest::Approx(0.3));
    CHECK(plan.annulus_step->cover_count == 10);
    CHECK(norm(plan.annulus_step->maximizer) == doctest::Approx(0.25).epsilon(1e-12));
    const int k = static_cast<int>(plan.centers.size()) - 1;
    CHECK(plan.composite_mu == doctest::Approx(std::pow(0.5, k)).epsilon(1e-14));
    // Start ball stays clear of the origin ball.
    CHECK(norm(plan.centers.front()) >= 2.0 * plan.r0);
}

TEST_CASE("chain planning, infeasible geometries") {
    const RegionSpec target = RegionSpec::ball({0.3, 0.0}, 0.1);
    // r0 too large for the domain.
    CHECK_THROWS_AS(plan_chain(marked_mesh(), RegionSpec::ball({0, 0}, 0.3), target, 0.2, 1.0),
                    std::invalid_argument);
    // omega too small to contain B(0, r0).
    CHECK_THROWS_AS(plan_chain(marked_mesh(), RegionSpec::ball({0, 0}, 0.05), target, 0.1, 1.0),
                    std::invalid_argument);
    // Case 2 with omega too small for B(q0, 2 r0).
    CHECK_THROWS_AS(
        plan_chain(marked_mesh(), RegionSpec::ball({0.5, 0.0}, 0.15), target, 0.1, 1.0),
        std::invalid_argument);
    // Target ball would push the chain outside the domain.
    CHECK_THROWS_AS(plan_chain(marked_mesh(), RegionSpec::ball({0, 0}, 0.12),
                               RegionSpec::ball({0.85, 0.0}, 0.1), 0.1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("propagate check") {
    const WeightSpec w = weight(1.0);
    const ChainPlan plan = plan_chain(marked_mesh(), RegionSpec::ball({0, 0}, 0.12),
                                      RegionSpec::ball({0.3, 0.0}, 0.1), 0.1, 1.0);

    const CheckReport zero = propagate_check(zero_field(marked_mesh()), w, plan);
    CHECK(zero.passed);

    const Field u = gamma_vanishing_solve(marked_mesh(), w, 1.0, 0.4);
    const CheckReport rep = propagate_check(u, w, plan);
    CHECK(rep.passed);
    const double c_obs = rep.fitted_constants.at("C_obs");
    CHECK(std::isfinite(c_obs));
    CHECK(c_obs > 0.0);

    // Scaling invariance, explicitly.
    Field u2 = u;
    for (double& v : u2.values) v *= 2.0;
    const CheckReport rep2 = propagate_check(u2, w, plan);
    CHECK(std::abs(rep2.fitted_constants.at("C_obs") - c_obs) <= 1e-10 * c_obs);

    // Budget gating.
    const CheckReport tight = propagate_check(u, w, plan, c_obs * 0.5);
    CHECK_FALSE(tight.passed);
    const CheckReport loose = propagate_check(u, w, plan, c_obs * 2.0);
    CHECK(loose.passed);
}

TEST_CASE("epsilon tradeoff") {
    CHECK(epsilon_tradeoff(0.0, 1.0, 1.0, 0.5, 1.0).passed);

    const CheckReport rep = epsilon_tradeoff(1.0, 0.01, 100.0, 0.5, 0.005);
    CHECK(rep.passed);
    CHECK(rep.fitted_constants.at("C_product") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.fitted_constants.at("C_eps") == doctest::Approx(1.0).epsilon(1e-12));

    // B = E degenerate case holds at eps = 1.
    const CheckReport beq = epsilon_tradeoff(0.5, 2.0, 2.0, 0.3, 1.0);
    CHECK(beq.passed);

    CHECK_THROWS_AS(epsilon_tradeoff(-1.0, 1.0, 1.0, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(epsilon_tradeoff(1.0, 1.0, 1.0, 1.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(epsilon_tradeoff(1.0, 1.0, 1.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("wucp probe") {
    const WeightSpec w = weight(1.0);
    const ChainPlan plan = plan_chain(marked_mesh(), RegionSpec::ball({0, 0}, 0.12),
                                      RegionSpec::ball({0.3, 0.0}, 0.1), 0.1, 1.0);
    ProblemSpec base;
    base.weight = w;
    base.zero_markers = {"Gamma"};
    base.dirichlet["Gamma"] = nullptr;
    base.dirichlet["rest"] = nullptr;

    WucpProbeOptions opts;
    opts.family_size = 4;
    const CheckReport rep = wucp_probe(marked_mesh(), base, plan, opts);
    CHECK(rep.passed);
    CHECK(rep.fitted_constants.at("family_min_share") > 0.0);
    CHECK(rep.fitted_constants.at("penalized_share") < 1e-4);
    CHECK(rep.fitted_constants.at("pinned_share") <
          rep.fitted_constants.at("family_min_share"));
}

TEST_CASE("exact mode has positive omega mass") {
    const ModeSolution mode = ModeSolution::make(2, 1.0, 1);
    const Field f = exact_mode_field(marked_mesh(), mode);
    const WeightSpec w = weight(1.0);
    const QuadRule rule =
        region_quadrature(marked_mesh(), RegionSpec::ball({0.5, 0.0}, 0.2), 4, 5);
    double omega_mass = 0.0;
    for (const auto& qp : rule.points) {
        const double v = f.eval(qp.tri, qp.x);
        omega_mass += qp.w * weight_value(w, qp.x) * v * v;
    }
    CHECK(omega_mass > 0.0);
}
