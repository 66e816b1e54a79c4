#pragma once

#include <optional>

#include "dfem/checks.hpp"

namespace dfem {

/// Chain of overlapping balls carrying three-ball exponents from omega to a
/// target region. Nesting means |q_{j+1} - q_j| <= r0, equivalently
/// B(q_{j+1}, r0) inside B(q_j, 2 r0).
struct ChainPlan {
    enum class CaseTag { OriginInsideOmega, OriginOutsideOmega };

    struct AnnulusStep {
        double r_inner = 0.0; // 5/2 r0
        double r_outer = 0.0; // 3 r0
        Vec2 maximizer{0.0, 0.0};
        int cover_count = 0;
    };

    double r0 = 0.0;
    std::vector<Vec2> centers;
    CaseTag case_tag = CaseTag::OriginInsideOmega;
    std::vector<double> per_step_mu;
    double composite_mu = 1.0;
    std::optional<AnnulusStep> annulus_step;

    RegionSpec omega;
    RegionSpec target;

    void validate(double domain_radius) const;
};

/// Working three-ball exponent at non-degenerate centers: the Hadamard
/// value log(r3/r2)/log(r3/r1) on the (r0, 2r0, 4r0) triple, i.e. 1/2.
double chain_step_mu();

/// Degenerate-step exponent (4^a - 2^a)/(4^a - 1) for the origin ball.
double origin_step_mu(double alpha);

/// Straight-line chain from omega to the target. Case selection follows the
/// origin: inside omega the chain starts at 0 and picks up the degenerate
/// exponent; outside it starts at the omega center, routes to a maximizer on
/// the circle of radius 5/2 r0, and records the annulus cover plus the ball
/// bound at the origin. The optional field selects the annulus maximizer by
/// sampling 256 angles; otherwise the point nearest the chain start is used.
ChainPlan plan_chain(const Mesh& domain, const RegionSpec& omega, const RegionSpec& target,
                     double r0, double alpha, const Field* field = nullptr,
                     const WeightSpec* weight = nullptr);

/// A = ∫_target u^2 w, B = ∫_omega u^2 w, E = ∫_Omega u^2 w and
/// C_obs = A / (B^mu E^{1-mu}); pass against c_budget when positive.
CheckReport propagate_check(const Field& field, const WeightSpec& weight,
                            const ChainPlan& plan, double c_budget = 0.0,
                            const CheckOptions& opts = {});

/// Verifies the equivalence of the product and epsilon forms of the
/// interpolation bound at the given data (A, B, E, mu) and epsilon.
CheckReport epsilon_tradeoff(double A, double B, double E, double mu, double eps);

struct WucpProbeOptions {
    int family_size = 10;
    unsigned seed = 77;
    double penalty = 1e6;
    double ratio_tol = 1e-4;      // penalized omega-share bound
    double positivity_floor = 1e-12;
    double fit_headroom = 3.0;    // fitted C = headroom * family max
    SolveOptions solve;
    CheckOptions checks;
};

/// Two-sided unique-continuation probe over a family of Gamma-vanishing
/// solves: (i) omega mass share stays above a positive floor for genuine
/// solutions, (ii) a penalized solve pushes the omega share below ratio_tol
/// while the target mass still obeys the fitted interpolation bound.
CheckReport wucp_probe(const Mesh& mesh, const ProblemSpec& base, const ChainPlan& plan,
                       const WucpProbeOptions& opts = {});

}  // namespace dfem
