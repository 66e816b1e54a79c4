#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "dfem/functionals.hpp"
#include "dfem/solver.hpp"

namespace dfem {

struct CheckRow {
    std::string label;
    double margin = 0.0; // signed, >= -tolerance means satisfied
    bool pass = true;
};

struct CheckReport {
    std::string name;
    bool passed = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::map<std::string, double> fitted_constants;
    std::vector<CheckRow> rows;

    void add_row(const std::string& label, double margin, double tolerance);
    void add_info(const std::string& label, double value); // non-gating row
};

/// Relative interior Galerkin residual of a field against the weighted
/// operator: ||(A u)_I - b_I|| / scale, with scale the boundary coupling
/// plus load magnitude. Zero fields report zero.
double harmonic_residual(const Field& field, const WeightSpec& weight,
                         const std::function<double(Vec2)>& rhs = nullptr,
                         int quad_order = 4);

/// Residual threshold below which a field counts as a discrete solution.
inline constexpr double kHarmonicGate = 1e-8;

/// Three-sphere exponents for radii r1 < r2 < r3:
///   paper   = (r1^-a - r2^-a)/(r1^-a - r3^-a),
///   derived = (r2^-a - r3^-a)/(r1^-a - r3^-a).
/// They sum to one; the derived value is the weight the log-convexity
/// inequality actually places on H(r1).
struct MuPair {
    double paper = 0.0;
    double derived = 0.0;
};

MuPair mu_exponent(double r1, double r2, double r3, double alpha);

/// Stable r_small^-a - r_large^-a, accurate down to a -> 0.
double inverse_power_gap(double r_small, double r_large, double alpha);

struct CheckOptions {
    FunctionalOptions functionals;
    double log_tol = 2e-2;       // three-sphere, log scale
    double monotone_tol = 1e-2;  // frequency monotonicity, relative
    double identity_tol = 5e-2;  // derivative identities, relative
    double caccioppoli_spread = 3.0;
    int quad_order = 4;
};

/// Log-difference-quotient inequality plus both product-form assignments.
CheckReport three_sphere_check(const Field& field, const WeightSpec& weight, double r1,
                               double r2, double r3, const CheckOptions& opts = {});

/// r^alpha * Phi(r) nondecreasing along the grid.
CheckReport frequency_monotonicity_check(const Field& field, const WeightSpec& weight,
                                         const std::vector<double>& r_grid,
                                         const CheckOptions& opts = {});

/// H' = ((N+alpha)/r) H + D/r - R/(2r) and D' = 2r ∫ w |grad v|^2, verified
/// with five-point finite differences on a uniform grid.
CheckReport derivative_identity_check(const Field& field, const WeightSpec& weight,
                                      const std::vector<double>& r_grid,
                                      const CheckOptions& opts = {});

/// C_obs(r) = r^2 * mass(B_{r/2}) / mass(B_r \ B_{3r/4}); reports the sup and
/// the spread of C_obs(r)/r^2 across radii.
CheckReport caccioppoli_check(const Field& field, const WeightSpec& weight,
                              const std::vector<double>& r_list,
                              const CheckOptions& opts = {});

/// Runs the approximation sequence and verifies the remainder decay and the
/// B_eta mass convergence.
CheckReport remainder_decay_check(const Mesh& mesh, const ProblemSpec& problem,
                                  const std::vector<int>& ks, double eta,
                                  const SolveOptions& solve_opts = {},
                                  const CheckOptions& opts = {});

}  // namespace dfem
