#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <set>

#include "dfem/field.hpp"
#include "dfem/quadrature.hpp"
#include "dfem/weights.hpp"

namespace dfem {

/// Dirichlet problem -div(w grad u) = f with per-marker boundary data.
/// Markers listed in zero_markers take homogeneous data and win at marker
/// interfaces, so "vanishing on Gamma" holds nodally.
struct ProblemSpec {
    WeightSpec weight;
    std::function<double(Vec2)> rhs;                              // null means f = 0
    std::map<std::string, std::function<double(Vec2)>> dirichlet; // per marker
    std::set<std::string> zero_markers;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 20000;
    bool deterministic = true;
    int quad_order = 4;
    int direct_limit = 20000; // direct factorization below this many unknowns
};

struct SolveInfo {
    int iterations = 0;       // 0 for the direct path
    double residual = 0.0;    // relative constrained residual
    bool direct = true;
};

/// Weighted P1 stiffness matrix; weight sampled at quadrature points only.
Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const WeightSpec& weight,
                                               int quad_order = 4);

/// Load vector of the unweighted pairing (f, v).
Eigen::VectorXd assemble_load(const Mesh& mesh, const std::function<double(Vec2)>& f,
                              int quad_order = 4);

/// Boundary nodal values implied by a problem's Dirichlet data (zero on
/// interior nodes).
Eigen::VectorXd boundary_values(const Mesh& mesh, const ProblemSpec& problem);

Field solve_dirichlet(const Mesh& mesh, const ProblemSpec& problem,
                      const SolveOptions& options = {}, SolveInfo* info = nullptr);

/// Same problem augmented with the penalty gamma * (u, v) on the region
/// omega (quadratic penalty pushing u toward zero there).
Field solve_dirichlet_penalized(const Mesh& mesh, const ProblemSpec& problem,
                                const RegionSpec& omega, double penalty,
                                const SolveOptions& options = {}, SolveInfo* info = nullptr);

/// Same problem with every node inside omega constrained to zero exactly.
Field solve_dirichlet_pinned(const Mesh& mesh, const ProblemSpec& problem,
                             const RegionSpec& omega, const SolveOptions& options = {},
                             SolveInfo* info = nullptr);

/// Quadratic functionals of a field: L2w = ∫ u^2 w, H1w_semi = ∫ |grad u|^2 w,
/// L2 = ∫ u^2.
struct NormReport {
    double l2w = 0.0;
    double h1w_semi = 0.0;
    double l2 = 0.0;
};

NormReport weighted_norms(const Field& field, const WeightSpec& weight, int quad_order = 4);

struct ApproximationResult {
    std::vector<int> ks;
    std::vector<Field> fields;       // u_k, one per k
    Field limit;                     // epsilon = 0 solution u_0
    std::vector<double> l2_distance; // ||u_k - u_0||_{L2}
    double stability_constant = 0.0; // fitted sup_k ||u_k||_{H1_wk} / ||f||_{L2(wk^-1)}
};

/// Solves the regularized problems with epsilon = 1/k for each k plus the
/// degenerate limit. Requires the problem's weight to have epsilon == 0 and
/// every 1/k to be resolved by at least two node rings.
ApproximationResult approximation_sequence(const Mesh& mesh, const ProblemSpec& problem,
                                           const std::vector<int>& ks,
                                           const SolveOptions& options = {});

/// Checks that at least two distinct node radii lie within radius r.
void require_resolved_radius(const Mesh& mesh, double r, const char* what);

}  // namespace dfem
