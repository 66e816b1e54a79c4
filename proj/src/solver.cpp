#include "dfem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfem {

namespace {

struct ElementGeometry {
    Vec2 grad[3];
    double area;
};

ElementGeometry element_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.nodes[tri[0]];
    const Vec2 b = mesh.nodes[tri[1]];
    const Vec2 c = mesh.nodes[tri[2]];
    ElementGeometry g;
    g.area = triangle_area(a, b, c);
    const double inv2a = 1.0 / (2.0 * g.area);
    g.grad[0] = {(b.y - c.y) * inv2a, (c.x - b.x) * inv2a};
    g.grad[1] = {(c.y - a.y) * inv2a, (a.x - c.x) * inv2a};
    g.grad[2] = {(a.y - b.y) * inv2a, (b.x - a.x) * inv2a};
    return g;
}

std::vector<char> dirichlet_mask(const Mesh& mesh) {
    return mesh.boundary_node_mask();
}

}  // namespace

Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const WeightSpec& weight,
                                               int quad_order) {
    weight.validate();
    const TriRule& rule = TriRule::for_order(quad_order);
    const int n = static_cast<int>(mesh.nodes.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.triangles.size() * 9);
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        const ElementGeometry g = element_geometry(mesh, t);
        const Vec2 a = mesh.nodes[tri[0]];
        const Vec2 b = mesh.nodes[tri[1]];
        const Vec2 c = mesh.nodes[tri[2]];
        double wint = 0.0;
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& l = rule.bary[q];
            const Vec2 p{l[0] * a.x + l[1] * b.x + l[2] * c.x,
                         l[0] * a.y + l[1] * b.y + l[2] * c.y};
            wint += rule.weights[q] * weight_value(weight, p);
        }
        wint *= g.area;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                triplets.emplace_back(tri[i], tri[j], wint * dot(g.grad[i], g.grad[j]));
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    return A;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const std::function<double(Vec2)>& f,
                              int quad_order) {
    const int n = static_cast<int>(mesh.nodes.size());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    if (!f) return b;
    const TriRule& rule = TriRule::for_order(quad_order);
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 va = mesh.nodes[tri[0]];
        const Vec2 vb = mesh.nodes[tri[1]];
        const Vec2 vc = mesh.nodes[tri[2]];
        const double area = triangle_area(va, vb, vc);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& l = rule.bary[q];
            const Vec2 p{l[0] * va.x + l[1] * vb.x + l[2] * vc.x,
                         l[0] * va.y + l[1] * vb.y + l[2] * vc.y};
            const double fv = f(p);
            if (!std::isfinite(fv))
                throw std::invalid_argument("assemble_load: rhs not finite at a quadrature point");
            const double w = rule.weights[q] * area * fv;
            for (int i = 0; i < 3; ++i) b[tri[i]] += w * l[i];
        }
    }
    return b;
}

Eigen::VectorXd boundary_values(const Mesh& mesh, const ProblemSpec& problem) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh.nodes.size());
    // Non-zero markers first, zero markers overwrite at interfaces.
    for (const auto& e : mesh.boundary_edges) {
        if (problem.zero_markers.count(e.marker)) continue;
        auto it = problem.dirichlet.find(e.marker);
        if (it == problem.dirichlet.end())
            throw std::invalid_argument("solve: boundary marker '" + e.marker +
                                        "' has no Dirichlet datum");
        if (it->second) {
            g[e.a] = it->second(mesh.nodes[e.a]);
            g[e.b] = it->second(mesh.nodes[e.b]);
        }
    }
    for (const auto& e : mesh.boundary_edges) {
        if (!problem.zero_markers.count(e.marker)) continue;
        g[e.a] = 0.0;
        g[e.b] = 0.0;
    }
    return g;
}

namespace {

Field solve_constrained(const Mesh& mesh, const ProblemSpec& problem,
                        const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& load,
                        const std::vector<char>& constrained, const Eigen::VectorXd& fixed,
                        const SolveOptions& options, SolveInfo* info) {
    const int n = static_cast<int>(mesh.nodes.size());
    std::vector<int> free_index(n, -1);
    int n_free = 0;
    for (int i = 0; i < n; ++i)
        if (!constrained[i]) free_index[i] = n_free++;

    Eigen::VectorXd rhs_full = load - A * fixed;
    Eigen::VectorXd rhs(n_free);
    for (int i = 0; i < n; ++i)
        if (free_index[i] >= 0) rhs[free_index[i]] = rhs_full[i];

    std::vector<Eigen::Triplet<double>> triplets;
    for (int k = 0; k < A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
            const int i = free_index[static_cast<int>(it.row())];
            const int j = free_index[static_cast<int>(it.col())];
            if (i >= 0 && j >= 0) triplets.emplace_back(i, j, it.value());
        }
    }
    Eigen::SparseMatrix<double> K(n_free, n_free);
    K.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd u_free(n_free);
    SolveInfo local;
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        u_free.setZero();
        local.residual = 0.0;
    } else if (n_free < options.direct_limit) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("solve: factorization failed");
        u_free = ldlt.solve(rhs);
        // Iterative refinement keeps the constrained residual at roundoff
        // even for badly conditioned graded systems.
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd r = rhs - K * u_free;
            if (r.norm() <= 1e-15 * rhs_norm) break;
            u_free += ldlt.solve(r);
        }
        local.direct = true;
        local.residual = (rhs - K * u_free).norm() / rhs_norm;
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg(K);
        cg.setTolerance(options.tol * 0.1);
        cg.setMaxIterations(options.max_iter);
        u_free = cg.solve(rhs);
        local.direct = false;
        local.iterations = static_cast<int>(cg.iterations());
        local.residual = (rhs - K * u_free).norm() / rhs_norm;
    }
    if (!(local.residual <= options.tol))
        throw std::runtime_error("solve: residual " + std::to_string(local.residual) +
                                 " exceeds tolerance");

    Field out;
    out.mesh = &mesh;
    out.hash = mesh_hash(mesh);
    out.values.resize(n);
    for (int i = 0; i < n; ++i)
        out.values[i] = constrained[i] ? fixed[i] : u_free[free_index[i]];
    out.provenance.solver_tol = options.tol;
    out.provenance.iterations = local.iterations;
    out.validate();
    if (info) *info = local;
    return out;
}

}  // namespace

Field solve_dirichlet(const Mesh& mesh, const ProblemSpec& problem,
                      const SolveOptions& options, SolveInfo* info) {
    problem.weight.validate();
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    const auto A = assemble_stiffness(mesh, problem.weight, options.quad_order);
    const auto load = assemble_load(mesh, problem.rhs, options.quad_order);
    const auto constrained = dirichlet_mask(mesh);
    const auto fixed = boundary_values(mesh, problem);
    Field out = solve_constrained(mesh, problem, A, load, constrained, fixed, options, info);
    out.provenance.problem = "dirichlet";
    return out;
}

Field solve_dirichlet_penalized(const Mesh& mesh, const ProblemSpec& problem,
                                const RegionSpec& omega, double penalty,
                                const SolveOptions& options, SolveInfo* info) {
    if (!(penalty >= 0.0)) throw std::invalid_argument("solve: penalty must be nonnegative");
    problem.weight.validate();
    Eigen::SparseMatrix<double> A =
        assemble_stiffness(mesh, problem.weight, options.quad_order);

    // Penalty mass on omega assembled from the cut-cell rule.
    const QuadRule rule = region_quadrature(mesh, omega, options.quad_order);
    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& qp : rule.points) {
        const auto& tri = mesh.triangles[qp.tri];
        const Vec2 a = mesh.nodes[tri[0]];
        const Vec2 b = mesh.nodes[tri[1]];
        const Vec2 c = mesh.nodes[tri[2]];
        const double area = triangle_area(a, b, c);
        const double l0 = triangle_area(qp.x, b, c) / area;
        const double l1 = triangle_area(a, qp.x, c) / area;
        const double l2 = 1.0 - l0 - l1;
        const double bary[3] = {l0, l1, l2};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                triplets.emplace_back(tri[i], tri[j], penalty * qp.w * bary[i] * bary[j]);
    }
    Eigen::SparseMatrix<double> M(mesh.nodes.size(), mesh.nodes.size());
    M.setFromTriplets(triplets.begin(), triplets.end());
    A += M;

    const auto load = assemble_load(mesh, problem.rhs, options.quad_order);
    const auto constrained = dirichlet_mask(mesh);
    const auto fixed = boundary_values(mesh, problem);
    Field out = solve_constrained(mesh, problem, A, load, constrained, fixed, options, info);
    out.provenance.problem = "dirichlet+penalty";
    return out;
}

Field solve_dirichlet_pinned(const Mesh& mesh, const ProblemSpec& problem,
                             const RegionSpec& omega, const SolveOptions& options,
                             SolveInfo* info) {
    problem.weight.validate();
    const auto A = assemble_stiffness(mesh, problem.weight, options.quad_order);
    const auto load = assemble_load(mesh, problem.rhs, options.quad_order);
    auto constrained = dirichlet_mask(mesh);
    Eigen::VectorXd fixed = boundary_values(mesh, problem);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (omega.contains(mesh.nodes[i])) {
            constrained[i] = 1;
            fixed[static_cast<Eigen::Index>(i)] = 0.0;
        }
    }
    Field out = solve_constrained(mesh, problem, A, load, constrained, fixed, options, info);
    out.provenance.problem = "dirichlet+pinned";
    return out;
}

NormReport weighted_norms(const Field& field, const WeightSpec& weight, int quad_order) {
    field.validate();
    weight.validate();
    const Mesh& mesh = *field.mesh;
    const TriRule& rule = TriRule::for_order(quad_order);
    NormReport n;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 a = mesh.nodes[tri[0]];
        const Vec2 b = mesh.nodes[tri[1]];
        const Vec2 c = mesh.nodes[tri[2]];
        const double area = triangle_area(a, b, c);
        const Vec2 g = field.grad(t);
        const double g2 = norm2(g);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& l = rule.bary[q];
            const Vec2 p{l[0] * a.x + l[1] * b.x + l[2] * c.x,
                         l[0] * a.y + l[1] * b.y + l[2] * c.y};
            const double v = l[0] * field.values[tri[0]] + l[1] * field.values[tri[1]] +
                             l[2] * field.values[tri[2]];
            const double wq = rule.weights[q] * area;
            const double wv = weight_value(weight, p);
            n.l2w += wq * wv * v * v;
            n.h1w_semi += wq * wv * g2;
            n.l2 += wq * v * v;
        }
    }
    return n;
}

void require_resolved_radius(const Mesh& mesh, double r, const char* what) {
    const auto radii = mesh.ring_radii();
    int inside = 0;
    for (double rr : radii) {
        if (rr <= r * (1.0 + 1e-12)) ++inside;
        if (inside >= 2) return;
    }
    throw std::runtime_error(std::string(what) +
                             ": radius under-resolved (needs two node rings inside)");
}

ApproximationResult approximation_sequence(const Mesh& mesh, const ProblemSpec& problem,
                                           const std::vector<int>& ks,
                                           const SolveOptions& options) {
    if (problem.weight.epsilon != 0.0)
        throw std::invalid_argument("approximation_sequence: base weight must have epsilon 0");
    if (ks.empty()) throw std::invalid_argument("approximation_sequence: empty k list");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i)
        if (ks[i] >= ks[i + 1])
            throw std::invalid_argument("approximation_sequence: ks must increase strictly");
    for (int k : ks) {
        if (k < 1) throw std::invalid_argument("approximation_sequence: k must be positive");
        require_resolved_radius(mesh, 1.0 / k, "approximation_sequence");
    }

    ApproximationResult res;
    res.ks = ks;
    res.limit = solve_dirichlet(mesh, problem, options);

    const QuadRule domain_rule = domain_quadrature(mesh, options.quad_order);
    auto l2_diff = [&](const Field& u, const Field& v) {
        double s = 0.0;
        for (const auto& qp : domain_rule.points) {
            const double d = u.eval(qp.tri, qp.x) - v.eval(qp.tri, qp.x);
            s += qp.w * d * d;
        }
        return std::sqrt(s);
    };

    double worst_stability = 0.0;
    for (int k : ks) {
        ProblemSpec pk = problem;
        pk.weight = problem.weight.with_epsilon(1.0 / k);
        Field uk = solve_dirichlet(mesh, pk, options);
        res.l2_distance.push_back(l2_diff(uk, res.limit));

        const NormReport norms = weighted_norms(uk, pk.weight, options.quad_order);
        double load2 = 0.0; // ∫ f^2 / w_k
        if (problem.rhs) {
            for (const auto& qp : domain_rule.points) {
                const double f = problem.rhs(qp.x);
                load2 += qp.w * f * f / weight_value(pk.weight, qp.x);
            }
        }
        if (load2 > 0.0)
            worst_stability =
                std::max(worst_stability, std::sqrt((norms.l2w + norms.h1w_semi) / load2));
        res.fields.push_back(std::move(uk));
    }
    res.stability_constant = worst_stability;
    return res;
}

}  // namespace dfem
