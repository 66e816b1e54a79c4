#pragma once

#include <vector>

#include "dfem/mesh.hpp"

namespace dfem {

/// Symmetric interior rule on the reference triangle, in barycentric
/// coordinates with weights summing to one. Orders 1, 2, 4 and 5 are exact
/// for polynomials of that degree; higher requests clamp to degree 5.
struct TriRule {
    int degree = 1;
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;

    static const TriRule& for_order(int order);
};

struct QuadPoint {
    Vec2 x;
    double w = 0.0;
    int tri = -1; // owning mesh triangle
};

struct QuadRule {
    std::vector<QuadPoint> points;

    double total_weight() const {
        double s = 0.0;
        for (const auto& p : points) s += p.w;
        return s;
    }
};

/// Quadrature over region ∩ mesh. Elements cut by a region boundary are
/// recursively bisected (cut_depth levels) before the base rule is applied;
/// at the deepest level a sub-triangle counts by its centroid.
/// BoundaryPart regions yield a 1-D Gauss rule along marked edges (tri = -1,
/// weights summing to arc length). Throws std::domain_error when the
/// intersection is empty.
QuadRule region_quadrature(const Mesh& mesh, const RegionSpec& region, int order,
                           int cut_depth = 5);

/// Rule over the whole mesh (every element, no cutting).
QuadRule domain_quadrature(const Mesh& mesh, int order);

}  // namespace dfem
