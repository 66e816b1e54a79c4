#include "dfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dfem {

namespace {

TriRule make_rule(int degree) {
    TriRule r;
    r.degree = degree;
    auto push3 = [&r](double a, double b, double w) {
        r.bary.push_back({a, b, b});
        r.bary.push_back({b, a, b});
        r.bary.push_back({b, b, a});
        r.weights.insert(r.weights.end(), 3, w);
    };
    switch (degree) {
        case 1:
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(1.0);
            break;
        case 2:
            push3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 4:
            push3(0.108103018168070, 0.445948490915965, 0.223381589678011);
            push3(0.816847572980459, 0.091576213509771, 0.109951743655322);
            break;
        case 5:
        default:
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(0.225);
            push3(0.059715871789770, 0.470142064105115, 0.132394152788506);
            push3(0.797426985353087, 0.101286507323456, 0.125939180544827);
            break;
    }
    return r;
}

const TriRule rule1 = make_rule(1);
const TriRule rule2 = make_rule(2);
const TriRule rule4 = make_rule(4);
const TriRule rule5 = make_rule(5);

enum class Overlap { Empty, Full, Cut };

Overlap classify_ball(Vec2 a, Vec2 b, Vec2 c, Vec2 center, double r) {
    const double da = norm(a - center);
    const double db = norm(b - center);
    const double dc = norm(c - center);
    if (std::max({da, db, dc}) <= r) return Overlap::Full; // balls are convex
    if (point_triangle_distance(center, a, b, c) >= r) return Overlap::Empty;
    return Overlap::Cut;
}

/// Overlap with the complement of the open ball B(center, r).
Overlap classify_ball_complement(Vec2 a, Vec2 b, Vec2 c, Vec2 center, double r) {
    if (point_triangle_distance(center, a, b, c) >= r) return Overlap::Full;
    const double da = norm(a - center);
    const double db = norm(b - center);
    const double dc = norm(c - center);
    if (std::max({da, db, dc}) <= r) return Overlap::Empty;
    return Overlap::Cut;
}

Overlap combine(Overlap u, Overlap v) {
    if (u == Overlap::Empty || v == Overlap::Empty) return Overlap::Empty;
    if (u == Overlap::Full && v == Overlap::Full) return Overlap::Full;
    return Overlap::Cut;
}

Overlap classify(const RegionSpec& region, Vec2 a, Vec2 b, Vec2 c) {
    switch (region.kind) {
        case RegionSpec::Kind::Domain:
            return Overlap::Full;
        case RegionSpec::Kind::Ball:
            return classify_ball(a, b, c, region.center, region.r_outer);
        case RegionSpec::Kind::Annulus:
            return combine(classify_ball(a, b, c, region.center, region.r_outer),
                           classify_ball_complement(a, b, c, region.center, region.r_inner));
        case RegionSpec::Kind::BoundaryPart:
            return Overlap::Empty;
    }
    return Overlap::Empty;
}

void emit_triangle(const TriRule& rule, int tri, Vec2 a, Vec2 b, Vec2 c, QuadRule& out,
                   double fraction = 1.0) {
    const double area = std::abs(triangle_area(a, b, c)) * fraction;
    if (area <= 0.0) return;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.bary[q];
        out.points.push_back(
            {{l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y},
             rule.weights[q] * area,
             tri});
    }
}

/// Inside-area fraction of a leaf triangle, estimated from the centroids of
/// two more virtual bisection levels (16 sub-triangles).
double leaf_fraction(const RegionSpec& region, Vec2 a, Vec2 b, Vec2 c, int level = 2) {
    if (level == 0) {
        const Vec2 centroid = (1.0 / 3.0) * (a + b + c);
        return region.contains(centroid) ? 1.0 : 0.0;
    }
    const Vec2 mab = 0.5 * (a + b);
    const Vec2 mbc = 0.5 * (b + c);
    const Vec2 mca = 0.5 * (c + a);
    return 0.25 * (leaf_fraction(region, a, mab, mca, level - 1) +
                   leaf_fraction(region, mab, b, mbc, level - 1) +
                   leaf_fraction(region, mca, mbc, c, level - 1) +
                   leaf_fraction(region, mab, mbc, mca, level - 1));
}

void emit_region(const RegionSpec& region, const TriRule& rule, int tri, Vec2 a, Vec2 b,
                 Vec2 c, int depth, QuadRule& out) {
    switch (classify(region, a, b, c)) {
        case Overlap::Empty:
            return;
        case Overlap::Full:
            emit_triangle(rule, tri, a, b, c, out);
            return;
        case Overlap::Cut:
            break;
    }
    if (depth == 0) {
        emit_triangle(rule, tri, a, b, c, out, leaf_fraction(region, a, b, c));
        return;
    }
    const Vec2 mab = 0.5 * (a + b);
    const Vec2 mbc = 0.5 * (b + c);
    const Vec2 mca = 0.5 * (c + a);
    emit_region(region, rule, tri, a, mab, mca, depth - 1, out);
    emit_region(region, rule, tri, mab, b, mbc, depth - 1, out);
    emit_region(region, rule, tri, mca, mbc, c, depth - 1, out);
    emit_region(region, rule, tri, mab, mbc, mca, depth - 1, out);
}

QuadRule boundary_part_rule(const Mesh& mesh, const RegionSpec& region, int order) {
    // Gauss-Legendre on [-1,1]; two points cover order <= 3, three beyond.
    std::vector<double> gx, gw;
    if (order <= 3) {
        const double g = 1.0 / std::sqrt(3.0);
        gx = {-g, g};
        gw = {1.0, 1.0};
    } else {
        const double g = std::sqrt(0.6);
        gx = {-g, 0.0, g};
        gw = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    }
    QuadRule out;
    for (const auto& e : mesh.boundary_edges) {
        if (e.marker != region.marker) continue;
        const Vec2 a = mesh.nodes[e.a];
        const Vec2 b = mesh.nodes[e.b];
        const double half_len = 0.5 * norm(b - a);
        const Vec2 mid = 0.5 * (a + b);
        const Vec2 dir = 0.5 * (b - a);
        for (std::size_t q = 0; q < gx.size(); ++q)
            out.points.push_back({mid + gx[q] * dir, gw[q] * half_len, -1});
    }
    if (out.points.empty())
        throw std::domain_error("region_quadrature: no boundary edges carry marker '" +
                                region.marker + "'");
    return out;
}

}  // namespace

const TriRule& TriRule::for_order(int order) {
    if (order <= 1) return rule1;
    if (order == 2) return rule2;
    if (order <= 4) return rule4;
    return rule5;
}

QuadRule region_quadrature(const Mesh& mesh, const RegionSpec& region, int order,
                           int cut_depth) {
    region.validate();
    if (region.kind == RegionSpec::Kind::BoundaryPart)
        return boundary_part_rule(mesh, region, order);
    if (region.kind == RegionSpec::Kind::Domain && !region.marker.empty() &&
        region.marker != "domain" && region.marker != "Omega")
        throw std::invalid_argument("region_quadrature: unknown subdomain '" + region.marker +
                                    "'");

    const TriRule& rule = TriRule::for_order(order);
    QuadRule out;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        emit_region(region, rule, t, mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                    mesh.nodes[tri[2]], cut_depth, out);
    }
    if (out.points.empty())
        throw std::domain_error("region_quadrature: region does not intersect the mesh");
    return out;
}

QuadRule domain_quadrature(const Mesh& mesh, int order) {
    return region_quadrature(mesh, RegionSpec::domain(), order, 0);
}

}  // namespace dfem
