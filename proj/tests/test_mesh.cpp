#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "dfem/quadrature.hpp"

using namespace dfem;

namespace {

// Single reference triangle as a valid mesh.
Mesh reference_triangle() {
    Mesh m;
    m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}};
    m.boundary_edges = {{0, 1, "boundary"}, {1, 2, "boundary"}, {2, 0, "boundary"}};
    m.radius = 1.0;
    m.target_h = 1.0;
    m.grading = 1.0;
    m.validate();
    return m;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::size_t edge_count(const Mesh& m) {
    std::set<std::pair<int, int>> edges;
    for (const auto& t : m.triangles) {
        for (int i = 0; i < 3; ++i) {
            int a = t[i], b = t[(i + 1) % 3];
            if (a > b) std::swap(a, b);
            edges.insert({a, b});
        }
    }
    return edges.size();
}

}  // namespace

TEST_CASE("disc mesh: area, topology, grading") {
    const Mesh coarse = build_disc_mesh(1.0, 0.5, 1.0);
    CHECK(std::abs(coarse.area() - kPi) / kPi < 0.05);

    const Mesh fine = build_disc_mesh(1.0, 0.05, 2.0);
    CHECK(std::abs(fine.area() - kPi) / kPi < 0.005);

    for (const Mesh* m : {&coarse, &fine}) {
        const long V = static_cast<long>(m->nodes.size());
        const long E = static_cast<long>(edge_count(*m));
        const long F = static_cast<long>(m->triangles.size());
        CHECK(V - E + F == 1); // disc topology, outer face excluded
    }

    // The node radii follow (j/J)^grading.
    const auto radii = fine.ring_radii();
    const int J = static_cast<int>(radii.size());
    for (int j = 1; j <= J; ++j)
        CHECK(radii[j - 1] ==
              doctest::Approx(std::pow(static_cast<double>(j) / J, 2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(build_disc_mesh(-1.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_disc_mesh(1.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_disc_mesh(1.0, 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("refinement quadruples elements and shrinks the area defect") {
    const Mesh a = build_disc_mesh(1.0, 0.2, 2.0);
    const Mesh b = build_disc_mesh(1.0, 0.1, 2.0);
    CHECK(b.triangles.size() >= 4 * a.triangles.size());
    const double defect_a = kPi - a.area();
    const double defect_b = kPi - b.area();
    CHECK(defect_a > 0.0);
    CHECK(defect_b <= 0.5 * defect_a);
}

TEST_CASE("quadrature integrates monomials exactly on uncut elements") {
    const Mesh tri = reference_triangle();
    for (int order : {1, 2, 4, 5}) {
        const QuadRule rule = domain_quadrature(tri, order);
        for (int a = 0; a + 0 <= order; ++a) {
            for (int b = 0; a + b <= order; ++b) {
                double q = 0.0;
                for (const auto& p : rule.points)
                    q += p.w * std::pow(p.x.x, a) * std::pow(p.x.y, b);
                // ∫_T x^a y^b over the unit right triangle.
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                CHECK(q == doctest::Approx(exact).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("region quadrature: balls, annuli, cut cells") {
    const Mesh mesh = build_disc_mesh(1.0, 0.05, 2.0);

    const QuadRule ball = region_quadrature(mesh, RegionSpec::ball({0, 0}, 0.5), 4, 4);
    CHECK(std::abs(ball.total_weight() - kPi / 4.0) / (kPi / 4.0) < 1e-3);

    const QuadRule ann = region_quadrature(mesh, RegionSpec::annulus({0, 0}, 0.75, 1.0), 4, 5);
    const double exact = kPi * (1.0 - 0.75 * 0.75);
    CHECK(std::abs(ann.total_weight() - exact) / exact < 5e-3);

    const QuadRule off = region_quadrature(mesh, RegionSpec::ball({0.4, 0.2}, 0.25), 4, 5);
    const double ball_area = kPi * 0.25 * 0.25;
    CHECK(std::abs(off.total_weight() - ball_area) / ball_area < 2e-3);

    CHECK_THROWS_AS(region_quadrature(mesh, RegionSpec::ball({5.0, 0.0}, 0.2), 4, 4),
                    std::domain_error);
    CHECK_THROWS_AS(RegionSpec::annulus({0, 0}, 0.5, 0.25), std::invalid_argument);

    const QuadRule whole = domain_quadrature(mesh, 2);
    CHECK(whole.total_weight() == doctest::Approx(mesh.area()).epsilon(1e-12));
}

TEST_CASE("boundary markers and boundary-part quadrature") {
    const Mesh mesh = build_disc_mesh(1.0, 0.1, 1.0);

    const Mesh all = mark_boundary(mesh, 0.0, kTwoPi);
    for (const auto& e : all.boundary_edges) CHECK(e.marker == "Gamma");

    const Mesh half = mark_boundary(mesh, 0.0, kPi);
    double gamma_len = 0.0, rest_len = 0.0;
    for (const auto& e : half.boundary_edges) {
        const double len = norm(half.nodes[e.a] - half.nodes[e.b]);
        (e.marker == "Gamma" ? gamma_len : rest_len) += len;
    }
    CHECK(std::abs(gamma_len - kPi) < 0.1); // half circumference within h
    CHECK(std::abs(rest_len - kPi) < 0.1);

    const QuadRule edge_rule =
        region_quadrature(half, RegionSpec::boundary_part("Gamma"), 2);
    CHECK(edge_rule.total_weight() == doctest::Approx(gamma_len).epsilon(1e-12));

    CHECK_THROWS_AS(mark_boundary(mesh, 1.0, 1.0), std::invalid_argument);

    // Wrapping interval.
    const Mesh wrap = mark_boundary(mesh, 1.5 * kPi, 0.5 * kPi);
    double wrap_len = 0.0;
    for (const auto& e : wrap.boundary_edges)
        if (e.marker == "Gamma") wrap_len += norm(wrap.nodes[e.a] - wrap.nodes[e.b]);
    CHECK(std::abs(wrap_len - kPi) < 0.1);
}

TEST_CASE("point locator") {
    const Mesh mesh = build_disc_mesh(1.0, 0.1, 2.0);
    const PointLocator loc(mesh);
    for (const Vec2 p : {Vec2{0.0, 0.0}, Vec2{0.3, 0.2}, Vec2{-0.7, 0.1}, Vec2{0.0, -0.5}}) {
        const int t = loc.locate(p);
        REQUIRE(t >= 0);
        const auto& tri = mesh.triangles[t];
        CHECK(point_triangle_distance(p, mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                                      mesh.nodes[tri[2]]) == 0.0);
    }
    CHECK(loc.locate({2.0, 2.0}) == -1);
    CHECK(loc.locate_nearest({1.01, 0.0}) >= 0);
}

TEST_CASE("mesh hash is content sensitive") {
    const Mesh a = build_disc_mesh(1.0, 0.2, 1.0);
    Mesh b = a;
    CHECK(mesh_hash(a) == mesh_hash(b));
    b.nodes[1].x += 1e-12;
    CHECK(mesh_hash(a) != mesh_hash(b));
}
