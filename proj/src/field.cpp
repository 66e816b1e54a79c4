#include "dfem/field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dfem {

void Field::validate() const {
    if (mesh == nullptr) throw std::invalid_argument("field: no mesh attached");
    if (values.size() != mesh->nodes.size())
        throw std::invalid_argument("field: value count differs from node count");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite value");
}

double Field::eval(int tri, Vec2 p) const {
    const auto& t = mesh->triangles[tri];
    const Vec2 a = mesh->nodes[t[0]];
    const Vec2 b = mesh->nodes[t[1]];
    const Vec2 c = mesh->nodes[t[2]];
    const double area = triangle_area(a, b, c);
    const double l0 = triangle_area(p, b, c) / area;
    const double l1 = triangle_area(a, p, c) / area;
    const double l2 = 1.0 - l0 - l1;
    return l0 * values[t[0]] + l1 * values[t[1]] + l2 * values[t[2]];
}

Vec2 Field::grad(int tri) const {
    const auto& t = mesh->triangles[tri];
    const Vec2 a = mesh->nodes[t[0]];
    const Vec2 b = mesh->nodes[t[1]];
    const Vec2 c = mesh->nodes[t[2]];
    const double inv2a = 1.0 / (2.0 * triangle_area(a, b, c));
    // grad phi_i = perp(opposite edge) / (2 area)
    const Vec2 g0{(b.y - c.y) * inv2a, (c.x - b.x) * inv2a};
    const Vec2 g1{(c.y - a.y) * inv2a, (a.x - c.x) * inv2a};
    const Vec2 g2{(a.y - b.y) * inv2a, (b.x - a.x) * inv2a};
    return values[t[0]] * g0 + values[t[1]] * g1 + values[t[2]] * g2;
}

Field make_field(const Mesh& mesh, const std::function<double(Vec2)>& f) {
    Field out;
    out.mesh = &mesh;
    out.hash = mesh_hash(mesh);
    out.values.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) out.values[i] = f(mesh.nodes[i]);
    out.validate();
    return out;
}

Field zero_field(const Mesh& mesh) {
    return make_field(mesh, [](Vec2) { return 0.0; });
}

Field random_interior_field(const Mesh& mesh, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field out = zero_field(mesh);
    const auto boundary = mesh.boundary_node_mask();
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (!boundary[i]) out.values[i] = dist(rng);
    return out;
}

}  // namespace dfem
