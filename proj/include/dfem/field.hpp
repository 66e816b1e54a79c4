#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dfem/mesh.hpp"

namespace dfem {

/// Nodal P1 scalar field on a mesh. The mesh is referenced, not owned, and
/// additionally pinned by content hash for serialization round trips.
struct Field {
    const Mesh* mesh = nullptr;
    std::uint64_t hash = 0;
    std::vector<double> values;

    struct Provenance {
        std::string problem;
        double solver_tol = 0.0;
        int iterations = 0;
    } provenance;

    void validate() const; // size match, finite values

    /// P1 interpolation inside triangle `tri`.
    double eval(int tri, Vec2 p) const;
    /// Piecewise-constant gradient of triangle `tri`.
    Vec2 grad(int tri) const;
};

Field make_field(const Mesh& mesh, const std::function<double(Vec2)>& f);
Field zero_field(const Mesh& mesh);

/// Interior nodal values from a seeded generator, zero on the boundary.
Field random_interior_field(const Mesh& mesh, unsigned seed);

}  // namespace dfem
