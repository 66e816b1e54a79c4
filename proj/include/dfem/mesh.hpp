#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dfem/geometry.hpp"

namespace dfem {

/// Conforming P1 triangulation of an origin-centered disc. Nodes are laid
/// out on concentric rings r_j = R0 (j/J)^grading with 6j nodes on ring j,
/// so elements stay shape-regular while shrinking toward the degeneracy at
/// the origin (node 0).
struct Mesh {
    struct BoundaryEdge {
        int a = 0;
        int b = 0;
        std::string marker;
    };

    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // CCW node indices
    std::vector<BoundaryEdge> boundary_edges;

    double radius = 0.0;   // R0
    double target_h = 0.0; // requested outer mesh size
    double grading = 1.0;  // radial grading exponent

    double area() const;
    /// 1 for boundary nodes, 0 otherwise.
    std::vector<char> boundary_node_mask() const;
    /// Distinct node radii in increasing order (radius 0 excluded).
    std::vector<double> ring_radii() const;
    /// Throws std::invalid_argument when the triangulation is not a valid
    /// conforming disc mesh (orientation, hanging nodes, boundary cover).
    void validate() const;
};

Mesh build_disc_mesh(double R0, double h, double grading);

/// Marks boundary edges whose midpoint angle lies in [begin, begin+length)
/// (radians, wrapping) with "Gamma"; the rest get "rest". length >= 2*pi
/// marks everything. Throws on an empty interval.
Mesh mark_boundary(const Mesh& mesh, double angle_begin, double angle_end);

/// FNV-1a content hash of node coordinates and connectivity.
std::uint64_t mesh_hash(const Mesh& mesh);

struct RegionSpec {
    enum class Kind { Ball, Annulus, BoundaryPart, Domain };

    Kind kind = Kind::Domain;
    Vec2 center{0.0, 0.0};
    double r_inner = 0.0;
    double r_outer = 0.0;
    std::string marker; // boundary-part marker or subdomain name

    static RegionSpec ball(Vec2 c, double r);
    static RegionSpec annulus(Vec2 c, double rin, double rout);
    static RegionSpec boundary_part(std::string marker);
    static RegionSpec domain();

    void validate() const;
    bool contains(Vec2 p) const; // interior kinds only
};

/// Uniform-grid point location over mesh triangles.
class PointLocator {
public:
    explicit PointLocator(const Mesh& mesh);

    /// Triangle containing p, or -1 if p lies outside every triangle.
    int locate(Vec2 p) const;
    /// Always returns a triangle: nearest one when p is slightly outside.
    int locate_nearest(Vec2 p) const;

private:
    const Mesh* mesh_;
    double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_;

    void candidate_bins(Vec2 p, std::vector<int>& out) const;
};

}  // namespace dfem
