#include "dfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <stdexcept>

namespace dfem {

double point_triangle_distance(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    // Inside test via signs against all three edges (orientation-agnostic).
    const double d1 = cross(b - a, p - a);
    const double d2 = cross(c - b, p - b);
    const double d3 = cross(a - c, p - c);
    const bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
    const bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
    if (!(has_neg && has_pos)) return 0.0;

    auto seg_dist = [](Vec2 q, Vec2 s0, Vec2 s1) {
        const Vec2 d = s1 - s0;
        const double len2 = norm2(d);
        double t = len2 > 0.0 ? dot(q - s0, d) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return norm(q - (s0 + t * d));
    };
    return std::min({seg_dist(p, a, b), seg_dist(p, b, c), seg_dist(p, c, a)});
}

double Mesh::area() const {
    double s = 0.0;
    for (const auto& t : triangles)
        s += triangle_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
    return s;
}

std::vector<char> Mesh::boundary_node_mask() const {
    std::vector<char> mask(nodes.size(), 0);
    for (const auto& e : boundary_edges) {
        mask[e.a] = 1;
        mask[e.b] = 1;
    }
    return mask;
}

std::vector<double> Mesh::ring_radii() const {
    std::vector<double> radii;
    radii.reserve(nodes.size());
    for (const auto& p : nodes) {
        const double r = norm(p);
        if (r > 0.0) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    std::vector<double> distinct;
    for (double r : radii) {
        if (distinct.empty() || r > distinct.back() * (1.0 + 1e-12))
            distinct.push_back(r);
    }
    return distinct;
}

void Mesh::validate() const {
    if (nodes.size() < 3 || triangles.empty())
        throw std::invalid_argument("mesh: too few nodes or triangles");
    for (const auto& t : triangles) {
        for (int v : t)
            if (v < 0 || v >= static_cast<int>(nodes.size()))
                throw std::invalid_argument("mesh: triangle index out of range");
        if (triangle_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]) <= 0.0)
            throw std::invalid_argument("mesh: nonpositive triangle area");
    }

    // Conformity: every edge belongs to one or two triangles; single-count
    // edges must exactly match the marked boundary.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : triangles) {
        for (int i = 0; i < 3; ++i) {
            int a = t[i], b = t[(i + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    std::set<std::pair<int, int>> boundary_set;
    for (const auto& e : boundary_edges) {
        int a = e.a, b = e.b;
        if (a > b) std::swap(a, b);
        if (e.marker.empty())
            throw std::invalid_argument("mesh: boundary edge without marker");
        if (!boundary_set.insert({a, b}).second)
            throw std::invalid_argument("mesh: duplicated boundary edge");
    }
    for (const auto& [edge, count] : edge_count) {
        if (count > 2)
            throw std::invalid_argument("mesh: edge shared by more than two triangles");
        const bool on_boundary = boundary_set.count(edge) > 0;
        if (count == 1 && !on_boundary)
            throw std::invalid_argument("mesh: unmarked boundary edge (hanging node?)");
        if (count == 2 && on_boundary)
            throw std::invalid_argument("mesh: interior edge marked as boundary");
    }
    if (boundary_set.size() != boundary_edges.size())
        throw std::invalid_argument("mesh: boundary edge list inconsistent");
}

Mesh build_disc_mesh(double R0, double h, double grading) {
    if (!(R0 > 0.0))
        throw std::invalid_argument("build_disc_mesh: R0 must be positive");
    if (!(h > 0.0 && h < R0))
        throw std::invalid_argument("build_disc_mesh: h must lie in (0, R0)");
    if (!(grading >= 1.0))
        throw std::invalid_argument("build_disc_mesh: grading exponent must be >= 1");

    const int rings = std::max(2, static_cast<int>(std::ceil(grading * R0 / h)));

    Mesh m;
    m.radius = R0;
    m.target_h = h;
    m.grading = grading;

    m.nodes.reserve(1 + 3 * rings * (rings + 1));
    m.nodes.push_back({0.0, 0.0});
    for (int j = 1; j <= rings; ++j) {
        const double r = R0 * std::pow(static_cast<double>(j) / rings, grading);
        const int n = 6 * j;
        for (int i = 0; i < n; ++i) {
            const double t = kTwoPi * i / n;
            m.nodes.push_back({r * std::cos(t), r * std::sin(t)});
        }
    }

    auto ring_node = [](int j, int i) {
        const int n = 6 * j;
        i %= n;
        if (i < 0) i += n;
        return 1 + 3 * j * (j - 1) + i;
    };

    m.triangles.reserve(6 * rings * rings);
    for (int i = 0; i < 6; ++i)
        m.triangles.push_back({0, ring_node(1, i), ring_node(1, i + 1)});
    for (int j = 1; j < rings; ++j) {
        for (int s = 0; s < 6; ++s) {
            for (int t = 0; t <= j; ++t) {
                m.triangles.push_back({ring_node(j, s * j + t),
                                       ring_node(j + 1, s * (j + 1) + t),
                                       ring_node(j + 1, s * (j + 1) + t + 1)});
                if (t < j)
                    m.triangles.push_back({ring_node(j, s * j + t),
                                           ring_node(j + 1, s * (j + 1) + t + 1),
                                           ring_node(j, s * j + t + 1)});
            }
        }
    }
    for (auto& t : m.triangles) {
        if (triangle_area(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]) < 0.0)
            std::swap(t[1], t[2]);
    }

    const int n_outer = 6 * rings;
    for (int i = 0; i < n_outer; ++i)
        m.boundary_edges.push_back({ring_node(rings, i), ring_node(rings, i + 1), "boundary"});

    m.validate();
    return m;
}

Mesh mark_boundary(const Mesh& mesh, double angle_begin, double angle_end) {
    double length = angle_end - angle_begin;
    if (length < 0.0) length += kTwoPi;
    if (!(length > 0.0))
        throw std::invalid_argument("mark_boundary: empty angular interval");

    Mesh out = mesh;
    const bool full = length >= kTwoPi * (1.0 - 1e-15);
    for (auto& e : out.boundary_edges) {
        const Vec2 mid = 0.5 * (mesh.nodes[e.a] + mesh.nodes[e.b]);
        double t = angle_of(mid) - angle_begin;
        t = std::fmod(t, kTwoPi);
        if (t < 0.0) t += kTwoPi;
        e.marker = (full || t < length) ? "Gamma" : "rest";
    }
    return out;
}

std::uint64_t mesh_hash(const Mesh& mesh) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& p : mesh.nodes) {
        mix(&p.x, sizeof(double));
        mix(&p.y, sizeof(double));
    }
    for (const auto& t : mesh.triangles) mix(t.data(), sizeof(int) * 3);
    return h;
}

RegionSpec RegionSpec::ball(Vec2 c, double r) {
    RegionSpec s;
    s.kind = Kind::Ball;
    s.center = c;
    s.r_outer = r;
    s.validate();
    return s;
}

RegionSpec RegionSpec::annulus(Vec2 c, double rin, double rout) {
    RegionSpec s;
    s.kind = Kind::Annulus;
    s.center = c;
    s.r_inner = rin;
    s.r_outer = rout;
    s.validate();
    return s;
}

RegionSpec RegionSpec::boundary_part(std::string marker) {
    RegionSpec s;
    s.kind = Kind::BoundaryPart;
    s.marker = std::move(marker);
    return s;
}

RegionSpec RegionSpec::domain() {
    RegionSpec s;
    s.kind = Kind::Domain;
    return s;
}

void RegionSpec::validate() const {
    switch (kind) {
        case Kind::Ball:
            if (!(r_outer > 0.0))
                throw std::invalid_argument("region: ball radius must be positive");
            break;
        case Kind::Annulus:
            if (!(r_inner >= 0.0 && r_outer > r_inner))
                throw std::invalid_argument("region: annulus radii must be ordered increasingly");
            break;
        case Kind::BoundaryPart:
            if (marker.empty())
                throw std::invalid_argument("region: boundary part needs a marker");
            break;
        case Kind::Domain:
            break;
    }
}

bool RegionSpec::contains(Vec2 p) const {
    switch (kind) {
        case Kind::Ball:
            return norm(p - center) <= r_outer;
        case Kind::Annulus: {
            const double d = norm(p - center);
            return d >= r_inner && d <= r_outer;
        }
        case Kind::Domain:
            return true;
        case Kind::BoundaryPart:
            return false;
    }
    return false;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : mesh.nodes) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const int target = std::max(1, static_cast<int>(std::sqrt(mesh.triangles.size())));
    nx_ = ny_ = target;
    cell_ = std::max((xmax - xmin) / nx_, (ymax - ymin) / ny_);
    if (!(cell_ > 0.0)) cell_ = 1.0;
    x0_ = xmin;
    y0_ = ymin;
    nx_ = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / cell_)));
    bins_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        double txmin = 1e300, txmax = -1e300, tymin = 1e300, tymax = -1e300;
        for (int v : tri) {
            txmin = std::min(txmin, mesh.nodes[v].x);
            txmax = std::max(txmax, mesh.nodes[v].x);
            tymin = std::min(tymin, mesh.nodes[v].y);
            tymax = std::max(tymax, mesh.nodes[v].y);
        }
        const int i0 = std::clamp(static_cast<int>((txmin - x0_) / cell_), 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>((txmax - x0_) / cell_), 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>((tymin - y0_) / cell_), 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>((tymax - y0_) / cell_), 0, ny_ - 1);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                bins_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
    }
}

void PointLocator::candidate_bins(Vec2 p, std::vector<int>& out) const {
    const int i = std::clamp(static_cast<int>((p.x - x0_) / cell_), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>((p.y - y0_) / cell_), 0, ny_ - 1);
    out = bins_[static_cast<std::size_t>(j) * nx_ + i];
}

int PointLocator::locate(Vec2 p) const {
    std::vector<int> cand;
    candidate_bins(p, cand);
    for (int t : cand) {
        const auto& tri = mesh_->triangles[t];
        if (point_triangle_distance(p, mesh_->nodes[tri[0]], mesh_->nodes[tri[1]],
                                    mesh_->nodes[tri[2]]) == 0.0)
            return t;
    }
    return -1;
}

int PointLocator::locate_nearest(Vec2 p) const {
    const int hit = locate(p);
    if (hit >= 0) return hit;
    std::vector<int> cand;
    candidate_bins(p, cand);
    double best = 1e300;
    int best_t = -1;
    auto consider = [&](int t) {
        const auto& tri = mesh_->triangles[t];
        const double d = point_triangle_distance(p, mesh_->nodes[tri[0]], mesh_->nodes[tri[1]],
                                                 mesh_->nodes[tri[2]]);
        if (d < best) {
            best = d;
            best_t = t;
        }
    };
    for (int t : cand) consider(t);
    if (best_t < 0) {
        for (int t = 0; t < static_cast<int>(mesh_->triangles.size()); ++t) consider(t);
    }
    return best_t;
}

}  // namespace dfem
