#include "topsig/complex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "topsig/error.hpp"

namespace topsig {

namespace {

// Parity of the permutation taking `sorted` to `source`: +1 even, -1 odd.
std::int8_t permutation_sign(const Triangle& source)
{
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (source[i] > source[j])
                ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

double degenerate_ratio(const Vec3& a, const Vec3& b, const Vec3& c, double& area)
{
    const Vec3 cross = (b - a).cross(c - a);
    area = 0.5 * cross.norm();
    const double longest = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    return longest > 0.0 ? area / longest : 0.0;
}

} // namespace

Index SimplicialComplex2::edge_index(Index a, Index b) const
{
    if (a > b)
        std::swap(a, b);
    const Edge key{a, b};
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key)
        return -1;
    return static_cast<Index>(it - edges_.begin());
}

SimplicialComplex2 build_complex(PointCloud points, std::span<const Triangle> triangle_list)
{
    const auto n = static_cast<Index>(points.size());
    if (n < 3)
        throw MeshError("point cloud needs at least 3 points, got " + std::to_string(n));
    for (Index i = 0; i < n; ++i)
        if (!points.positions[i].allFinite())
            throw MeshError("vertex " + std::to_string(i) + " has non-finite coordinates");
    if (points.colors && points.colors->size() != points.size())
        throw MeshError("color attribute count does not match the vertex count");
    if (triangle_list.empty())
        throw MeshError("mesh has no triangles");

    struct Entry {
        Triangle sorted;
        Triangle source;
        std::size_t input;
    };
    std::vector<Entry> entries;
    entries.reserve(triangle_list.size());

    for (std::size_t f = 0; f < triangle_list.size(); ++f) {
        const Triangle& tri = triangle_list[f];
        for (Index v : tri)
            if (v < 0 || v >= n) {
                std::ostringstream msg;
                msg << "triangle " << f << " references vertex " << v << " outside [0, " << n << ")";
                throw MeshError(msg.str());
            }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError("triangle " + std::to_string(f) + " repeats a vertex");

        double area = 0.0;
        const double ratio = degenerate_ratio(points.positions[tri[0]], points.positions[tri[1]],
                                              points.positions[tri[2]], area);
        if (ratio < kDegenerateAreaTolerance)
            throw MeshError("triangle " + std::to_string(f) + " is degenerate (zero area)");

        Triangle sorted = tri;
        std::sort(sorted.begin(), sorted.end());
        entries.push_back({sorted, tri, f});
    }

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.sorted < b.sorted; });
    for (std::size_t t = 1; t < entries.size(); ++t)
        if (entries[t].sorted == entries[t - 1].sorted) {
            std::ostringstream msg;
            msg << "duplicate triangle: input faces " << entries[t - 1].input << " and " << entries[t].input;
            throw MeshError(msg.str());
        }

    SimplicialComplex2 c;
    const std::size_t num_tris = entries.size();
    c.triangles_.reserve(num_tris);
    c.source_triangles_.reserve(num_tris);
    c.winding_sign_.reserve(num_tris);
    for (const Entry& e : entries) {
        c.triangles_.push_back(e.sorted);
        c.source_triangles_.push_back(e.source);
        c.winding_sign_.push_back(permutation_sign(e.source));
    }

    c.edges_.reserve(3 * num_tris);
    for (const Triangle& t : c.triangles_) {
        c.edges_.push_back({t[0], t[1]});
        c.edges_.push_back({t[0], t[2]});
        c.edges_.push_back({t[1], t[2]});
    }
    std::sort(c.edges_.begin(), c.edges_.end());
    c.edges_.erase(std::unique(c.edges_.begin(), c.edges_.end()), c.edges_.end());

    c.triangle_edges_.resize(num_tris);
    c.vertex_triangles_.assign(n, {});
    for (std::size_t t = 0; t < num_tris; ++t) {
        const Triangle& tri = c.triangles_[t];
        c.triangle_edges_[t] = {c.edge_index(tri[0], tri[1]), c.edge_index(tri[0], tri[2]),
                                c.edge_index(tri[1], tri[2])};
        for (Index v : tri)
            c.vertex_triangles_[v].push_back(static_cast<Index>(t));
    }
    for (Index v = 0; v < n; ++v)
        if (c.vertex_triangles_[v].empty())
            throw MeshError("vertex " + std::to_string(v) + " is isolated (belongs to no triangle)");

    const auto num_edges = static_cast<Index>(c.edges_.size());
    std::vector<Eigen::Triplet<int>> b1;
    b1.reserve(2 * num_edges);
    for (Index e = 0; e < num_edges; ++e) {
        b1.emplace_back(c.edges_[e][0], e, -1);
        b1.emplace_back(c.edges_[e][1], e, +1);
    }
    c.b1_.resize(n, num_edges);
    c.b1_.setFromTriplets(b1.begin(), b1.end());

    // Boundary sign of the face obtained by dropping vertex j is (-1)^j.
    std::vector<Eigen::Triplet<int>> b2;
    b2.reserve(3 * num_tris);
    for (std::size_t t = 0; t < num_tris; ++t) {
        const auto& te = c.triangle_edges_[t];
        const auto col = static_cast<Index>(t);
        b2.emplace_back(te[2], col, +1);
        b2.emplace_back(te[1], col, -1);
        b2.emplace_back(te[0], col, +1);
    }
    c.b2_.resize(num_edges, static_cast<Index>(num_tris));
    c.b2_.setFromTriplets(b2.begin(), b2.end());

    c.points_ = std::move(points);
    return c;
}

TriangleGeometry triangle_geometry(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 cross = (b - a).cross(c - a);
    const double norm = cross.norm();
    const double longest = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    if (!(norm > 1e-14 * longest) || longest == 0.0)
        throw MeshError("degenerate triangle geometry");

    TriangleGeometry g;
    g.normal = cross / norm;
    g.area = 0.5 * norm;
    g.barycenter = (a + b + c) / 3.0;
    g.tangent_projector = Mat3::Identity() - g.normal * g.normal.transpose();
    return g;
}

std::vector<TriangleGeometry> triangle_geometry(const SimplicialComplex2& complex)
{
    const auto& pos = complex.points().positions;
    std::vector<TriangleGeometry> out;
    out.reserve(complex.num_triangles());
    for (std::size_t t = 0; t < complex.num_triangles(); ++t) {
        const Triangle& w = complex.source_triangles()[t];
        try {
            out.push_back(triangle_geometry(pos[w[0]], pos[w[1]], pos[w[2]]));
        } catch (const MeshError&) {
            throw MeshError("triangle " + std::to_string(t) + " has degenerate geometry");
        }
    }
    return out;
}

long euler_characteristic(const SimplicialComplex2& complex)
{
    return static_cast<long>(complex.num_vertices()) - static_cast<long>(complex.num_edges()) +
           static_cast<long>(complex.num_triangles());
}

} // namespace topsig
