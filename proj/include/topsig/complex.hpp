#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace topsig {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Index = std::int32_t;
using Edge = std::array<Index, 2>;
using Triangle = std::array<Index, 3>;
using IncidenceMatrix = Eigen::SparseMatrix<int>;

/// Positions plus optional per-point RGB attributes in [0,1]^3.
struct PointCloud {
    std::vector<Vec3> positions;
    std::optional<std::vector<Vec3>> colors;

    std::size_t size() const { return positions.size(); }
};

/// Raw triangle soup as read from disk or produced by a generator.
struct MeshData {
    PointCloud points;
    std::vector<Triangle> triangles;
};

/// Per-triangle geometry computed from the source winding.
struct TriangleGeometry {
    Vec3 normal;
    double area = 0.0;
    Vec3 barycenter;
    Mat3 tangent_projector; // I - n n^T
};

/// Oriented 2-dimensional geometric simplicial complex.
///
/// Simplices are stored with ascending vertex indices and all incidence
/// signs derive from that order. The source winding of each triangle is kept
/// separately (`winding_sign`, `source_triangles`) so geometric normals stay
/// decoupled from the algebraic orientation. Immutable after construction.
class SimplicialComplex2 {
public:
    const PointCloud& points() const { return points_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    /// Triangles in their input winding, aligned with triangles().
    const std::vector<Triangle>& source_triangles() const { return source_triangles_; }
    /// +1 when the source winding is an even permutation of the sorted triple.
    const std::vector<std::int8_t>& winding_sign() const { return winding_sign_; }

    const IncidenceMatrix& b1() const { return b1_; }
    const IncidenceMatrix& b2() const { return b2_; }

    std::size_t num_vertices() const { return points_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    /// Canonical edge index of {a, b}, or -1 when the edge is absent.
    Index edge_index(Index a, Index b) const;

    /// Canonical edge indices of a triangle's sides (v0v1, v0v2, v1v2).
    const std::array<Index, 3>& triangle_edges(std::size_t t) const { return triangle_edges_[t]; }

    /// Triangles incident to each vertex, in ascending order.
    const std::vector<std::vector<Index>>& vertex_triangles() const { return vertex_triangles_; }

private:
    friend SimplicialComplex2 build_complex(PointCloud points, std::span<const Triangle> triangle_list);

    PointCloud points_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<Triangle> source_triangles_;
    std::vector<std::int8_t> winding_sign_;
    std::vector<std::array<Index, 3>> triangle_edges_;
    std::vector<std::vector<Index>> vertex_triangles_;
    IncidenceMatrix b1_;
    IncidenceMatrix b2_;
};

/// Relative area below which a triangle counts as degenerate: area < tol * longest_side^2.
inline constexpr double kDegenerateAreaTolerance = 1e-14;

/// Builds the complex; throws MeshError on out-of-range indices, repeated
/// vertices, zero-area or duplicate triangles and isolated vertices.
SimplicialComplex2 build_complex(PointCloud points, std::span<const Triangle> triangle_list);

/// Normals, areas, barycenters and tangential projectors, aligned with triangles().
std::vector<TriangleGeometry> triangle_geometry(const SimplicialComplex2& complex);
TriangleGeometry triangle_geometry(const Vec3& a, const Vec3& b, const Vec3& c);

long euler_characteristic(const SimplicialComplex2& complex);

} // namespace topsig
