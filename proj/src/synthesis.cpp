#include "topsig/synthesis.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "topsig/error.hpp"

namespace topsig {

MeshData make_torus(const TorusSpec& spec)
{
    if (!(spec.minor_radius > 0.0) || !(spec.major_radius > spec.minor_radius))
        throw ConfigError("torus needs R > r > 0");
    if (spec.u_steps < 3 || spec.v_steps < 3)
        throw ConfigError("torus grid needs at least 3 steps in each direction");

    const int nu = spec.u_steps;
    const int nv = spec.v_steps;
    auto id = [nu, nv](int i, int j) { return static_cast<Index>(((i + nu) % nu) * nv + (j + nv) % nv); };

    MeshData mesh;
    mesh.points.positions.reserve(static_cast<std::size_t>(nu * nv));
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * std::numbers::pi * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * std::numbers::pi * j / nv;
            const double ring = spec.major_radius + spec.minor_radius * std::cos(v);
            mesh.points.positions.emplace_back(ring * std::cos(u), ring * std::sin(u), spec.minor_radius * std::sin(v));
        }
    }
    Vec3 lo = mesh.points.positions.front();
    for (const Vec3& p : mesh.points.positions)
        lo = lo.cwiseMin(p);
    for (Vec3& p : mesh.points.positions)
        p -= lo;

    mesh.triangles.reserve(static_cast<std::size_t>(2 * nu * nv));
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (spec.alternate_diagonals && (i + j) % 2 == 1) {
                mesh.triangles.push_back({a, b, d});
                mesh.triangles.push_back({b, c, d});
            } else {
                mesh.triangles.push_back({a, b, c});
                mesh.triangles.push_back({a, c, d});
            }
        }
    return mesh;
}

MeshData make_spheroid(int subdivisions, const Vec3& radii)
{
    if (subdivisions < 0 || subdivisions > 7)
        throw ConfigError("spheroid subdivision level must be in [0, 7]");
    if (!(radii.minCoeff() > 0.0))
        throw ConfigError("spheroid radii must be positive");

    const double phi = std::numbers::phi;
    std::vector<Vec3> pos{{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                          {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& p : pos)
        p.normalize();
    std::vector<Triangle> tris{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
                               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
                               {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<Index, Index>, Index> midpoint;
        auto mid = [&](Index a, Index b) {
            const auto key = std::minmax(a, b);
            const auto [it, inserted] = midpoint.try_emplace({key.first, key.second}, static_cast<Index>(pos.size()));
            if (inserted)
                pos.push_back((pos[a] + pos[b]).normalized());
            return it->second;
        };
        std::vector<Triangle> next;
        next.reserve(4 * tris.size());
        for (const Triangle& t : tris) {
            const Index ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    MeshData mesh;
    mesh.points.positions.reserve(pos.size());
    for (const Vec3& p : pos)
        mesh.points.positions.push_back(p.cwiseProduct(radii));
    mesh.triangles = std::move(tris);
    return mesh;
}

ColorAssignment assign_coordinate_colors(const PointCloud& points)
{
    if (points.positions.empty())
        throw ConfigError("cannot color an empty point cloud");
    Vec3 lo = points.positions.front();
    Vec3 hi = lo;
    for (const Vec3& p : points.positions) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    ColorAssignment out;
    Vec3 scale = Vec3::Zero();
    for (int axis = 0; axis < 3; ++axis) {
        if (hi[axis] > lo[axis])
            scale[axis] = 1.0 / (hi[axis] - lo[axis]);
        else
            out.degenerate_axes.push_back(axis);
    }
    out.colors.reserve(points.size());
    for (const Vec3& p : points.positions)
        out.colors.push_back((p - lo).cwiseProduct(scale));
    return out;
}

} // namespace topsig
