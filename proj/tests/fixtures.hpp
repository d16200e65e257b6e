#pragma once

#include <random>
#include <vector>

#include "topsig/complex.hpp"
#include "topsig/synthesis.hpp"

namespace fixtures {

using topsig::MeshData;
using topsig::Vec3;

inline MeshData single_triangle()
{
    return {{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, std::nullopt}, {{0, 1, 2}}};
}

inline MeshData two_triangle_strip()
{
    return {{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0.2)}, std::nullopt}, {{0, 1, 2}, {1, 3, 2}}};
}

// Square ring: outer square 0..3, inner square 4..7, eight triangles, one hole.
inline MeshData annulus()
{
    MeshData m;
    m.points.positions = {Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(3, 3, 0), Vec3(0, 3, 0),
                          Vec3(1, 1, 0), Vec3(2, 1, 0), Vec3(2, 2, 0), Vec3(1, 2, 0)};
    for (int i = 0; i < 4; ++i) {
        const int j = (i + 1) % 4;
        m.triangles.push_back({i, j, 4 + j});
        m.triangles.push_back({i, 4 + j, 4 + i});
    }
    return m;
}

inline MeshData torus() { return topsig::make_torus({}); }

// Jittered planar-ish grid with random heights; always a valid disc.
inline MeshData random_grid(std::mt19937_64& rng, int nx = 5, int ny = 4)
{
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::uniform_real_distribution<double> height(-0.5, 0.5);
    MeshData m;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m.points.positions.emplace_back(i + jitter(rng), j + jitter(rng), height(rng));
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const int a = j * nx + i, b = a + 1, c = a + nx + 1, d = a + nx;
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    return m;
}

inline topsig::SimplicialComplex2 build(const MeshData& m) { return topsig::build_complex(m.points, m.triangles); }

inline Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& m) { return Eigen::MatrixXd(m); }

inline Eigen::Index rank(const Eigen::MatrixXd& m)
{
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    return lu.rank();
}

} // namespace fixtures
