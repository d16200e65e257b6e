#include "topsig/whitney.hpp"

#include <cmath>
#include <string>

#include "topsig/error.hpp"

namespace topsig {

namespace {

constexpr std::array<std::array<int, 2>, 3> kSides{{{0, 1}, {0, 2}, {1, 2}}};
// Boundary signs of the sides of a sorted triangle.
constexpr std::array<double, 3> kSideSigns{+1.0, -1.0, +1.0};

std::array<Vec3, 3> sorted_positions(const SimplicialComplex2& complex, std::size_t t)
{
    const auto& pos = complex.points().positions;
    const Triangle& tri = complex.triangles()[t];
    return {pos[tri[0]], pos[tri[1]], pos[tri[2]]};
}

} // namespace

std::array<Vec3, 3> barycentric_gradients(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 cross = (b - a).cross(c - a);
    const double twice_area = cross.norm();
    const double longest = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    if (!(twice_area > 2.0 * kDegenerateAreaTolerance * longest))
        throw MeshError("barycentric gradients undefined on a degenerate triangle");
    const Vec3 n = cross / twice_area;
    // grad(phi_i) is the in-plane rotation of the opposite side, scaled by 1/(2A).
    return {n.cross(c - b) / twice_area, n.cross(a - c) / twice_area, n.cross(b - a) / twice_area};
}

WhitneyBasisEval eval_whitney_0(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p)
{
    WhitneyBasisEval out;
    out.gradients = barycentric_gradients(a, b, c);

    const Vec3 n = (b - a).cross(c - a).normalized();
    const double diameter = std::sqrt(std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()}));
    if (std::abs(n.dot(p - a)) > 1e-9 * diameter)
        throw MeshError("evaluation point lies off the triangle plane");

    // Affine functions equal to 1/3 at the barycenter.
    const Vec3 centre = (a + b + c) / 3.0;
    for (int i = 0; i < 3; ++i)
        out.values[i] = 1.0 / 3.0 + out.gradients[i].dot(p - centre);
    return out;
}

const char* to_string(MetricMode mode)
{
    return mode == MetricMode::Lumped ? "lumped" : "consistent-solve";
}

MetricMode parse_metric_mode(std::string_view text)
{
    if (text == "lumped")
        return MetricMode::Lumped;
    if (text == "consistent-solve" || text == "consistent")
        return MetricMode::ConsistentSolve;
    throw ConfigError("unknown metric mode '" + std::string(text) + "' (expected lumped | consistent-solve)");
}

MetricMatrices MetricMatrices::identity_for(const SimplicialComplex2& complex)
{
    const auto n = static_cast<Eigen::Index>(complex.num_vertices());
    const auto e = static_cast<Eigen::Index>(complex.num_edges());
    const auto t = static_cast<Eigen::Index>(complex.num_triangles());
    MetricMatrices m;
    m.m0.resize(n, n);
    m.m0.setIdentity();
    m.m0_lumped = Eigen::VectorXd::Ones(n);
    m.m1.resize(e, e);
    m.m1.setIdentity();
    m.m1_lumped = Eigen::VectorXd::Ones(e);
    m.m2 = Eigen::VectorXd::Ones(t);
    m.identity = true;
    return m;
}

MassMatrix mass_matrix_0(const SimplicialComplex2& complex)
{
    const auto n = static_cast<Eigen::Index>(complex.num_vertices());
    const auto geometry = triangle_geometry(complex);

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(9 * complex.num_triangles());
    for (std::size_t t = 0; t < complex.num_triangles(); ++t) {
        const Triangle& tri = complex.triangles()[t];
        const double area = geometry[t].area;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                entries.emplace_back(tri[i], tri[j], area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
    }

    MassMatrix out;
    out.consistent.resize(n, n);
    out.consistent.setFromTriplets(entries.begin(), entries.end());

    out.lumped = Eigen::VectorXd::Zero(n);
    for (Eigen::Index col = 0; col < out.consistent.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(out.consistent, col); it; ++it)
            out.lumped[it.row()] += it.value();
    return out;
}

Eigen::Matrix3d local_mass_matrix_1(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const auto grads = barycentric_gradients(a, b, c);
    const double area = 0.5 * (b - a).cross(c - a).norm();

    // Edge midpoints in barycentric coordinates.
    constexpr std::array<std::array<double, 3>, 3> midpoints{{{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}}};

    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const auto& phi : midpoints) {
        std::array<Vec3, 3> w;
        for (int s = 0; s < 3; ++s) {
            const auto [i, j] = kSides[s];
            w[s] = phi[i] * grads[j] - phi[j] * grads[i];
        }
        for (int r = 0; r < 3; ++r)
            for (int q = 0; q < 3; ++q)
                local(r, q) += w[r].dot(w[q]);
    }
    return local * (area / 3.0);
}

MassMatrix mass_matrix_1(const SimplicialComplex2& complex)
{
    const auto e = static_cast<Eigen::Index>(complex.num_edges());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(9 * complex.num_triangles());

    MassMatrix out;
    out.lumped = Eigen::VectorXd::Zero(e);

    for (std::size_t t = 0; t < complex.num_triangles(); ++t) {
        const auto [a, b, c] = sorted_positions(complex, t);
        const Eigen::Matrix3d local = local_mass_matrix_1(a, b, c);
        const auto& ids = complex.triangle_edges(t);
        for (int r = 0; r < 3; ++r) {
            double row = 0.0;
            for (int q = 0; q < 3; ++q) {
                entries.emplace_back(ids[r], ids[q], local(r, q));
                row += kSideSigns[r] * kSideSigns[q] * local(r, q);
            }
            out.lumped[ids[r]] += row;
        }
    }

    out.consistent.resize(e, e);
    out.consistent.setFromTriplets(entries.begin(), entries.end());

    for (Eigen::Index k = 0; k < e; ++k)
        if (!(out.lumped[k] > 0.0)) {
            const Edge& edge = complex.edges()[k];
            throw MeshError("mesh quality: lumped M1 entry of edge " + std::to_string(k) + " (" +
                            std::to_string(edge[0]) + ", " + std::to_string(edge[1]) + ") is not positive");
        }
    return out;
}

Eigen::VectorXd mass_matrix_2(const SimplicialComplex2& complex)
{
    const auto geometry = triangle_geometry(complex);
    Eigen::VectorXd out(static_cast<Eigen::Index>(geometry.size()));
    for (std::size_t t = 0; t < geometry.size(); ++t)
        out[static_cast<Eigen::Index>(t)] = 1.0 / geometry[t].area;
    return out;
}

MetricMatrices assemble_metrics(const SimplicialComplex2& complex, MetricMode mode)
{
    MetricMatrices m;
    auto m0 = mass_matrix_0(complex);
    auto m1 = mass_matrix_1(complex);
    m.m0 = std::move(m0.consistent);
    m.m0_lumped = std::move(m0.lumped);
    m.m1 = std::move(m1.consistent);
    m.m1_lumped = std::move(m1.lumped);
    m.m2 = mass_matrix_2(complex);
    m.mode = mode;
    return m;
}

} // namespace topsig
