#include "topsig/field_maps.hpp"

#include "topsig/error.hpp"
#include "topsig/whitney.hpp"

namespace topsig {

Eigen::VectorXd project_to_edges(const NodeVectorField& field, const SimplicialComplex2& complex)
{
    if (field.size() != complex.num_vertices())
        throw ConfigError("vertex field length does not match the vertex count");
    const auto& pos = complex.points().positions;
    Eigen::VectorXd out(static_cast<Eigen::Index>(complex.num_edges()));
    for (std::size_t m = 0; m < complex.num_edges(); ++m) {
        const auto [lo, hi] = complex.edges()[m];
        const Vec3 tangent = pos[hi] - pos[lo];
        out[static_cast<Eigen::Index>(m)] = 0.5 * (tangent.dot(field[lo]) + tangent.dot(field[hi]));
    }
    return out;
}

TriangleTangentField whitney_reconstruct_barycenter(const Eigen::VectorXd& edge_signal,
                                                    const SimplicialComplex2& complex)
{
    if (edge_signal.size() != static_cast<Eigen::Index>(complex.num_edges()))
        throw ConfigError("edge signal length does not match the edge count");
    const auto& pos = complex.points().positions;
    TriangleTangentField out(complex.num_triangles());
    for (std::size_t t = 0; t < complex.num_triangles(); ++t) {
        const Triangle& tri = complex.triangles()[t];
        const auto grads = barycentric_gradients(pos[tri[0]], pos[tri[1]], pos[tri[2]]);
        const auto& ids = complex.triangle_edges(t);
        // Sides v0v1, v0v2, v1v2; every phi equals 1/3 at the barycenter.
        out[t] = (edge_signal[ids[0]] * (grads[1] - grads[0]) + edge_signal[ids[1]] * (grads[2] - grads[0]) +
                  edge_signal[ids[2]] * (grads[2] - grads[1])) /
                 3.0;
    }
    return out;
}

NodeVectorField lift_to_vertices(const TriangleTangentField& tri_field, const SimplicialComplex2& complex,
                                 const LiftOptions& options)
{
    if (tri_field.size() != complex.num_triangles())
        throw ConfigError("triangle field length does not match the triangle count");
    const auto geometry = triangle_geometry(complex);

    NodeVectorField out(complex.num_vertices(), Vec3::Zero());
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        // T_s is symmetric idempotent, so T_s^T T_s = T_s and T_s^T x = T_s x.
        Mat3 normal_matrix = Mat3::Zero();
        Vec3 rhs = Vec3::Zero();
        for (Index t : complex.vertex_triangles()[v]) {
            normal_matrix += geometry[t].tangent_projector;
            rhs += geometry[t].tangent_projector * tri_field[t];
        }

        Eigen::JacobiSVD<Mat3> svd(normal_matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sigma = svd.singularValues();
        if (sigma[2] > options.rank_tolerance * sigma[0]) {
            out[v] = svd.solve(rhs);
            continue;
        }
        if (!options.pseudoinverse_fallback)
            throw NumericalError("vertex " + std::to_string(v) +
                                 " is not recoverable: all incident faces share one plane");
        Vec3 solution = Vec3::Zero();
        for (int i = 0; i < 3; ++i)
            if (sigma[i] > options.rank_tolerance * sigma[0])
                solution += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / sigma[i]);
        out[v] = solution;
    }
    return out;
}

NodeVectorField color_roundtrip(const NodeVectorField& field, const SimplicialComplex2& complex,
                                const LiftOptions& options)
{
    const Eigen::VectorXd edges = project_to_edges(field, complex);
    return lift_to_vertices(whitney_reconstruct_barycenter(edges, complex), complex, options);
}

} // namespace topsig
