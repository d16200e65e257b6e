#pragma once

#include <array>
#include <string_view>

#include "topsig/complex.hpp"

namespace topsig {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Barycentric (order-0 Whitney) values and their constant gradients at a
/// point of one triangle.
struct WhitneyBasisEval {
    std::array<double, 3> values{};
    std::array<Vec3, 3> gradients{};
};

/// Gradients of the three barycentric functions of triangle (a, b, c).
/// Each lies in the triangle plane and they sum to zero.
std::array<Vec3, 3> barycentric_gradients(const Vec3& a, const Vec3& b, const Vec3& c);

/// Evaluates the barycentric functions of (a, b, c) at p. Throws MeshError
/// when the triangle is degenerate or p is off-plane by more than 1e-9 * diameter.
WhitneyBasisEval eval_whitney_0(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p);

enum class MetricMode {
    Lumped,          // diagonal matrices wherever an inverse is needed
    ConsistentSolve, // full Whitney matrices, inverses realised by sparse solves
};

const char* to_string(MetricMode mode);
MetricMode parse_metric_mode(std::string_view text);

/// Whitney inner-product matrices. Consistent M0/M1 are kept next to their
/// lumped diagonals; M2 is diagonal in both modes.
struct MetricMatrices {
    SparseMatrix m0;
    Eigen::VectorXd m0_lumped;
    SparseMatrix m1;
    Eigen::VectorXd m1_lumped;
    Eigen::VectorXd m2;
    MetricMode mode = MetricMode::Lumped;
    bool identity = false;

    /// All-identity weights; reduces the weighted Laplacians to the combinatorial ones.
    static MetricMatrices identity_for(const SimplicialComplex2& complex);
};

struct MassMatrix {
    SparseMatrix consistent;
    Eigen::VectorXd lumped;
};

/// Consistent M0: area/6 on the diagonal, area/12 off it, summed over shared
/// triangles. Lumped M0 is its row sum.
MassMatrix mass_matrix_0(const SimplicialComplex2& complex);

/// Local 3x3 Whitney 1-form mass matrix of one triangle, rows ordered as the
/// sides (v0v1, v0v2, v1v2) oriented from lower to higher local vertex.
/// Uses the edge-midpoint rule, exact for the quadratic integrand.
Eigen::Matrix3d local_mass_matrix_1(const Vec3& a, const Vec3& b, const Vec3& c);

/// Consistent M1 assembled in canonical edge orientation. The lumped diagonal
/// sums, per triangle, the local row in the triangle-induced orientation;
/// throws MeshError naming the edge if an entry is not strictly positive.
MassMatrix mass_matrix_1(const SimplicialComplex2& complex);

/// Diagonal of M2: 1 / area per triangle.
Eigen::VectorXd mass_matrix_2(const SimplicialComplex2& complex);

MetricMatrices assemble_metrics(const SimplicialComplex2& complex, MetricMode mode = MetricMode::Lumped);

} // namespace topsig
