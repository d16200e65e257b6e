#pragma once

#include <filesystem>

#include "topsig/whitney.hpp"

namespace topsig {

/// Weighted first-order Hodge Laplacian, M1 B1^T M0^-1 B1 M1 + B2 M2 B2^T.
struct HodgeLaplacian1 {
    SparseMatrix down; // lower adjacency through shared vertices
    SparseMatrix up;   // upper adjacency through shared triangles
    SparseMatrix full;
    MetricMode mode = MetricMode::Lumped;
};

/// Weighted second-order Hodge Laplacian, M2 B2^T M1^-1 B2 M2.
struct HodgeLaplacian2 {
    SparseMatrix full;
    MetricMode mode = MetricMode::Lumped;
};

/// In lumped mode the inverted factor (M0) is the lumped diagonal and the
/// directly applied one (M1) is consistent. In consistent-solve mode M0^-1
/// is applied through a sparse Cholesky solve, which densifies `down`.
HodgeLaplacian1 build_l1(const SimplicialComplex2& complex, const MetricMatrices& metrics);

/// M1^-1 is the lumped diagonal inverse, or a sparse solve in consistent-solve mode.
HodgeLaplacian2 build_l2(const SimplicialComplex2& complex, const MetricMatrices& metrics);

/// Writes a coordinate Matrix Market file (general, real).
void export_matrix_market(const SparseMatrix& matrix, const std::filesystem::path& path);

} // namespace topsig
