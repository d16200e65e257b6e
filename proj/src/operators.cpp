#include "topsig/operators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include <Eigen/SparseCholesky>

#include "topsig/error.hpp"

namespace topsig {

namespace {

double max_abs(const SparseMatrix& m)
{
    double out = 0.0;
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it)
            out = std::max(out, std::abs(it.value()));
    return out;
}

// Averages with the transpose; a correction above 1e-12 relative means the
// assembly itself is wrong.
SparseMatrix symmetrized(const SparseMatrix& m, const char* name)
{
    SparseMatrix transposed = m.transpose();
    const double scale = max_abs(m);
    const SparseMatrix diff = m - transposed;
    if (scale > 0.0 && max_abs(diff) > 1e-12 * scale)
        throw NumericalError(std::string("assembled ") + name + " is not symmetric");
    SparseMatrix out = 0.5 * (m + transposed);
    out.prune(0.0);
    return out;
}

SparseMatrix diagonal(const Eigen::VectorXd& d)
{
    SparseMatrix out(d.size(), d.size());
    out.reserve(Eigen::VectorXi::Ones(d.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i)
        out.insert(i, i) = d[i];
    out.makeCompressed();
    return out;
}

// factor^T * A^-1 * factor with A sparse SPD.
SparseMatrix sandwich_solve(const SparseMatrix& spd, const SparseMatrix& factor)
{
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(spd);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("factorisation of the consistent mass matrix failed");
    const Eigen::MatrixXd rhs = Eigen::MatrixXd(factor);
    const Eigen::MatrixXd solved = ldlt.solve(rhs);
    const Eigen::MatrixXd product = Eigen::MatrixXd(factor.transpose()) * solved;
    return product.sparseView(1.0, 0.0);
}

void check_dimensions(const SimplicialComplex2& complex, const MetricMatrices& metrics)
{
    const auto n = static_cast<Eigen::Index>(complex.num_vertices());
    const auto e = static_cast<Eigen::Index>(complex.num_edges());
    const auto t = static_cast<Eigen::Index>(complex.num_triangles());
    if (metrics.m0.rows() != n || metrics.m0_lumped.size() != n || metrics.m1.rows() != e ||
        metrics.m1_lumped.size() != e || metrics.m2.size() != t)
        throw ConfigError("metric matrices were assembled on a different complex");
}

} // namespace

HodgeLaplacian1 build_l1(const SimplicialComplex2& complex, const MetricMatrices& metrics)
{
    check_dimensions(complex, metrics);
    const SparseMatrix b1 = complex.b1().cast<double>();
    const SparseMatrix b2 = complex.b2().cast<double>();

    HodgeLaplacian1 out;
    out.mode = metrics.mode;

    const SparseMatrix up = b2 * diagonal(metrics.m2) * SparseMatrix(b2.transpose());
    const SparseMatrix weighted_b1 = b1 * metrics.m1;
    SparseMatrix down;
    if (metrics.mode == MetricMode::ConsistentSolve && !metrics.identity)
        down = sandwich_solve(metrics.m0, weighted_b1);
    else
        down = SparseMatrix(weighted_b1.transpose()) * diagonal(metrics.m0_lumped.cwiseInverse()) * weighted_b1;

    out.down = symmetrized(down, "L1 down");
    out.up = symmetrized(up, "L1 up");
    out.full = out.down + out.up;
    return out;
}

HodgeLaplacian2 build_l2(const SimplicialComplex2& complex, const MetricMatrices& metrics)
{
    check_dimensions(complex, metrics);
    const SparseMatrix b2 = complex.b2().cast<double>();
    const SparseMatrix weighted_b2 = b2 * diagonal(metrics.m2);

    HodgeLaplacian2 out;
    out.mode = metrics.mode;
    SparseMatrix l2;
    if (metrics.mode == MetricMode::ConsistentSolve && !metrics.identity)
        l2 = sandwich_solve(metrics.m1, weighted_b2);
    else
        l2 = SparseMatrix(weighted_b2.transpose()) * diagonal(metrics.m1_lumped.cwiseInverse()) * weighted_b2;
    out.full = symmetrized(l2, "L2");
    return out;
}

void export_matrix_market(const SparseMatrix& matrix, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
    out << std::setprecision(17);
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(matrix, col); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    if (!out)
        throw IoError("failed writing " + path.string());
}

} // namespace topsig
