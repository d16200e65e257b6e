#include "topsig/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/SparseCholesky>

#include "topsig/error.hpp"

namespace topsig {

namespace {

double inf_norm(const SparseMatrix& m)
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it)
            rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

// Stable ascending order on (value, index) plus the sign convention.
SpectralBasis canonicalize(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors, Eigen::Index k)
{
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

    SpectralBasis out;
    out.values.resize(k);
    out.vectors.resize(vectors.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values[j] = values[src];
        out.vectors.col(j) = vectors.col(src);
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double x = out.vectors(i, j);
            if (std::abs(x) > 1e-8) {
                if (x < 0.0)
                    out.vectors.col(j) *= -1.0;
                break;
            }
        }
    }
    return out;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Block subspace iteration on (L + shift I)^-1 with Rayleigh-Ritz on L.
// A block at least as wide as any eigenvalue cluster it straddles resolves
// repeated eigenvalues, which single-vector Krylov methods can miss.
SpectralBasis subspace_iteration(const SparseMatrix& laplacian, Eigen::Index k, const SpectralOptions& options)
{
    const Eigen::Index n = laplacian.rows();
    const Eigen::Index block = std::min(n, std::max(k + 20, 2 * k));
    const double norm = std::max(inf_norm(laplacian), std::numeric_limits<double>::min());
    const double shift = 1e-6 * norm;

    SparseMatrix shifted = laplacian;
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.coeffRef(i, i) += shift;
    Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigensolver: factorisation of the shifted operator failed");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::MatrixXd x(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            x(i, j) = uniform(rng);
    x = orthonormal_columns(x);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Eigen::MatrixXd q = orthonormal_columns(solver.solve(x));
        const Eigen::MatrixXd lq = laplacian * q;
        Eigen::MatrixXd projected = q.transpose() * lq;
        projected = 0.5 * (projected + projected.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
        x = q * small.eigenvectors();

        const Eigen::MatrixXd lx = lq * small.eigenvectors();
        double worst = 0.0;
        for (Eigen::Index j = 0; j < k; ++j)
            worst = std::max(worst, (lx.col(j) - small.eigenvalues()[j] * x.col(j)).norm());
        if (worst <= options.tolerance * norm)
            return canonicalize(small.eigenvalues(), x, k);
    }
    throw NumericalError("eigensolver did not converge within " + std::to_string(options.max_iterations) +
                         " iterations");
}

} // namespace

SpectralBasis dense_spectral_basis(const Eigen::MatrixXd& laplacian)
{
    const Eigen::MatrixXd sym = 0.5 * (laplacian + laplacian.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense eigensolver failed");
    return canonicalize(solver.eigenvalues(), solver.eigenvectors(), sym.rows());
}

SpectralBasis spectral_basis(const SparseMatrix& laplacian, Eigen::Index k, const SpectralOptions& options)
{
    const Eigen::Index n = laplacian.rows();
    if (laplacian.cols() != n)
        throw ConfigError("spectral_basis needs a square matrix");
    if (k == 0)
        k = n;
    if (k < 0 || k > n)
        throw ConfigError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) +
                          "-dimensional operator");

    if (n < options.dense_threshold || 3 * k > n) {
        SpectralBasis full = dense_spectral_basis(Eigen::MatrixXd(laplacian));
        if (k == n)
            return full;
        SpectralBasis out;
        out.values = full.values.head(k);
        out.vectors = full.vectors.leftCols(k);
        return out;
    }
    return subspace_iteration(laplacian, k, options);
}

Eigen::VectorXd sft(const SpectralBasis& basis, const Eigen::VectorXd& signal)
{
    if (signal.size() != basis.vectors.rows())
        throw ConfigError("signal length does not match the spectral basis");
    return basis.vectors.transpose() * signal;
}

Eigen::VectorXd isft(const SpectralBasis& basis, const Eigen::VectorXd& coefficients)
{
    if (coefficients.size() > basis.size())
        throw ConfigError("coefficient count " + std::to_string(coefficients.size()) + " exceeds basis size " +
                          std::to_string(basis.size()));
    return basis.vectors.leftCols(coefficients.size()) * coefficients;
}

} // namespace topsig
