#pragma once

#include "topsig/whitney.hpp"

namespace topsig {

/// Ascending eigenpairs of a symmetric PSD operator. Columns of `vectors`
/// are orthonormal; each has its first entry with |x| > 1e-8 positive.
struct SpectralBasis {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    Eigen::Index size() const { return values.size(); }
};

struct SpectralOptions {
    /// Problems below this dimension (or asking for more than a third of the
    /// spectrum) use the dense solver.
    Eigen::Index dense_threshold = 500;
    int max_iterations = 3000;
    /// Residual target ||L u - lambda u|| <= tolerance * ||L||_inf.
    double tolerance = 1e-11;
    unsigned seed = 0x5eed;
};

/// The k smallest eigenpairs of `laplacian` (k = 0 means all). Throws
/// NumericalError when the iterative solver exhausts its budget.
SpectralBasis spectral_basis(const SparseMatrix& laplacian, Eigen::Index k = 0, const SpectralOptions& options = {});

/// Dense reference decomposition, always of the full spectrum.
SpectralBasis dense_spectral_basis(const Eigen::MatrixXd& laplacian);

/// Forward transform U^T s over the computed pairs.
Eigen::VectorXd sft(const SpectralBasis& basis, const Eigen::VectorXd& signal);

/// Inverse transform U c; c may be shorter than the basis (leading pairs).
Eigen::VectorXd isft(const SpectralBasis& basis, const Eigen::VectorXd& coefficients);

} // namespace topsig
