#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topsig/field_maps.hpp"
#include "topsig/operators.hpp"
#include "topsig/spectral.hpp"

namespace topsig {

/// Band of a spectral basis: the selected frequency indices and their eigenvectors.
struct BandlimitedModel {
    std::vector<Eigen::Index> band;
    Eigen::MatrixXd vectors; // E x |band|

    /// The lowest `size` frequencies of `basis`.
    static BandlimitedModel lowest(const SpectralBasis& basis, Eigen::Index size);
    /// Arbitrary ascending index set; throws ConfigError on out-of-range or repeated indices.
    static BandlimitedModel from_indices(const SpectralBasis& basis, std::vector<Eigen::Index> indices);

    Eigen::Index dimension() const { return vectors.rows(); }
    Eigen::Index bandwidth() const { return vectors.cols(); }
};

/// Edge indices in greedy selection order plus the 0/1 selection mask.
struct SamplingSet {
    std::vector<Eigen::Index> order;
    Eigen::VectorXd mask;

    std::size_t size() const { return order.size(); }
    static SamplingSet from_indices(std::vector<Eigen::Index> order, Eigen::Index dimension);
};

/// Greedy MaxDet: repeatedly add the edge maximising the pseudo-determinant of
/// U_K(S)^T U_K(S), compared first by rank and then by log-pseudo-determinant,
/// ties to the smallest edge index. Keeps going past |S| = |K|.
SamplingSet maxdet_select(const BandlimitedModel& model, std::size_t n_samples);

/// y = D_S s (full length, zeros off the sampling set).
Eigen::VectorXd sample(const Eigen::VectorXd& signal, const SamplingSet& set);

struct Recovery {
    Eigen::VectorXd signal;
    double condition = 1.0; // condition number of U_S^T U_S
    bool at_bandwidth = false; // |S| == |K|: recoverable but without margin
};

/// Solves [I - (I - D_S) U_K U_K^T] s = y. The solve goes through the
/// |K| x |K| system (U_S^T U_S) c = U_S^T y_S, giving s = y + (I - D_S) U_K c,
/// so D_S s = y holds exactly. Throws NumericalError when the condition
/// estimate exceeds 1e12.
Recovery recover(const Eigen::VectorXd& samples, const SamplingSet& set, const BandlimitedModel& model);

enum class LaplacianVariant { FullL1, DownOnly };
const char* to_string(LaplacianVariant variant);

struct RecoveryRow {
    std::size_t n_samples = 0;
    LaplacianVariant variant = LaplacianVariant::FullL1;
    Eigen::Index bandwidth = 0;
    double mse_mean_sq = 0.0;  // ||s_hat - s||^2 / E
    double norm_error = 0.0;   // ||s_hat - s||
    double cond_estimate = 0.0;
    std::uint64_t seed = 0;
};

struct RecoveryExperimentOptions {
    std::vector<std::size_t> n_samples_grid;
    /// Fixed |K|; 0 means half the sample count capped at `max_bandwidth` per grid point.
    Eigen::Index bandwidth = 0;
    Eigen::Index max_bandwidth = 400;
    std::vector<LaplacianVariant> variants{LaplacianVariant::FullL1, LaplacianVariant::DownOnly};
    std::uint64_t seed = 0;
    MetricMode metric_mode = MetricMode::Lumped;
    unsigned threads = 0; // 0: hardware concurrency
};

/// For every grid point and variant: band the basis, MaxDet-select, sample and
/// recover. `bases[i]` belongs to `options.variants[i]` and must cover the
/// largest bandwidth used.
std::vector<RecoveryRow> recovery_sweep(const Eigen::VectorXd& signal, const std::vector<SpectralBasis>& bases,
                                        const RecoveryExperimentOptions& options);

/// End to end: metrics, L1 (full and down-only), edge projection of `field`,
/// spectral bases, then recovery_sweep.
std::vector<RecoveryRow> recovery_experiment(const SimplicialComplex2& complex, const NodeVectorField& field,
                                             const RecoveryExperimentOptions& options);

/// Largest bandwidth the options will request over the grid.
Eigen::Index max_bandwidth_used(const RecoveryExperimentOptions& options);

Eigen::Index default_bandwidth(std::size_t n_samples, Eigen::Index cap = 400);

} // namespace topsig
