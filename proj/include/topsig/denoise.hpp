#pragma once

#include <cstdint>
#include <vector>

#include "topsig/field_maps.hpp"
#include "topsig/operators.hpp"

namespace topsig {

enum class DataTerm {
    Squared,   // ||s - x||_2^2, smooth; the default
    Unsquared, // ||s - x||_2 as printed, handled through its prox
};

/// Weights and solver controls for min D(s - x) + lambda s^T L2 s + gamma ||s||_1.
struct DenoiseSettings {
    double lambda = 0.1;
    double gamma = 0.1;
    DataTerm data_term = DataTerm::Squared;
    double tolerance = 1e-10; // relative objective change
    /// Proximal-gradient mapping bound, relative to 1 + ||x||_inf.
    double optimality_tolerance = 1e-9;
    int max_iterations = 20000;
    /// Largest eigenvalue of L2; estimated by power iteration when <= 0.
    double laplacian_max_eigenvalue = 0.0;
    bool record_history = false;
};

struct DenoiseSolution {
    Eigen::VectorXd signal;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history; // objective after every accepted step
};

double denoise_objective(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy, const Eigen::VectorXd& signal,
                         const DenoiseSettings& settings);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double max_eigenvalue(const SparseMatrix& matrix, double relative_tolerance = 1e-6, int max_iterations = 10000);

/// Accelerated proximal gradient with monotone restart (squared data term)
/// or three-operator splitting (unsquared data term). Never throws on
/// non-convergence; returns the best iterate with converged = false.
DenoiseSolution denoise(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy, const DenoiseSettings& settings);

struct DenoisedNormals {
    std::vector<Vec3> normals;
    std::vector<Index> zero_triangles; // |result| < 1e-9, left unnormalised
    int iterations = 0;                // worst over the three components
    bool converged = true;
};

/// Denoises the three Cartesian components separately over the shared L2 and
/// renormalises. Components are mapped to the ascending-vertex orientation
/// (times winding_sign) before solving and back afterwards.
DenoisedNormals denoise_normals(const SimplicialComplex2& complex, const HodgeLaplacian2& l2,
                                const std::vector<Vec3>& noisy_normals, const DenoiseSettings& settings);

/// Geometric unit normals from the source winding.
std::vector<Vec3> face_normals(const SimplicialComplex2& complex);

/// i.i.d. Gaussian per component with variance P / 10^(snr/10), P the mean
/// squared component of `normals`. Deterministic in `seed`.
std::vector<Vec3> add_normal_noise(const std::vector<Vec3>& normals, double snr_db, std::uint64_t seed);

/// Mean over triangles and components of the squared difference.
double normal_mse(const std::vector<Vec3>& estimate, const std::vector<Vec3>& truth);

struct SnrRow {
    double snr_db = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    int trial = 0;
    double mse = 0.0;
    double noisy_mse = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct SnrExperimentOptions {
    std::vector<double> snr_grid{0, 5, 10, 15, 20, 25, 30};
    std::vector<double> lambdas{0.1, 0.2, 0.5};
    std::vector<double> gammas{0.1};
    int trials = 20;
    std::uint64_t seed = 0;
    MetricMode metric_mode = MetricMode::Lumped;
    DenoiseSettings solver{};
    unsigned threads = 0;
};

/// Noise realisation for (snr index, trial); shared by every (lambda, gamma)
/// so the weights are compared on identical draws.
std::uint64_t noise_stream_seed(std::uint64_t seed, std::size_t snr_index, int trial);

/// Rows ordered by (snr, lambda, gamma, trial).
std::vector<SnrRow> snr_experiment(const SimplicialComplex2& complex, const SnrExperimentOptions& options);

} // namespace topsig
