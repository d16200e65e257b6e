#include "topsig/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "topsig/error.hpp"

namespace topsig {

namespace {

constexpr double kTieTolerance = 1e-12;
// Sherman-Morrison scores are refreshed from scratch this often.
constexpr std::size_t kRefreshPeriod = 64;

// Index of the largest unchosen score; near-equal scores go to the smaller index.
Eigen::Index greedy_argmax(const Eigen::VectorXd& score, const std::vector<char>& chosen)
{
    Eigen::Index best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (Eigen::Index m = 0; m < score.size(); ++m)
        if (!chosen[m])
            scale = std::max(scale, std::abs(score[m]));
    for (Eigen::Index m = 0; m < score.size(); ++m) {
        if (chosen[m])
            continue;
        if (best < 0 || score[m] > best_value + kTieTolerance * scale) {
            best = m;
            best_value = score[m];
        }
    }
    return best;
}

} // namespace

BandlimitedModel BandlimitedModel::lowest(const SpectralBasis& basis, Eigen::Index size)
{
    if (size < 1 || size > basis.size())
        throw ConfigError("bandwidth " + std::to_string(size) + " outside [1, " + std::to_string(basis.size()) + "]");
    BandlimitedModel m;
    m.band.resize(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i)
        m.band[static_cast<std::size_t>(i)] = i;
    m.vectors = basis.vectors.leftCols(size);
    return m;
}

BandlimitedModel BandlimitedModel::from_indices(const SpectralBasis& basis, std::vector<Eigen::Index> indices)
{
    if (indices.empty())
        throw ConfigError("empty frequency band");
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw ConfigError("frequency band repeats an index");
    if (indices.front() < 0 || indices.back() >= basis.size())
        throw ConfigError("frequency index outside the computed basis");
    BandlimitedModel m;
    m.vectors.resize(basis.vectors.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j)
        m.vectors.col(static_cast<Eigen::Index>(j)) = basis.vectors.col(indices[j]);
    m.band = std::move(indices);
    return m;
}

SamplingSet SamplingSet::from_indices(std::vector<Eigen::Index> order, Eigen::Index dimension)
{
    SamplingSet s;
    s.mask = Eigen::VectorXd::Zero(dimension);
    for (Eigen::Index m : order) {
        if (m < 0 || m >= dimension)
            throw ConfigError("sample index " + std::to_string(m) + " outside [0, " + std::to_string(dimension) + ")");
        if (s.mask[m] != 0.0)
            throw ConfigError("sample index " + std::to_string(m) + " repeated");
        s.mask[m] = 1.0;
    }
    s.order = std::move(order);
    return s;
}

SamplingSet maxdet_select(const BandlimitedModel& model, std::size_t n_samples)
{
    const Eigen::Index num_edges = model.dimension();
    const Eigen::Index bandwidth = model.bandwidth();
    if (n_samples < 1)
        throw ConfigError("MaxDet needs at least one sample");
    if (n_samples > static_cast<std::size_t>(num_edges))
        throw ConfigError("requested " + std::to_string(n_samples) + " samples from " + std::to_string(num_edges) +
                          " edges");

    const Eigen::MatrixXd& u = model.vectors;
    std::vector<char> chosen(static_cast<std::size_t>(num_edges), 0);
    std::vector<Eigen::Index> order;
    order.reserve(n_samples);

    // While the sampled rows do not span the band, every rank-increasing pick
    // multiplies the pseudo-determinant by its squared residual against the
    // span of the rows already chosen.
    Eigen::VectorXd residual = u.rowwise().squaredNorm();
    Eigen::MatrixXd span(bandwidth, bandwidth);
    Eigen::Index rank = 0;
    while (order.size() < n_samples && rank < bandwidth) {
        const Eigen::Index m = greedy_argmax(residual, chosen);
        Eigen::VectorXd q = u.row(m).transpose();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < rank; ++j)
                q -= span.col(j).dot(q) * span.col(j);
        const double norm = q.norm();
        chosen[m] = 1;
        order.push_back(m);
        if (norm <= 0.0)
            continue;
        q /= norm;
        span.col(rank++) = q;
        residual -= (u * q).cwiseAbs2();
        residual = residual.cwiseMax(0.0);
    }

    // Full rank: adding row a multiplies det(G) by 1 + a^T G^-1 a.
    if (order.size() < n_samples) {
        Eigen::MatrixXd gram_inverse;
        Eigen::VectorXd score;
        auto refresh = [&] {
            Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(bandwidth, bandwidth);
            for (Eigen::Index m : order)
                gram.noalias() += u.row(m).transpose() * u.row(m);
            gram_inverse = gram.ldlt().solve(Eigen::MatrixXd::Identity(bandwidth, bandwidth));
            score = (u * gram_inverse).cwiseProduct(u).rowwise().sum();
        };
        refresh();
        std::size_t since_refresh = 0;
        while (order.size() < n_samples) {
            const Eigen::Index m = greedy_argmax(score, chosen);
            chosen[m] = 1;
            order.push_back(m);
            if (++since_refresh == kRefreshPeriod) {
                refresh();
                since_refresh = 0;
                continue;
            }
            const Eigen::VectorXd a = gram_inverse * u.row(m).transpose();
            const double denom = 1.0 + u.row(m).dot(a);
            gram_inverse -= (a * a.transpose()) / denom;
            score -= (u * a).cwiseAbs2() / denom;
        }
    }

    return SamplingSet::from_indices(std::move(order), num_edges);
}

Eigen::VectorXd sample(const Eigen::VectorXd& signal, const SamplingSet& set)
{
    if (signal.size() != set.mask.size())
        throw ConfigError("signal length does not match the sampling mask");
    return signal.cwiseProduct(set.mask);
}

Recovery recover(const Eigen::VectorXd& samples, const SamplingSet& set, const BandlimitedModel& model)
{
    const Eigen::MatrixXd& u = model.vectors;
    if (samples.size() != u.rows() || set.mask.size() != u.rows())
        throw ConfigError("sample vector, mask and band model disagree on the edge count");
    const Eigen::Index bandwidth = model.bandwidth();
    if (static_cast<Eigen::Index>(set.size()) < bandwidth)
        throw ConfigError(std::to_string(set.size()) + " samples cannot determine a band of " +
                          std::to_string(bandwidth) + " frequencies");

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(bandwidth, bandwidth);
    for (Eigen::Index m : set.order)
        gram.noalias() += u.row(m).transpose() * u.row(m);

    Recovery out;
    out.at_bandwidth = static_cast<Eigen::Index>(set.size()) == bandwidth;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    const double largest = eig.eigenvalues().maxCoeff();
    out.condition = smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
    if (!(out.condition <= 1e12))
        throw NumericalError("sampling set of size " + std::to_string(set.size()) + " cannot recover a band of " +
                             std::to_string(bandwidth) + " frequencies (condition estimate " +
                             std::to_string(out.condition) + "); use more or different samples");

    const Eigen::VectorXd coeffs = gram.llt().solve(u.transpose() * samples);
    const Eigen::VectorXd band_signal = u * coeffs;
    out.signal = samples;
    for (Eigen::Index m = 0; m < samples.size(); ++m)
        if (set.mask[m] == 0.0)
            out.signal[m] += band_signal[m];
    return out;
}

const char* to_string(LaplacianVariant variant)
{
    return variant == LaplacianVariant::FullL1 ? "full_L1" : "down_only";
}

Eigen::Index default_bandwidth(std::size_t n_samples, Eigen::Index cap)
{
    return std::max<Eigen::Index>(1, std::min<Eigen::Index>(static_cast<Eigen::Index>(n_samples / 2), cap));
}

Eigen::Index max_bandwidth_used(const RecoveryExperimentOptions& options)
{
    if (options.bandwidth > 0)
        return options.bandwidth;
    Eigen::Index out = 1;
    for (std::size_t n : options.n_samples_grid)
        out = std::max(out, default_bandwidth(n, options.max_bandwidth));
    return out;
}

std::vector<RecoveryRow> recovery_sweep(const Eigen::VectorXd& signal, const std::vector<SpectralBasis>& bases,
                                        const RecoveryExperimentOptions& options)
{
    if (options.n_samples_grid.empty())
        throw ConfigError("empty sample-count grid");
    if (bases.size() != options.variants.size())
        throw ConfigError("one spectral basis per Laplacian variant is required");
    const auto num_edges = static_cast<std::size_t>(signal.size());
    for (std::size_t n : options.n_samples_grid)
        if (n < 1 || n > num_edges)
            throw ConfigError("sample count " + std::to_string(n) + " outside [1, " + std::to_string(num_edges) + "]");

    const std::size_t cells = options.n_samples_grid.size() * options.variants.size();
    std::vector<RecoveryRow> rows(cells);
    detail::parallel_for(cells, options.threads, [&](std::size_t cell) {
        const std::size_t g = cell / options.variants.size();
        const std::size_t v = cell % options.variants.size();
        const std::size_t n = options.n_samples_grid[g];
        const Eigen::Index k =
            options.bandwidth > 0 ? options.bandwidth : default_bandwidth(n, options.max_bandwidth);

        const BandlimitedModel model = BandlimitedModel::lowest(bases[v], k);
        const SamplingSet set = maxdet_select(model, n);
        const Recovery rec = recover(sample(signal, set), set, model);
        const double sq = (rec.signal - signal).squaredNorm();

        RecoveryRow& row = rows[cell];
        row.n_samples = n;
        row.variant = options.variants[v];
        row.bandwidth = k;
        row.mse_mean_sq = sq / static_cast<double>(num_edges);
        row.norm_error = std::sqrt(sq);
        row.cond_estimate = rec.condition;
        row.seed = options.seed;
    });
    return rows;
}

std::vector<RecoveryRow> recovery_experiment(const SimplicialComplex2& complex, const NodeVectorField& field,
                                             const RecoveryExperimentOptions& options)
{
    const MetricMatrices metrics = assemble_metrics(complex, options.metric_mode);
    const HodgeLaplacian1 l1 = build_l1(complex, metrics);
    const Eigen::VectorXd signal = project_to_edges(field, complex);
    const Eigen::Index k = max_bandwidth_used(options);

    std::vector<SpectralBasis> bases;
    for (LaplacianVariant v : options.variants)
        bases.push_back(spectral_basis(v == LaplacianVariant::FullL1 ? l1.full : l1.down, k));
    return recovery_sweep(signal, bases, options);
}

} // namespace topsig
