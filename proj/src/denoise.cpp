#include "topsig/denoise.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "parallel.hpp"
#include "topsig/error.hpp"

namespace topsig {

namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double threshold)
{
    return v.unaryExpr([threshold](double a) {
        const double mag = std::abs(a) - threshold;
        return mag > 0.0 ? std::copysign(mag, a) : 0.0;
    });
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double relative_change(double before, double after)
{
    return std::abs(before - after) / std::max(std::abs(before), std::numeric_limits<double>::min());
}

DenoiseSolution solve_squared(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy,
                              const DenoiseSettings& settings, double lmax)
{
    const double lipschitz = 2.0 * (1.0 + settings.lambda * lmax);
    const double step = 1.0 / lipschitz;
    const double optimality = settings.optimality_tolerance * (1.0 + noisy.lpNorm<Eigen::Infinity>());

    DenoiseSolution out;
    Eigen::VectorXd s = noisy;
    Eigen::VectorXd z = s;
    double f = denoise_objective(laplacian, noisy, s, settings);
    double t = 1.0;
    bool restarted = true;
    if (settings.record_history)
        out.history.push_back(f);

    int it = 0;
    for (; it < settings.max_iterations; ++it) {
        const Eigen::VectorXd grad = 2.0 * (z - noisy) + 2.0 * settings.lambda * (laplacian * z);
        Eigen::VectorXd next = soft_threshold(z - step * grad, settings.gamma * step);
        const double fn = denoise_objective(laplacian, noisy, next, settings);
        const double mapping = lipschitz * (z - next).lpNorm<Eigen::Infinity>();

        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
        if (fn > f + slack) {
            // A plain proximal step from s cannot increase F beyond rounding.
            if (restarted) {
                out.converged = mapping <= optimality;
                break;
            }
            z = s;
            t = 1.0;
            restarted = true;
            continue;
        }

        const double change = relative_change(f, fn);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = next + ((t - 1.0) / t_next) * (next - s);
        s = std::move(next);
        f = fn;
        t = t_next;
        restarted = false;
        if (settings.record_history)
            out.history.push_back(f);
        if (change < settings.tolerance && mapping <= optimality) {
            out.converged = true;
            ++it;
            break;
        }
    }
    out.signal = std::move(s);
    out.objective = f;
    out.iterations = it;
    return out;
}

// Davis-Yin splitting: prox of the unsquared data term, prox of the l1 term,
// gradient of the smoothness term.
DenoiseSolution solve_unsquared(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy,
                                const DenoiseSettings& settings, double lmax)
{
    const double smooth_lipschitz = 2.0 * settings.lambda * lmax;
    const double tau = smooth_lipschitz > 0.0 ? 1.0 / smooth_lipschitz : 1.0;
    const double optimality = settings.optimality_tolerance * (1.0 + noisy.lpNorm<Eigen::Infinity>());

    DenoiseSolution out;
    Eigen::VectorXd z = noisy;
    Eigen::VectorXd best = noisy;
    double best_f = denoise_objective(laplacian, noisy, noisy, settings);
    double previous = best_f;
    if (settings.record_history)
        out.history.push_back(best_f);

    int it = 0;
    for (; it < settings.max_iterations; ++it) {
        const Eigen::VectorXd xg = soft_threshold(z, tau * settings.gamma);
        const Eigen::VectorXd v = 2.0 * xg - z - tau * 2.0 * settings.lambda * (laplacian * xg);
        const Eigen::VectorXd offset = v - noisy;
        const double dist = offset.norm();
        const Eigen::VectorXd xf = dist > tau ? Eigen::VectorXd(noisy + offset * (1.0 - tau / dist)) : noisy;
        z += xf - xg;

        const double f = denoise_objective(laplacian, noisy, xg, settings);
        if (f <= best_f) {
            best_f = f;
            best = xg;
            if (settings.record_history)
                out.history.push_back(f);
        }
        const double gap = (xf - xg).lpNorm<Eigen::Infinity>() / tau;
        if (relative_change(previous, f) < settings.tolerance && gap <= optimality) {
            out.converged = true;
            ++it;
            break;
        }
        previous = f;
    }
    out.signal = std::move(best);
    out.objective = best_f;
    out.iterations = it;
    return out;
}

} // namespace

double denoise_objective(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy, const Eigen::VectorXd& signal,
                         const DenoiseSettings& settings)
{
    const double residual = (signal - noisy).squaredNorm();
    const double data = settings.data_term == DataTerm::Squared ? residual : std::sqrt(residual);
    return data + settings.lambda * signal.dot(laplacian * signal) + settings.gamma * signal.lpNorm<1>();
}

double max_eigenvalue(const SparseMatrix& matrix, double relative_tolerance, int max_iterations)
{
    const Eigen::Index n = matrix.rows();
    if (n == 0)
        return 0.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(0.5, 1.5);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = uniform(rng);
    v.normalize();

    double estimate = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd w = matrix * v;
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0)
            return 0.0;
        v = w / norm;
        if (it > 0 && std::abs(next - estimate) <= relative_tolerance * std::abs(next))
            return next;
        estimate = next;
    }
    return estimate;
}

DenoiseSolution denoise(const SparseMatrix& laplacian, const Eigen::VectorXd& noisy, const DenoiseSettings& settings)
{
    if (laplacian.rows() != noisy.size() || laplacian.cols() != noisy.size())
        throw ConfigError("noisy signal length does not match L2");
    if (!(settings.lambda >= 0.0) || !(settings.gamma >= 0.0))
        throw ConfigError("lambda and gamma must be non-negative");
    if (!noisy.allFinite())
        throw ConfigError("noisy signal has non-finite entries");

    const double lmax = settings.laplacian_max_eigenvalue > 0.0 ? settings.laplacian_max_eigenvalue
                                                                : max_eigenvalue(laplacian);
    return settings.data_term == DataTerm::Squared ? solve_squared(laplacian, noisy, settings, lmax)
                                                   : solve_unsquared(laplacian, noisy, settings, lmax);
}

std::vector<Vec3> face_normals(const SimplicialComplex2& complex)
{
    const auto geometry = triangle_geometry(complex);
    std::vector<Vec3> out;
    out.reserve(geometry.size());
    for (const auto& g : geometry)
        out.push_back(g.normal);
    return out;
}

DenoisedNormals denoise_normals(const SimplicialComplex2& complex, const HodgeLaplacian2& l2,
                                const std::vector<Vec3>& noisy_normals, const DenoiseSettings& settings)
{
    const std::size_t num_tris = complex.num_triangles();
    if (noisy_normals.size() != num_tris)
        throw ConfigError("normal count does not match the triangle count");
    for (const Vec3& n : noisy_normals)
        if (!n.allFinite())
            throw ConfigError("noisy normals contain non-finite entries");

    DenoiseSettings local = settings;
    if (local.laplacian_max_eigenvalue <= 0.0)
        local.laplacian_max_eigenvalue = max_eigenvalue(l2.full);

    const auto& sign = complex.winding_sign();
    DenoisedNormals out;
    out.normals.assign(num_tris, Vec3::Zero());
    out.converged = true;
    for (int c = 0; c < 3; ++c) {
        Eigen::VectorXd component(static_cast<Eigen::Index>(num_tris));
        for (std::size_t t = 0; t < num_tris; ++t)
            component[static_cast<Eigen::Index>(t)] = sign[t] * noisy_normals[t][c];
        const DenoiseSolution sol = denoise(l2.full, component, local);
        for (std::size_t t = 0; t < num_tris; ++t)
            out.normals[t][c] = sign[t] * sol.signal[static_cast<Eigen::Index>(t)];
        out.iterations = std::max(out.iterations, sol.iterations);
        out.converged = out.converged && sol.converged;
    }
    for (std::size_t t = 0; t < num_tris; ++t) {
        const double norm = out.normals[t].norm();
        if (norm < 1e-9)
            out.zero_triangles.push_back(static_cast<Index>(t));
        else
            out.normals[t] /= norm;
    }
    return out;
}

std::vector<Vec3> add_normal_noise(const std::vector<Vec3>& normals, double snr_db, std::uint64_t seed)
{
    if (!std::isfinite(snr_db))
        throw ConfigError("SNR must be finite");
    double power = 0.0;
    for (const Vec3& n : normals)
        power += n.squaredNorm();
    power /= std::max<double>(1.0, 3.0 * static_cast<double>(normals.size()));
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> out = normals;
    for (Vec3& n : out)
        for (int c = 0; c < 3; ++c)
            n[c] += sigma * gauss(rng);
    return out;
}

double normal_mse(const std::vector<Vec3>& estimate, const std::vector<Vec3>& truth)
{
    if (estimate.size() != truth.size() || truth.empty())
        throw ConfigError("normal fields differ in length");
    double sum = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t)
        sum += (estimate[t] - truth[t]).squaredNorm();
    return sum / (3.0 * static_cast<double>(truth.size()));
}

std::uint64_t noise_stream_seed(std::uint64_t seed, std::size_t snr_index, int trial)
{
    return splitmix64(splitmix64(seed ^ splitmix64(snr_index)) + static_cast<std::uint64_t>(trial));
}

std::vector<SnrRow> snr_experiment(const SimplicialComplex2& complex, const SnrExperimentOptions& options)
{
    if (options.snr_grid.empty() || options.lambdas.empty() || options.gammas.empty() || options.trials < 1)
        throw ConfigError("SNR experiment grids must be non-empty and trials >= 1");

    const MetricMatrices metrics = assemble_metrics(complex, options.metric_mode);
    const HodgeLaplacian2 l2 = build_l2(complex, metrics);
    DenoiseSettings solver = options.solver;
    solver.laplacian_max_eigenvalue = max_eigenvalue(l2.full);
    const std::vector<Vec3> clean = face_normals(complex);

    const std::size_t nl = options.lambdas.size();
    const std::size_t ng = options.gammas.size();
    const auto trials = static_cast<std::size_t>(options.trials);
    const std::size_t cells = options.snr_grid.size() * nl * ng * trials;

    std::vector<SnrRow> rows(cells);
    detail::parallel_for(cells, options.threads, [&](std::size_t cell) {
        const std::size_t r = cell % trials;
        const std::size_t g = (cell / trials) % ng;
        const std::size_t l = (cell / (trials * ng)) % nl;
        const std::size_t s = cell / (trials * ng * nl);

        const auto noisy = add_normal_noise(clean, options.snr_grid[s],
                                            noise_stream_seed(options.seed, s, static_cast<int>(r)));
        DenoiseSettings local = solver;
        local.lambda = options.lambdas[l];
        local.gamma = options.gammas[g];
        const DenoisedNormals result = denoise_normals(complex, l2, noisy, local);

        SnrRow& row = rows[cell];
        row.snr_db = options.snr_grid[s];
        row.lambda = local.lambda;
        row.gamma = local.gamma;
        row.trial = static_cast<int>(r);
        row.mse = normal_mse(result.normals, clean);
        row.noisy_mse = normal_mse(noisy, clean);
        row.iterations = result.iterations;
        row.converged = result.converged;
    });
    return rows;
}

} // namespace topsig
