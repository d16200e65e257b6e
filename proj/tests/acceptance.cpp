// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <charconv>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "topsig/denoise.hpp"
#include "topsig/field_maps.hpp"
#include "topsig/operators.hpp"
#include "topsig/sampling.hpp"
#include "topsig/spectral.hpp"
#include "topsig/whitney.hpp"

using namespace topsig;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& name, const std::function<Outcome()>& check,
            double time_limit_seconds)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = check();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > time_limit_seconds) {
        outcome.pass = false;
        outcome.detail += " [over time limit " + std::to_string(time_limit_seconds) + " s]";
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s %-4s %-34s %7.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
}

std::string num(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- 1 ----------------------------------------------------------------------

Outcome structural()
{
    const std::pair<MeshData, long> cases[] = {{fixtures::single_triangle(), 1},
                                               {fixtures::two_triangle_strip(), 1},
                                               {fixtures::torus(), 0},
                                               {make_spheroid(2), 2}};
    Outcome out;
    for (const auto& [mesh, chi] : cases) {
        const auto c = fixtures::build(mesh);
        const IncidenceMatrix product = c.b1() * c.b2();
        bool ok = product.nonZeros() == 0 || Eigen::MatrixXi(product).cwiseAbs().maxCoeff() == 0;
        ok = ok && (Eigen::MatrixXi(c.b1()).cwiseAbs().colwise().sum().array() == 2).all();
        ok = ok && (Eigen::MatrixXi(c.b2()).cwiseAbs().colwise().sum().array() == 3).all();
        ok = ok && euler_characteristic(c) == chi;
        out.pass = out.pass && ok;
        out.detail += "chi=" + std::to_string(euler_characteristic(c)) + (ok ? " " : "(bad) ");
    }
    return out;
}

// ---- 2 ----------------------------------------------------------------------

Outcome metrics_suite()
{
    Outcome out;
    std::mt19937_64 rng(kSeed);
    std::vector<MeshData> meshes{fixtures::single_triangle(), fixtures::two_triangle_strip(), fixtures::annulus(),
                                 make_spheroid(1, Vec3(1.0, 0.8, 0.5))};
    for (int i = 0; i < 4; ++i)
        meshes.push_back(fixtures::random_grid(rng, 7, 6));
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& mesh : meshes) {
        const auto c = fixtures::build(mesh);
        if (c.num_edges() > 300)
            continue;
        const auto m = assemble_metrics(c);
        for (const Eigen::MatrixXd& mat : {fixtures::dense(m.m0), fixtures::dense(m.m1),
                                           Eigen::MatrixXd(m.m2.asDiagonal())}) {
            const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mat, Eigen::EigenvaluesOnly)
                                  .eigenvalues()
                                  .minCoeff();
            min_eig = std::min(min_eig, lo);
            out.pass = out.pass && lo > 0.0 && (mat - mat.transpose()).cwiseAbs().maxCoeff() == 0.0;
        }
    }

    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double quad_err = 0.0;
    for (int t = 0; t < 100;) {
        const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
        if ((b - a).cross(c - a).norm() < 0.1)
            continue;
        const Eigen::Matrix3d oracle = oracles::gauss_mass_1(a, b, c);
        quad_err = std::max(quad_err, (local_mass_matrix_1(a, b, c) - oracle).cwiseAbs().maxCoeff() /
                                          std::max(1.0, oracle.cwiseAbs().maxCoeff()));
        ++t;
    }

    auto mesh = fixtures::random_grid(rng);
    const auto before = assemble_metrics(fixtures::build(mesh));
    const Mat3 rotation = Eigen::AngleAxisd(1.1, Vec3(-1, 2, 0.5).normalized()).toRotationMatrix();
    for (auto& p : mesh.points.positions)
        p = rotation * p + Vec3(-4, 7, 1);
    const auto after = assemble_metrics(fixtures::build(mesh));
    const double rigid = std::max({(fixtures::dense(before.m0) - fixtures::dense(after.m0)).cwiseAbs().maxCoeff(),
                                   (fixtures::dense(before.m1) - fixtures::dense(after.m1)).cwiseAbs().maxCoeff(),
                                   (before.m2 - after.m2).cwiseAbs().maxCoeff()});
    out.pass = out.pass && quad_err <= 1e-12 && rigid <= 1e-10;
    out.detail = "min eig " + sci(min_eig) + ", quadrature err " + sci(quad_err) + ", rigid err " + sci(rigid);
    return out;
}

// ---- 3 ----------------------------------------------------------------------

Outcome topology()
{
    Outcome out;
    const std::pair<MeshData, Eigen::Index> cases[] = {
        {fixtures::single_triangle(), 0}, {fixtures::annulus(), 1}, {fixtures::torus(), 2}};
    for (const auto& [mesh, expected] : cases) {
        const auto c = fixtures::build(mesh);
        const Eigen::MatrixXd l = fixtures::dense(build_l1(c, MetricMatrices::identity_for(c)).full);
        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l, Eigen::EigenvaluesOnly).eigenvalues();
        const Eigen::Index kernel = (ev.array().abs() < 1e-8).count();
        const Eigen::Index oracle = static_cast<Eigen::Index>(c.num_edges()) -
                                    fixtures::rank(Eigen::MatrixXi(c.b1()).cast<double>()) -
                                    fixtures::rank(Eigen::MatrixXi(c.b2()).cast<double>());
        out.pass = out.pass && kernel == expected && oracle == expected;
        out.detail += std::to_string(kernel) + "/" + std::to_string(oracle) + " ";
    }
    out.detail = "kernel/oracle " + out.detail;
    return out;
}

// ---- 4 ----------------------------------------------------------------------

Outcome field_maps()
{
    std::mt19937_64 rng(kSeed + 4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double reconstruct_err = 0.0, lift_err = 0.0;
    LiftOptions options;
    options.pseudoinverse_fallback = true;
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = fixtures::build(fixtures::random_grid(rng, 4 + trial % 4, 3 + trial % 3));
        const auto geometry = triangle_geometry(c);
        const Vec3 k(u(rng), u(rng), u(rng));
        const auto v =
            whitney_reconstruct_barycenter(project_to_edges(NodeVectorField(c.num_vertices(), k), c), c);
        TriangleTangentField tri(c.num_triangles());
        for (std::size_t t = 0; t < tri.size(); ++t) {
            tri[t] = geometry[t].tangent_projector * k;
            reconstruct_err = std::max(reconstruct_err, (v[t] - tri[t]).cwiseAbs().maxCoeff());
        }
        const auto lifted = lift_to_vertices(tri, c, options);
        for (std::size_t i = 0; i < c.num_vertices(); ++i) {
            const auto& incident = c.vertex_triangles()[i];
            bool spans = false;
            for (Index s : incident)
                spans = spans || geometry[s].normal.cross(geometry[incident[0]].normal).norm() > 1e-6;
            if (spans)
                lift_err = std::max(lift_err, (lifted[i] - k).cwiseAbs().maxCoeff());
        }
    }
    return {reconstruct_err <= 1e-12 && lift_err <= 1e-10,
            "reconstruction err " + sci(reconstruct_err) + ", lift err " + sci(lift_err)};
}

// ---- 5 ----------------------------------------------------------------------

struct ExactRecovery {
    double relative_error = 0.0;
    double sample_error = 0.0;
    std::string csv;
};

ExactRecovery exact_recovery()
{
    const auto c = fixtures::build(fixtures::torus());
    const auto basis = spectral_basis(build_l1(c, assemble_metrics(c)).full, 50);
    const auto model = BandlimitedModel::lowest(basis, 50);
    std::mt19937_64 rng(kSeed + 5);
    std::normal_distribution<double> g;
    Eigen::VectorXd coeff(50);
    for (auto& x : coeff)
        x = g(rng);
    const Eigen::VectorXd s = model.vectors * coeff;
    const auto set = maxdet_select(model, 100);
    const Eigen::VectorXd y = sample(s, set);
    const auto rec = recover(y, set, model);

    ExactRecovery out;
    out.relative_error = (rec.signal - s).norm() / s.norm();
    for (Eigen::Index m : set.order)
        out.sample_error = std::max(out.sample_error, std::abs(rec.signal[m] - y[m]));
    std::ostringstream csv;
    csv << "edge,value\n";
    for (Eigen::Index m : set.order)
        csv << m << ',' << num(rec.signal[m]) << '\n';
    csv << "relative_error," << num(out.relative_error) << "\ncond," << num(rec.condition) << '\n';
    out.csv = csv.str();
    return out;
}

// ---- 6 ----------------------------------------------------------------------

std::vector<RecoveryRow> recovery_sweep_rows(unsigned threads)
{
    const auto c = fixtures::build(fixtures::torus());
    RecoveryExperimentOptions o;
    for (std::size_t n = 100; n <= 750; n += 50)
        o.n_samples_grid.push_back(n);
    o.seed = kSeed;
    o.threads = threads;
    return recovery_experiment(c, assign_coordinate_colors(c.points()).colors, o);
}

std::string recovery_csv(const std::vector<RecoveryRow>& rows)
{
    std::ostringstream csv;
    csv << "n_samples,variant,mse_mean_sq,norm_error,cond_estimate,seed\n";
    for (const auto& r : rows)
        csv << r.n_samples << ',' << to_string(r.variant) << ',' << num(r.mse_mean_sq) << ',' << num(r.norm_error)
            << ',' << num(r.cond_estimate) << ',' << r.seed << '\n';
    return csv.str();
}

// ---- 7 ----------------------------------------------------------------------

Outcome denoiser_optimality(std::string* csv)
{
    std::ostringstream rows;
    rows << "instance,lambda,gamma,objective,iterations\n";
    std::mt19937_64 rng(kSeed + 7);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::normal_distribution<double> g(0.0, 0.6);
    double worst_cert = 0.0, worst_obj = 0.0, worst_soft = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = fixtures::build(fixtures::random_grid(rng, 6, 6));
        const SparseMatrix l = build_l2(c, assemble_metrics(c)).full;
        Eigen::VectorXd x(static_cast<Eigen::Index>(c.num_triangles()));
        for (auto& v : x)
            v = g(rng);
        DenoiseSettings st;
        st.lambda = weight(rng);
        st.gamma = weight(rng);
        const auto sol = denoise(l, x, st);
        ok = ok && sol.converged;
        rows << trial << ',' << num(st.lambda) << ',' << num(st.gamma) << ',' << num(sol.objective) << ','
             << sol.iterations << '\n';

        const double tol = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
        const Eigen::VectorXd grad = 2.0 * (sol.signal - x) + 2.0 * st.lambda * (l * sol.signal);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double violation = sol.signal[i] == 0.0
                                         ? std::abs(grad[i]) - st.gamma
                                         : std::abs(grad[i] + st.gamma * (sol.signal[i] > 0 ? 1.0 : -1.0));
            worst_cert = std::max(worst_cert, violation / tol);
        }
        const double fo = denoise_objective(l, x, oracles::qp_oracle(Eigen::MatrixXd(l), x, st.lambda, st.gamma), st);
        worst_obj = std::max(worst_obj, std::abs(sol.objective - fo) / std::abs(fo));

        st.lambda = 0.0;
        const auto soft = denoise(l, x, st);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double expected = std::copysign(std::max(std::abs(x[i]) - st.gamma / 2, 0.0), x[i]);
            worst_soft = std::max(worst_soft, std::abs(soft.signal[i] - expected));
        }
    }
    if (csv)
        *csv = rows.str();
    ok = ok && worst_cert <= 1.0 && worst_obj <= 1e-6 && worst_soft <= 1e-10;
    return {ok, "certificate " + sci(worst_cert) + " x tol, objective gap " + sci(worst_obj) + ", soft-threshold err " +
                    sci(worst_soft)};
}

// ---- 8 ----------------------------------------------------------------------

std::vector<SnrRow> snr_rows(unsigned threads)
{
    const auto c = fixtures::build(fixtures::torus());
    SnrExperimentOptions o;
    o.seed = kSeed;
    o.threads = threads;
    return snr_experiment(c, o);
}

std::string snr_csv(const std::vector<SnrRow>& rows)
{
    std::ostringstream csv;
    csv << "snr_db,lambda,gamma,trial,mse,iterations,converged\n";
    for (const auto& r : rows)
        csv << num(r.snr_db) << ',' << num(r.lambda) << ',' << num(r.gamma) << ',' << r.trial << ',' << num(r.mse)
            << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    return csv.str();
}

Outcome snr_trends(const std::vector<SnrRow>& rows)
{
    std::map<double, std::map<double, double>> mean; // lambda -> snr -> mean mse
    std::map<double, std::map<double, int>> count;
    bool converged = true;
    for (const auto& r : rows) {
        mean[r.lambda][r.snr_db] += r.mse;
        count[r.lambda][r.snr_db] += 1;
        converged = converged && r.converged;
    }
    Outcome out;
    for (auto& [lambda, curve] : mean) {
        int inversions = 0;
        double previous = std::numeric_limits<double>::infinity();
        for (auto& [snr, value] : curve) {
            value /= count[lambda][snr];
            inversions += value > previous ? 1 : 0;
            previous = value;
        }
        out.pass = out.pass && inversions <= 1;
        out.detail += "lambda " + sci(lambda) + ": " + std::to_string(inversions) + " inversions; ";
    }
    for (const auto& [snr, value] : mean[0.1]) {
        if (snr < 20.0)
            continue;
        const bool lowest = value < mean[0.2][snr] && value < mean[0.5][snr];
        out.pass = out.pass && lowest;
        out.detail += "snr " + sci(snr) + " lambda=0.1 " + (lowest ? "lowest" : "NOT lowest") + "; ";
    }
    out.pass = out.pass && converged;
    if (!converged)
        out.detail += "some solves did not converge";
    return out;
}

} // namespace

int main()
{
    report("1", "structural suite", structural, 1.0);
    report("2", "metric suite", metrics_suite, 1e9);
    report("3", "topology via spectrum", topology, 30.0);
    report("4", "field-map exactness", field_maps, 1e9);

    ExactRecovery exact;
    report("5", "exact bandlimited recovery", [&] {
        exact = exact_recovery();
        return Outcome{exact.relative_error < 1e-8 && exact.sample_error <= 1e-12,
                       "relative err " + sci(exact.relative_error) + ", sample err " + sci(exact.sample_error)};
    }, 60.0);

    std::vector<RecoveryRow> sweep;
    const auto sweep_start = std::chrono::steady_clock::now();
    sweep = recovery_sweep_rows(0);
    const double sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_start).count();
    std::vector<double> full, down;
    for (const auto& r : sweep)
        (r.variant == LaplacianVariant::FullL1 ? full : down).push_back(r.mse_mean_sq);
    report("6a", "full L1 beats down-only", [&] {
        std::size_t wins = 0;
        for (std::size_t i = 0; i < full.size(); ++i)
            wins += full[i] <= down[i] ? 1 : 0;
        return Outcome{wins * 5 >= full.size() * 4, std::to_string(wins) + "/" + std::to_string(full.size()) +
                                                        " grid points (sweep " + sci(sweep_seconds) + " s)"};
    }, 600.0 - sweep_seconds);
    report("6b", "full L1 error drops 10x", [&] {
        const double ratio = full.front() / full.back();
        return Outcome{ratio >= 10.0, "MSE " + sci(full.front()) + " -> " + sci(full.back()) + " (" + sci(ratio) + "x)"};
    }, 1e9);
    report("6b", "down-only error drops 10x", [&] {
        const double ratio = down.front() / down.back();
        return Outcome{ratio >= 10.0, "MSE " + sci(down.front()) + " -> " + sci(down.back()) + " (" + sci(ratio) + "x)"};
    }, 1e9);

    std::string optimality_csv;
    report("7", "denoiser optimality", [&] { return denoiser_optimality(&optimality_csv); }, 1e9);

    std::vector<SnrRow> snr;
    report("8", "SNR trends", [&] {
        snr = snr_rows(0);
        return snr_trends(snr);
    }, 600.0);

    report("9", "determinism", [&] {
        const bool exact_same = exact_recovery().csv == exact.csv;
        const bool sweep_same = recovery_csv(recovery_sweep_rows(3)) == recovery_csv(sweep);
        const bool snr_same = snr_csv(snr_rows(3)) == snr_csv(snr);
        std::string rerun;
        denoiser_optimality(&rerun);
        const bool optimality_same = rerun == optimality_csv;
        Outcome out{exact_same && sweep_same && optimality_same && snr_same, ""};
        out.detail = std::string("criterion 5 ") + (exact_same ? "same" : "DIFFERS") + ", 6 " +
                     (sweep_same ? "same" : "DIFFERS") + ", 7 " +
                     (optimality_same ? "same" : "DIFFERS") + ", 8 " +
                     (snr_same ? "same" : "DIFFERS");
        return out;
    }, 1e9);

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "PASSED", failures);
    return failures ? 1 : 0;
}
