#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "topsig/denoise.hpp"
#include "topsig/error.hpp"
#include "topsig/operators.hpp"

using namespace topsig;

namespace {

struct Instance {
    SparseMatrix l;
    Eigen::VectorXd x;
};

Instance random_instance(std::mt19937_64& rng)
{
    const auto c = fixtures::build(fixtures::random_grid(rng, 6, 6));
    REQUIRE(c.num_triangles() == 50);
    std::normal_distribution<double> g(0.0, 0.6);
    Eigen::VectorXd x(50);
    for (auto& v : x)
        v = g(rng);
    return {build_l2(c, assemble_metrics(c)).full, x};
}

double objective(const Instance& in, const Eigen::VectorXd& s, const DenoiseSettings& st)
{
    return denoise_objective(in.l, in.x, s, st);
}

} // namespace

TEST_CASE("solutions satisfy the subgradient certificate and match the QP oracle")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = random_instance(rng);
        DenoiseSettings st;
        st.lambda = weight(rng);
        st.gamma = weight(rng);
        const auto sol = denoise(in.l, in.x, st);
        CHECK(sol.converged);

        const double tol = 1e-6 * (1.0 + in.x.lpNorm<Eigen::Infinity>());
        const Eigen::VectorXd grad = 2.0 * (sol.signal - in.x) + 2.0 * st.lambda * (in.l * sol.signal);
        for (Eigen::Index i = 0; i < grad.size(); ++i) {
            if (sol.signal[i] == 0.0)
                CHECK(std::abs(grad[i]) <= st.gamma + tol);
            else
                CHECK(std::abs(grad[i] + st.gamma * (sol.signal[i] > 0 ? 1.0 : -1.0)) <= tol);
        }

        const Eigen::VectorXd oracle = oracles::qp_oracle(Eigen::MatrixXd(in.l), in.x, st.lambda, st.gamma);
        const double fo = objective(in, oracle, st);
        CHECK(std::abs(sol.objective - fo) <= 1e-6 * std::abs(fo));
    }
}

TEST_CASE("zero smoothness weight gives soft thresholding")
{
    std::mt19937_64 rng(32);
    const auto in = random_instance(rng);
    DenoiseSettings st;
    st.lambda = 0.0;
    st.gamma = 0.3;
    const auto sol = denoise(in.l, in.x, st);
    for (Eigen::Index i = 0; i < in.x.size(); ++i) {
        const double expected = std::copysign(std::max(std::abs(in.x[i]) - st.gamma / 2, 0.0), in.x[i]);
        CHECK(std::abs(sol.signal[i] - expected) <= 1e-10);
    }
}

TEST_CASE("objective history is monotone")
{
    std::mt19937_64 rng(33);
    const auto in = random_instance(rng);
    DenoiseSettings st;
    st.lambda = 0.5;
    st.record_history = true;
    const auto sol = denoise(in.l, in.x, st);
    REQUIRE(sol.history.size() > 2);
    for (std::size_t i = 1; i < sol.history.size(); ++i)
        CHECK(sol.history[i] <= sol.history[i - 1] + 1e-12 * std::max(1.0, std::abs(sol.history[i - 1])));
}

TEST_CASE("larger smoothness weight gives smoother solutions")
{
    std::mt19937_64 rng(34);
    const auto in = random_instance(rng);
    DenoiseSettings st;
    st.gamma = 0.1;
    double previous = std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
        st.lambda = lambda;
        const auto s = denoise(in.l, in.x, st).signal;
        const double energy = s.dot(in.l * s);
        CHECK(energy < previous);
        previous = energy;
    }
}

TEST_CASE("unsquared data term reaches a local minimum")
{
    std::mt19937_64 rng(35);
    const auto in = random_instance(rng);
    DenoiseSettings st;
    st.data_term = DataTerm::Unsquared;
    st.lambda = 0.3;
    st.gamma = 0.05;
    const auto sol = denoise(in.l, in.x, st);
    CHECK(sol.converged);
    const double f = objective(in, sol.signal, st);
    std::normal_distribution<double> g;
    for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd d(50);
        for (auto& v : d)
            v = g(rng);
        CHECK(objective(in, sol.signal + 1e-4 * d.normalized(), st) >= f - 1e-9);
    }
}

TEST_CASE("noise model")
{
    const auto c = fixtures::build(make_spheroid(4));
    const auto clean = face_normals(c);
    for (const auto& n : clean)
        CHECK(n.norm() == doctest::Approx(1.0));
    const auto a = add_normal_noise(clean, 10.0, 5);
    const auto b = add_normal_noise(clean, 10.0, 5);
    CHECK(normal_mse(a, b) == 0.0);
    // P = 1/3 for unit normals, so sigma^2 = (1/3) / 10.
    CHECK(normal_mse(a, clean) == doctest::Approx(1.0 / 30.0).epsilon(0.03));
    CHECK(normal_mse(add_normal_noise(clean, 10.0, 6), clean) != normal_mse(a, clean));
    CHECK_THROWS_AS(add_normal_noise(clean, std::nan(""), 1), ConfigError);
}

TEST_CASE("normal denoising is independent of the source winding")
{
    auto mesh = fixtures::torus();
    const auto c = fixtures::build(mesh);
    const auto noisy = add_normal_noise(face_normals(c), 5.0, 9);

    auto flipped_mesh = mesh;
    for (std::size_t t = 0; t < flipped_mesh.triangles.size(); t += 3)
        std::swap(flipped_mesh.triangles[t][1], flipped_mesh.triangles[t][2]);
    const auto f = fixtures::build(flipped_mesh);
    REQUIRE(f.triangles() == c.triangles());
    std::vector<Vec3> flipped_input(noisy.size());
    for (std::size_t t = 0; t < noisy.size(); ++t)
        flipped_input[t] = f.winding_sign()[t] == c.winding_sign()[t] ? noisy[t] : Vec3(-noisy[t]);

    DenoiseSettings st;
    const auto metrics = assemble_metrics(c);
    const auto a = denoise_normals(c, build_l2(c, metrics), noisy, st);
    const auto b = denoise_normals(f, build_l2(f, assemble_metrics(f)), flipped_input, st);
    CHECK(a.converged);
    CHECK(a.zero_triangles.empty());
    double worst = 0.0;
    for (std::size_t t = 0; t < noisy.size(); ++t) {
        const double s = f.winding_sign()[t] == c.winding_sign()[t] ? 1.0 : -1.0;
        worst = std::max(worst, (b.normals[t] - s * a.normals[t]).norm());
    }
    CHECK(worst < 1e-12);
    CHECK(normal_mse(a.normals, face_normals(c)) < normal_mse(noisy, face_normals(c)));
}

TEST_CASE("SNR experiment is schedule independent")
{
    const auto c = fixtures::build(make_spheroid(1));
    SnrExperimentOptions o;
    o.snr_grid = {0, 20};
    o.lambdas = {0.1, 0.5};
    o.trials = 3;
    o.seed = 4;
    o.threads = 1;
    const auto serial = snr_experiment(c, o);
    o.threads = 4;
    const auto parallel = snr_experiment(c, o);
    REQUIRE(serial.size() == 12);
    CHECK(serial[0].snr_db == 0.0);
    CHECK(serial[3].lambda == 0.5);
    CHECK(serial[11].trial == 2);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].mse == parallel[i].mse);
        CHECK(serial[i].iterations == parallel[i].iterations);
    }
    // Both weights see the same noise draw.
    CHECK(serial[0].noisy_mse == serial[3].noisy_mse);
    CHECK(noise_stream_seed(4, 0, 0) != noise_stream_seed(4, 0, 1));
    CHECK(noise_stream_seed(4, 0, 0) != noise_stream_seed(4, 1, 0));
}
