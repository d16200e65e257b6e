#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "topsig/error.hpp"
#include "topsig/whitney.hpp"

using namespace topsig;

namespace {

Vec3 random_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(rng), u(rng), u(rng)};
}

double min_eigenvalue(const Eigen::MatrixXd& m)
{
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("barycentric gradients sum to zero and reproduce vertex values")
{
    const Vec3 a(0.1, 0.2, 0.3), b(1.2, -0.1, 0.5), c(0.3, 1.1, -0.2);
    const auto g = barycentric_gradients(a, b, c);
    CHECK((g[0] + g[1] + g[2]).norm() < 1e-14);
    CHECK(g[0].dot(b - a) == doctest::Approx(-1.0));
    CHECK(g[1].dot(b - a) == doctest::Approx(1.0));
    const auto e = eval_whitney_0(a, b, c, (a + b + c) / 3.0);
    for (double v : e.values)
        CHECK(v == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(eval_whitney_0(a, b, c, a + 10.0 * (b - a).cross(c - a)), MeshError);
}

TEST_CASE("edge-midpoint mass matrix matches the Gauss oracle")
{
    std::mt19937_64 rng(7);
    int tested = 0;
    while (tested < 100) {
        const Vec3 a = random_point(rng), b = random_point(rng), c = random_point(rng);
        if ((b - a).cross(c - a).norm() < 0.1)
            continue;
        const Eigen::Matrix3d mine = local_mass_matrix_1(a, b, c);
        const Eigen::Matrix3d oracle = oracles::gauss_mass_1(a, b, c);
        CHECK((mine - oracle).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, oracle.cwiseAbs().maxCoeff()));
        ++tested;
    }
}

TEST_CASE("M0 reproduces the area")
{
    const auto c = fixtures::build(fixtures::annulus());
    const auto m0 = mass_matrix_0(c);
    CHECK(fixtures::dense(m0.consistent).sum() == doctest::Approx(8.0));
    CHECK(m0.lumped.sum() == doctest::Approx(8.0));
    CHECK(mass_matrix_2(c).cwiseInverse().sum() == doctest::Approx(8.0));
}

TEST_CASE("metric matrices are symmetric positive definite")
{
    std::mt19937_64 rng(11);
    std::vector<MeshData> meshes{fixtures::single_triangle(), fixtures::two_triangle_strip(), fixtures::annulus(),
                                 make_spheroid(1, Vec3(1.0, 0.8, 0.5))};
    for (int i = 0; i < 4; ++i)
        meshes.push_back(fixtures::random_grid(rng, 6, 5));
    for (const auto& mesh : meshes) {
        const auto c = fixtures::build(mesh);
        REQUIRE(c.num_edges() <= 300);
        const auto metrics = assemble_metrics(c);
        const Eigen::MatrixXd m0 = fixtures::dense(metrics.m0);
        const Eigen::MatrixXd m1 = fixtures::dense(metrics.m1);
        CHECK((m0 - m0.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((m1 - m1.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(min_eigenvalue(m0) > 0.0);
        CHECK(min_eigenvalue(m1) > 0.0);
        CHECK(metrics.m2.minCoeff() > 0.0);
        CHECK(metrics.m0_lumped.minCoeff() > 0.0);
        CHECK(metrics.m1_lumped.minCoeff() > 0.0);
    }
}

TEST_CASE("metric matrices are invariant under rigid motions")
{
    std::mt19937_64 rng(3);
    auto mesh = fixtures::random_grid(rng);
    const auto before = assemble_metrics(fixtures::build(mesh));
    const Mat3 rotation = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    for (auto& p : mesh.points.positions)
        p = rotation * p + Vec3(5, -3, 2);
    const auto after = assemble_metrics(fixtures::build(mesh));
    CHECK((fixtures::dense(before.m0) - fixtures::dense(after.m0)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((fixtures::dense(before.m1) - fixtures::dense(after.m1)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((before.m1_lumped - after.m1_lumped).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((before.m2 - after.m2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("metric mode names")
{
    CHECK(parse_metric_mode("lumped") == MetricMode::Lumped);
    CHECK(parse_metric_mode("consistent-solve") == MetricMode::ConsistentSolve);
    CHECK(std::string(to_string(MetricMode::ConsistentSolve)) == "consistent-solve");
    CHECK_THROWS_AS(parse_metric_mode("banana"), ConfigError);
}
