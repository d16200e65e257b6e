#include <doctest.h>

#include "fixtures.hpp"
#include "topsig/error.hpp"
#include "topsig/operators.hpp"
#include "topsig/spectral.hpp"

using namespace topsig;

TEST_CASE("iterative eigenpairs agree with the dense reference on the torus")
{
    const auto c = fixtures::build(fixtures::torus());
    const auto l1 = build_l1(c, assemble_metrics(c)).full;
    const auto reference = dense_spectral_basis(Eigen::MatrixXd(l1));
    const auto basis = spectral_basis(l1, 40);
    REQUIRE(basis.size() == 40);
    const double scale = reference.values.maxCoeff();
    for (Eigen::Index i = 0; i < 40; ++i)
        CHECK(std::abs(basis.values[i] - reference.values[i]) < 1e-9 * scale);

    const Eigen::MatrixXd gram = basis.vectors.transpose() * basis.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-9);
    const Eigen::MatrixXd residual = Eigen::MatrixXd(l1 * basis.vectors) - basis.vectors * basis.values.asDiagonal();
    CHECK(residual.colwise().norm().maxCoeff() < 1e-8 * scale);

    // Non-degenerate eigenvalues pin down the vector up to the sign convention.
    for (Eigen::Index i = 0; i < 40; ++i) {
        const bool isolated = (i == 0 || reference.values[i] - reference.values[i - 1] > 1e-6 * scale) &&
                              (i == 39 || reference.values[i + 1] - reference.values[i] > 1e-6 * scale);
        if (isolated)
            CHECK((basis.vectors.col(i) - reference.vectors.col(i)).norm() < 1e-6);
    }
}

TEST_CASE("sign convention and ordering")
{
    const auto c = fixtures::build(fixtures::annulus());
    const auto basis = spectral_basis(build_l1(c, assemble_metrics(c)).full);
    for (Eigen::Index i = 1; i < basis.size(); ++i)
        CHECK(basis.values[i - 1] <= basis.values[i]);
    for (Eigen::Index j = 0; j < basis.size(); ++j) {
        Eigen::Index first = 0;
        while (std::abs(basis.vectors(first, j)) <= 1e-8)
            ++first;
        CHECK(basis.vectors(first, j) > 0.0);
    }
}

TEST_CASE("transform round trip")
{
    const auto c = fixtures::build(fixtures::annulus());
    const auto basis = spectral_basis(build_l1(c, assemble_metrics(c)).full);
    Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(basis.size(), -1.0, 2.0);
    CHECK((isft(basis, sft(basis, s)) - s).norm() < 1e-12);
    CHECK(isft(basis, Eigen::VectorXd::Ones(3)).size() == basis.size());
    CHECK_THROWS(isft(basis, Eigen::VectorXd::Ones(basis.size() + 1)));
}
