#include "qfridge/matrixcore.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace qfridge;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n;
    ComplexMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(n(rng), n(rng));
    return m;
}

ComplexMatrix random_density(std::mt19937_64& rng) {
    const ComplexMatrix a = random_matrix(rng, 8, 8);
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("kron dimensions and mixed product") {
    std::mt19937_64 rng(1);
    const ComplexMatrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
    const ComplexMatrix c = random_matrix(rng, 3, 2), d = random_matrix(rng, 2, 3);
    const ComplexMatrix k = kron(a, b);
    CHECK(k.rows() == 6);
    CHECK(k.cols() == 6);
    CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() < 1e-12);
}

TEST_CASE("kron with identity is block diagonal") {
    std::mt19937_64 rng(2);
    const ComplexMatrix b = random_matrix(rng, 3, 3);
    const ComplexMatrix k = kron(identity(2), b);
    CHECK((k.block(0, 0, 3, 3) - b).norm() == 0.0);
    CHECK((k.block(3, 3, 3, 3) - b).norm() == 0.0);
    CHECK(k.block(0, 3, 3, 3).norm() == 0.0);
}

TEST_CASE("kron rejects non-finite input") {
    ComplexMatrix a = identity(2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(kron(a, identity(2)), std::invalid_argument);
}

TEST_CASE("vectorization identity vec(AXB) = (B^T kron A) vec(X)") {
    std::mt19937_64 rng(3);
    const ComplexMatrix A = random_matrix(rng, 4, 4), X = random_matrix(rng, 4, 4), B = random_matrix(rng, 4, 4);
    CHECK((vectorize(A * X * B) - kron(B.transpose(), A) * vectorize(X)).norm() < 1e-12);
    CHECK((unvectorize(vectorize(X), 4) - X).norm() == 0.0);
    CHECK_THROWS_AS(unvectorize(vectorize(X), 3), std::invalid_argument);
}

TEST_CASE("commutator and trace") {
    std::mt19937_64 rng(4);
    const ComplexMatrix a = random_matrix(rng, 5, 5), b = random_matrix(rng, 5, 5);
    CHECK(std::abs(trace(commutator(a, b))) < 1e-12);
    CHECK(commutator(a, a).norm() == 0.0);
    CHECK_THROWS_AS(trace(random_matrix(rng, 2, 3)), std::invalid_argument);
}

TEST_CASE("null_space of a projector") {
    ComplexMatrix p = ComplexMatrix::Zero(4, 4);
    p(0, 0) = 1.0;
    p(1, 1) = 1.0;
    const NullSpace ns = null_space(p);
    REQUIRE(ns.basis.size() == 2);
    for (const auto& v : ns.basis) {
        CHECK((p * v).norm() < 1e-14);
        CHECK_THAT(v.norm(), WithinAbs(1.0, 1e-14));
    }
}

TEST_CASE("null_space of a full-rank and of a zero matrix") {
    std::mt19937_64 rng(5);
    CHECK(null_space(random_matrix(rng, 6, 6)).basis.empty());
    CHECK(null_space(ComplexMatrix::Zero(3, 3)).basis.size() == 3);
    CHECK(null_space(ComplexMatrix(0, 0)).basis.empty());
}

TEST_CASE("null_space rank-one deficient random matrix") {
    std::mt19937_64 rng(6);
    const ComplexMatrix u = random_matrix(rng, 6, 5), v = random_matrix(rng, 5, 6);
    const ComplexMatrix m = u * v;
    const NullSpace ns = null_space(m);
    REQUIRE(ns.basis.size() == 1);
    CHECK((m * ns.basis[0]).norm() < 1e-10 * m.norm());
}

TEST_CASE("null_space reports an ambiguous rank") {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(2, 2) = 1e-10;  // exactly at threshold, within a decade
    CHECK_THROWS_AS(null_space(m, 1e-10), RankAmbiguityError);
    m(2, 2) = 1e-13;
    CHECK(null_space(m, 1e-10).basis.size() == 1);
}

TEST_CASE("null_space argument checks") {
    CHECK_THROWS_AS(null_space(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(null_space(identity(2), 0.0), std::invalid_argument);
}

TEST_CASE("dm_validate accepts valid density matrices") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const auto r = dm_validate(random_density(rng));
        CHECK(std::holds_alternative<DensityMatrix>(r));
    }
    ComplexMatrix pure = ComplexMatrix::Zero(8, 8);
    pure(7, 7) = 1.0;
    CHECK(std::holds_alternative<DensityMatrix>(dm_validate(pure)));
}

TEST_CASE("dm_validate rejections carry the violation") {
    std::mt19937_64 rng(8);
    auto violation = [](const ComplexMatrix& m) { return std::get<DmRejection>(dm_validate(m)).violation; };

    CHECK(violation(identity(4) / 4.0) == DmViolation::WrongShape);

    ComplexMatrix rho = random_density(rng);
    ComplexMatrix bad = rho;
    bad(0, 1) += Complex(0.0, 1e-3);
    CHECK(violation(bad) == DmViolation::NonHermitian);

    CHECK(violation(2.0 * rho) == DmViolation::TraceOff);

    ComplexMatrix neg = ComplexMatrix::Zero(8, 8);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    const auto r = dm_validate(neg);
    REQUIRE(std::holds_alternative<DmRejection>(r));
    CHECK(std::get<DmRejection>(r).violation == DmViolation::NegativeEigenvalue);
    CHECK_THAT(std::get<DmRejection>(r).magnitude, WithinAbs(0.5, 1e-12));

    ComplexMatrix nan = rho;
    nan(3, 3) = std::numeric_limits<double>::infinity();
    CHECK(violation(nan) == DmViolation::NonFinite);
}

TEST_CASE("make_density_matrix throws on rejection") {
    CHECK_THROWS_AS(make_density_matrix(ComplexMatrix::Zero(8, 8)), std::invalid_argument);
    ComplexMatrix pure = ComplexMatrix::Zero(8, 8);
    pure(0, 0) = 1.0;
    CHECK(make_density_matrix(pure).matrix()(0, 0) == Complex(1.0, 0.0));
}
