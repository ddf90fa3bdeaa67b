#include <doctest.h>

#include <random>

#include "gridgram/errors.hpp"
#include "gridgram/linalg.hpp"
#include "oracles.hpp"

using namespace gridgram;

namespace {

double rel_diff(const Matrix& x, const Matrix& y) {
    return (x - y).norm() / std::max(1e-300, y.norm());
}

}  // namespace

TEST_CASE("schur form reconstructs the input") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 5, 9}) {
        const Matrix a = oracle::random_hurwitz(rng, n);
        const SchurForm s = schur_decompose(a);
        CHECK(rel_diff(s.q * s.t * s.q.transpose(), a) < 1e-12);
        CHECK((s.q.transpose() * s.q - Matrix::Identity(n, n)).norm() < 1e-12);
        for (Eigen::Index c = 0; c < n; ++c) {
            for (Eigen::Index r = c + 2; r < n; ++r) {
                CHECK(s.t(r, c) == 0.0);
            }
        }
    }
}

TEST_CASE("spectral abscissa of a diagonal matrix") {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << -3.0, -0.5, -2.0;
    CHECK(spectral_abscissa(a) == doctest::Approx(-0.5));
    CHECK(is_hurwitz(a));
    a(1, 1) = 0.0;
    CHECK_FALSE(is_hurwitz(a));
}

TEST_CASE("lyapunov solve matches the kronecker system") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(1, 10);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = size(rng);
        const Matrix a = oracle::random_hurwitz(rng, n);
        const Matrix g = Matrix::Random(n, n);
        const Matrix q = g * g.transpose();
        const Matrix x = solve_lyapunov(a, q);
        CHECK(rel_diff(x, oracle::kronecker_lyapunov(a, q)) < 1e-8);
        CHECK((a * x + x * a.transpose() + q).norm() < 1e-9 * std::max(1.0, q.norm()));
        CHECK(x.isApprox(x.transpose(), 0.0));
    }
}

TEST_CASE("lyapunov scalar case") {
    Matrix a(1, 1);
    a << -2.0;
    Matrix q(1, 1);
    q << 1.0;
    CHECK(solve_lyapunov(a, q)(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("lyapunov rejects non-Hurwitz and bad input") {
    Matrix a = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(solve_lyapunov(a, Matrix::Identity(2, 2)), StabilityViolation);
    CHECK_THROWS_AS(solve_lyapunov(Matrix::Zero(2, 3), Matrix::Zero(2, 3)), ArgumentError);
    Matrix nan = -Matrix::Identity(2, 2);
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_lyapunov(nan, Matrix::Identity(2, 2)), ArgumentError);
}

TEST_CASE("matrix exponential") {
    std::mt19937_64 rng(5);
    const Matrix a = oracle::random_hurwitz(rng, 4);
    CHECK(matrix_exponential(a, 0.0) == Matrix::Identity(4, 4));

    Matrix rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    const Matrix e = matrix_exponential(rot, M_PI / 2.0);
    Matrix expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK((e - expected).norm() < 1e-14);

    // semigroup property
    const Matrix lhs = matrix_exponential(a, 0.7);
    const Matrix rhs = matrix_exponential(a, 0.3) * matrix_exponential(a, 0.4);
    CHECK(rel_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("spd inverse and log-determinant") {
    Matrix w(2, 2);
    w << 4.0, 1.0, 1.0, 3.0;
    const SpdFactorization f = spd_inverse_and_logdet(w);
    CHECK(f.logdet == doctest::Approx(std::log(11.0)));
    CHECK((f.inverse * w - Matrix::Identity(2, 2)).norm() < 1e-14);

    Matrix singular(2, 2);
    singular << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(spd_inverse_and_logdet(singular), NotPositiveDefinite);
}
