#include <doctest.h>

#include <random>

#include "gridgram/errors.hpp"
#include "gridgram/gramian.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gridgram;

TEST_CASE("metric names round-trip") {
    for (MetricKind k : kAllMetrics) {
        CHECK(parse_metric(metric_name(k)) == k);
    }
    CHECK_FALSE(parse_metric("det").has_value());
}

TEST_CASE("infinite gramian of the 9-bus system") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const GramianResult g = gramian_infinite(sys);
    CHECK(g.positive_definite);
    CHECK_FALSE(g.horizon.has_value());
    const Matrix ref = oracle::kronecker_lyapunov(sys.a, sys.b * sys.b.transpose());
    CHECK((g.w - ref).norm() / ref.norm() < 1e-10);
    CHECK(g.metric(MetricKind::Trace) == doctest::Approx(g.w.trace()));
    CHECK(*g.logdet == doctest::Approx(std::log(g.w.determinant())));
    CHECK(*g.neg_trace_inv == doctest::Approx(-g.w.inverse().trace()));
}

TEST_CASE("finite gramian matches quadrature and approaches the infinite one") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const double tf = default_horizon(sys);
    CHECK(tf == doctest::Approx(-1.0 / spectral_abscissa(sys.a)));
    const GramianResult finite = gramian_finite(sys, tf);
    const Matrix quad = oracle::finite_gramian_quadrature(sys.a, sys.b, tf, 4000);
    CHECK((finite.w - quad).norm() / quad.norm() < 1e-7);

    const GramianResult infinite = gramian_infinite(sys);
    const GramianResult long_run = gramian_finite(sys, 40.0 * tf);
    CHECK((long_run.w - infinite.w).norm() / infinite.w.norm() < 1e-10);
    // W(tf) <= W(inf) in the Loewner order
    CHECK((infinite.w - finite.w).eigenvalues().real().minCoeff() > -1e-10);
}

TEST_CASE("minimum energy input steers the state to the origin") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const double tf = 2.0;
    Vector x0 = Vector::LinSpaced(sys.order(), -0.3, 0.5);
    const MinimumEnergyInput u(sys, x0, tf);
    auto rhs = [&](double t, const Vector& z) {
        Vector out(z.size());
        const Eigen::Index n = sys.order();
        const Vector ut = u(t);
        out.head(n) = sys.a * z.head(n) + sys.b * ut;
        out(n) = ut.squaredNorm();
        return out;
    };
    Vector z = Vector::Zero(sys.order() + 1);
    z.head(sys.order()) = x0;
    z = oracle::rk4(rhs, z, 0.0, tf, 20000);
    CHECK(z.head(sys.order()).norm() < 1e-6 * x0.norm());

    // energy of this input is (e^{A tf} x0)^T W^-1 (e^{A tf} x0)
    const Vector xf = matrix_exponential(sys.a, tf) * x0;
    CHECK(z(sys.order()) == doctest::Approx(minimum_energy_cost(sys, xf, tf)).epsilon(1e-6));
}

TEST_CASE("minimum energy cost overloads agree") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const Vector x0 = Vector::Ones(sys.order());
    const Matrix w_inv = gramian_infinite(sys).w.inverse();
    CHECK(minimum_energy_cost(sys, x0, std::nullopt) ==
          doctest::Approx(x0.dot(w_inv * x0)).epsilon(1e-10));
    CHECK(minimum_energy_cost(w_inv, x0) == doctest::Approx(x0.dot(w_inv * x0)));
}

TEST_CASE("damping ratio") {
    CHECK(damping_ratio(Complex(-1.0, 1.0)) == doctest::Approx(70.71067811865476));
    CHECK(damping_ratio(Complex(-1.0, -1.0)) == doctest::Approx(70.71067811865476));
    CHECK(damping_ratio(Complex(-2.0, 0.0)) == doctest::Approx(100.0));
}

TEST_CASE("conjugate poles share damping and report is sorted") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const auto report = damping_report(sys.a);
    CHECK(report.size() == 5);
    for (const DampedPole& p : report) {
        if (p.pole.imag() != 0.0) {
            const auto partner = std::find_if(report.begin(), report.end(), [&](const DampedPole& q) {
                return std::abs(q.pole - std::conj(p.pole)) < 1e-9;
            });
            REQUIRE(partner != report.end());
            CHECK(partner->zeta == doctest::Approx(p.zeta));
        }
    }
    for (std::size_t k = 1; k < report.size(); ++k) {
        CHECK(std::abs(report[k - 1].pole.imag()) <= std::abs(report[k].pole.imag()) + 1e-12);
    }
    const auto slow = slow_mode(report);
    REQUIRE(slow.has_value());
    CHECK(slow->pole.imag() > 0.0);
}

TEST_CASE("damping ratios are invariant under time scaling") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const auto base = damping_report(sys.a);
    for (double c : {0.1, 3.0, 250.0}) {
        const auto scaled = damping_report(c * sys.a);
        REQUIRE(scaled.size() == base.size());
        for (std::size_t k = 0; k < base.size(); ++k) {
            CHECK(scaled[k].zeta == doctest::Approx(base[k].zeta).epsilon(1e-9));
        }
    }
}

TEST_CASE("slow mode falls back to real poles") {
    Matrix a = Matrix::Zero(2, 2);
    a.diagonal() << -3.0, -0.5;
    const auto slow = slow_mode(damping_report(a));
    REQUIRE(slow.has_value());
    CHECK(slow->pole.real() == doctest::Approx(-0.5));
    CHECK_FALSE(slow_mode({}).has_value());
}

TEST_CASE("scalar minimum energy cost") {
    ReducedSystem sys;
    sys.a = Matrix::Constant(1, 1, -1.0);
    sys.b = Matrix::Constant(1, 1, 1.0);
    CHECK(minimum_energy_cost(sys, Vector::Ones(1), std::nullopt) == doctest::Approx(2.0));
    CHECK(minimum_energy_cost(sys, Vector::Zero(1), 1.0) == 0.0);
}

TEST_CASE("coarse RK4 lands near the origin") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    const double tf = default_horizon(sys);
    const Vector x0 = Vector::LinSpaced(sys.order(), 1.0, -1.0);
    const MinimumEnergyInput u(sys, x0, tf);
    auto rhs = [&](double t, const Vector& x) -> Vector { return sys.a * x + sys.b * u(t); };
    CHECK(oracle::rk4(rhs, x0, 0.0, tf, 2000).norm() <= 1e-4 * x0.norm());
}

TEST_CASE("infinite horizon never costs more") {
    const ReducedSystem sys = build_reduced_system(fixture::ieee9());
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (double tf : {0.5, 2.0, default_horizon(sys)}) {
        for (int k = 0; k < 20; ++k) {
            Vector x0(sys.order());
            for (Eigen::Index c = 0; c < x0.size(); ++c) {
                x0(c) = normal(rng);
            }
            CHECK(minimum_energy_cost(sys, x0, std::nullopt) <=
                  minimum_energy_cost(sys, x0, tf) + 1e-9);
        }
    }
}
