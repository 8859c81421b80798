#include "oracles.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/models/builtin.hpp"
#include "uqsim/models/second_order.hpp"
#include "uqsim/stsolver/newton.hpp"
#include "uqsim/stsolver/transient.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace uqsim;
using namespace uqsim::models;

namespace {

SecondOrderModel scalar_oscillator(double m, double c, double k) {
    SecondOrderModel s;
    s.name = "oscillator";
    s.n = 1;
    s.m = 0;
    s.M = [m](const Vector&, const Vector&) { return Matrix::Constant(1, 1, m); };
    s.D = [c](const Vector&, const Vector&) { return Matrix::Constant(1, 1, c); };
    s.force = [k](const Vector& z, const Vector&, const Vector&) { return Vector(k * z); };
    return s;
}

double integrate_to_one(const StochasticDae& dae, double z0, double v0) {
    stsolver::TransientOptions opt;
    opt.t0 = 0.0;
    opt.t1 = 1.0;
    opt.tol = 1e-7;
    opt.output_times = {1.0};
    Matrix x0(1, 2);
    x0 << z0, v0;
    const auto traj = stsolver::integrate_points(dae, Matrix(1, 0), x0, opt);
    return traj.states.back()(0, 0);
}

}  // namespace

TEST(SecondOrder, UndampedOscillator) {
    const StochasticDae dae = second_order_to_first(scalar_oscillator(1.0, 0.0, 1.0));
    EXPECT_EQ(dae.n, 2u);
    EXPECT_NEAR(integrate_to_one(dae, 1.0, 0.0), std::cos(1.0), 1e-4);
}

TEST(SecondOrder, CriticallyDamped) {
    const StochasticDae dae = second_order_to_first(scalar_oscillator(1.0, 2.0, 1.0));
    EXPECT_NEAR(integrate_to_one(dae, 1.0, -1.0), std::exp(-1.0), 1e-4);
}

TEST(SecondOrder, ZeroMassRejected) {
    EXPECT_THROW((void)second_order_to_first(scalar_oscillator(0.0, 1.0, 1.0)), InputError);
}

// Property: eigenvalues of the linearized first-order pencil are the roots of
// det(M s^2 + D s + K).
TEST(SecondOrder, LinearizationEigenvaluesMatchCharacteristicRoots) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double m = u(rng), c = u(rng), k = u(rng);
        const StochasticDae dae = second_order_to_first(scalar_oscillator(m, c, k));
        const Vector x = Vector::Zero(2);
        const Matrix C = dae.jacobian_q(x, Vector());
        const Matrix G = dae.jacobian_f(x, Vector());
        // C x' = -G x  =>  x' = A x
        const Matrix A = -C.inverse() * G;
        Eigen::EigenSolver<Matrix> es(A);
        const std::complex<double> disc = std::sqrt(std::complex<double>(c * c - 4 * m * k));
        const std::complex<double> r1 = (-c + disc) / (2 * m);
        const std::complex<double> r2 = (-c - disc) / (2 * m);
        for (int i = 0; i < 2; ++i) {
            const auto ev = es.eigenvalues()[i];
            EXPECT_LT(std::min(std::abs(ev - r1), std::abs(ev - r2)), 1e-5 * (1 + std::abs(r1)));
        }
    }
}

TEST(Builtin, RcLowpassDcIsOneVoltForEveryParameter) {
    const auto b = builtin_model("rc_lowpass");
    const std::size_t out = b.dae.unknown_index("v(out)");
    for (double xi : {-0.1, -0.03, 0.0, 0.07, 0.1}) {
        Vector p(1);
        p << xi;
        const auto r = stsolver::solve_operating_point(b.dae, p, Vector::Zero(b.dae.n));
        ASSERT_TRUE(r.converged);
        EXPECT_NEAR(r.x[out], 1.0, 1e-12);
    }
}

TEST(Builtin, DiodeNominalMatchesBisection) {
    const auto b = builtin_model("diode_rectifier");
    const auto r = stsolver::solve_operating_point(b.dae, b.dae.nominal(), Vector::Zero(b.dae.n));
    ASSERT_TRUE(r.converged);
    const double R = 1e3, is = 1e-14, vt = 0.025852, gmin = 1e-12;
    const double v = oracle::bisect(
        [&](double x) { return (1.0 - x) / R - is * (std::exp(x / vt) - 1.0) - gmin * x; }, 0.0, 1.0);
    EXPECT_NEAR(r.x[b.dae.unknown_index("v(out)")], v, 1e-9);
}

TEST(Builtin, PlateAtZeroVoltageRestsAtZero) {
    const auto b = builtin_model("plate_actuator", {{"voltage", 0.0}});
    std::mt19937 rng(2);
    std::normal_distribution<double> g;
    for (int i = 0; i < 5; ++i) {
        Vector xi(2);
        xi << g(rng), g(rng);
        const auto r = stsolver::solve_operating_point(b.dae, xi, Vector::Zero(b.dae.n), {}, 1.0);
        ASSERT_TRUE(r.converged);
        EXPECT_NEAR(r.x[b.dae.unknown_index("z")], 0.0, 1e-12);
    }
}

TEST(Builtin, AnalyticJacobiansMatchFiniteDifferences) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 1.0);
    for (const auto& name : builtin_names()) {
        const auto b = builtin_model(name);
        for (int t = 0; t < 5; ++t) {
            Vector x(b.dae.n);
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 0.5 * u(rng);
            Vector xi = b.dae.nominal();
            const Matrix fd = finite_difference_jacobian(b.dae.f, x, xi);
            const Matrix an = b.dae.jacobian_f(x, xi);
            const double scale = std::max(1.0, an.cwiseAbs().maxCoeff());
            EXPECT_LT((fd - an).cwiseAbs().maxCoeff(), 1e-5 * scale) << name;
            const Matrix fq = finite_difference_jacobian(b.dae.q, x, xi);
            EXPECT_LT((fq - b.dae.jacobian_q(x, xi)).cwiseAbs().maxCoeff(), 1e-5 * scale) << name;
        }
    }
}

TEST(Builtin, EvaluationIsDeterministic) {
    for (const auto& name : builtin_names()) {
        const auto a = builtin_model(name);
        const auto b = builtin_model(name);
        Vector x = Vector::Constant(a.dae.n, 0.2);
        const Vector xi = a.dae.nominal();
        EXPECT_EQ(a.dae.f(x, xi), b.dae.f(x, xi)) << name;
        EXPECT_EQ(a.dae.f(x, xi), a.dae.f(x, xi)) << name;
    }
}

TEST(Builtin, UnknownNameAndParameterRejected) {
    EXPECT_THROW((void)builtin_model("nope"), InputError);
    EXPECT_THROW((void)builtin_model("divider", {{"bogus", 1.0}}), InputError);
    EXPECT_NO_THROW((void)builtin_model("diode-rectifier"));
}

TEST(Builtin, OpampHasTenParameters) {
    const auto b = builtin_model("opamp_like");
    EXPECT_EQ(b.dae.d, 10u);
    const auto r = stsolver::solve_operating_point(b.dae, b.dae.nominal(), Vector::Zero(b.dae.n));
    EXPECT_TRUE(r.converged);
}

TEST(Dae, RestrictFreezesComplement) {
    const auto b = builtin_model("opamp_like");
    const Vector anchor = b.dae.nominal();
    const StochasticDae r = restrict_parameters(b.dae, {2, 5}, anchor);
    EXPECT_EQ(r.d, 2u);
    Vector x = Vector::Constant(b.dae.n, 0.3);
    Vector sub(2);
    sub << anchor[2] + 0.01, anchor[5] - 0.02;
    Vector full = anchor;
    full[2] = sub[0];
    full[5] = sub[1];
    EXPECT_EQ(r.f(x, sub), b.dae.f(x, full));
}

TEST(Dae, ValidateCatchesShapes) {
    StochasticDae bad = builtin_model("divider").dae;
    bad.B = Matrix::Zero(1, 1);
    EXPECT_THROW(bad.validate(), InputError);
}
