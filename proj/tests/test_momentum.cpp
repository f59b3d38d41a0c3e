#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bifluid/errors.hpp"
#include "bifluid/momentum.hpp"
#include "support.hpp"

using namespace bifluid;
using bifluid::testing::Gen;
using std::numbers::pi;

namespace {

BoundaryData bc_const(double u)
{
    BoundaryData bc;
    bc.u_b = Expression(u);
    return bc;
}

} // namespace

TEST_CASE("stress")
{
    const Vector z = Vector::Zero(5);
    CHECK(stress_1d(z, StressParams{}).norm() == 0.0);
    CHECK(stress_1d(Vector::Ones(5), StressParams{1.0, 0.0})(2) == doctest::Approx(2.0));
    CHECK(stress_1d(Vector::Constant(5, 2.0), StressParams{1.0, -0.5})(0) == doctest::Approx(3.0));
    CHECK(StressParams{1.0, -0.5}.violations().empty());
    CHECK_FALSE(StressParams{1.0, -2.0}.violations().empty());
    CHECK_FALSE(StressParams{0.0, 1.0}.violations().empty());
}

TEST_CASE("unit density gives the identity mass matrix")
{
    const Grid1D g(64);
    const auto b = build_basis(6, g);
    const auto lift = tabulate_lift(bc_const(0.0), g);
    const Vector half = Vector::Constant(64, 0.5);
    const auto sys = assemble_galerkin_system(g, b, half, half, Vector::Zero(6), lift, EosParams{}, StressParams{}, 1e-2);
    CHECK((sys.mass - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("uniform steady state is force free")
{
    const Grid1D g(128);
    const auto b = build_basis(8, g);
    const auto lift = tabulate_lift(bc_const(0.5), g);
    const Vector one = Vector::Ones(128);
    const auto sys = assemble_galerkin_system(g, b, one, one, Vector::Zero(8), lift, EosParams{}, StressParams{}, 1e-2);
    CHECK(sys.convection.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sys.pressure.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sys.force().cwiseAbs().maxCoeff() < 1e-12);

    const Vector v = step_momentum(g, b, Vector::Zero(8), Vector::Zero(8), one, one, one, one, 1e-3, lift, EosParams{},
                                   StressParams{}, 1e-2);
    CHECK(v.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single-mode viscous force")
{
    const Grid1D g(256);
    const auto b = build_basis(4, g);
    const auto lift = tabulate_lift(bc_const(0.0), g);
    const Vector half = Vector::Constant(256, 0.5);
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    for (const StressParams s : {StressParams{1.0, 0.0}, StressParams{0.7, 0.3}}) {
        const auto sys = assemble_galerkin_system(g, b, half, half, v, lift, EosParams{}, s, 1e-2);
        CHECK(sys.force()(0) == doctest::Approx(-s.modulus() * pi * pi).epsilon(1e-4));
        CHECK(std::abs(sys.convection(0)) < 1e-12);
    }
}

TEST_CASE("nonpositive density is rejected")
{
    const Grid1D g(32);
    const auto b = build_basis(4, g);
    const auto lift = tabulate_lift(bc_const(0.0), g);
    Vector R = Vector::Constant(32, 0.5), Z = Vector::Constant(32, 0.5);
    R(3) = 0.0;
    Z(3) = 0.0;
    CHECK_THROWS_AS(assemble_galerkin_system(g, b, R, Z, Vector::Zero(4), lift, EosParams{}, StressParams{}, 1e-2), DomainError);
}

TEST_CASE("heat-mode decay")
{
    const Grid1D g(128);
    const auto b = build_basis(8, g);
    const auto lift = tabulate_lift(bc_const(0.0), g);
    const Vector half = Vector::Constant(128, 0.5);
    const StressParams s{1.0, 0.0};
    const double dt = 1e-4;
    Vector v = Vector::Zero(8);
    v(0) = 1.0;
    const double v0 = v.norm();
    for (int k = 1; k <= 1000; ++k) {
        Vector iter = v;
        for (int it = 0; it < 30; ++it) {
            const Vector next = step_momentum(g, b, v, iter, half, half, half, half, dt, lift, EosParams{}, s, 1e-2);
            if ((next - iter).norm() < 1e-14) {
                iter = next;
                break;
            }
            iter = next;
        }
        v = iter;
        const double t = k * dt;
        CHECK(v.norm() <= v0 * std::exp(-s.modulus() * pi * pi * t) * (1 + 1e-2));
    }
}

TEST_CASE("weighted mass matrix spectrum")
{
    Gen gen(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid1D g(96);
        const auto b = build_basis(gen.integer(1, 12), g);
        const auto lift = tabulate_lift(bc_const(gen.uniform(-1, 1)), g);
        Vector R(96), Z(96);
        for (int j = 0; j < 96; ++j) {
            R(j) = gen.uniform(0.1, 2);
            Z(j) = gen.uniform(0.1, 2);
        }
        const auto sys = assemble_galerkin_system(g, b, R, Z, Vector::Zero(b.n_modes), lift, EosParams{}, StressParams{}, 1e-2);
        CHECK((sys.mass - sys.mass.transpose()).norm() < 1e-14);
        const double lam = Eigen::SelfAdjointEigenSolver<Matrix>(sys.mass).eigenvalues()(0);
        CHECK(lam >= (R + Z).minCoeff() * (1 - 1e-6));
    }
}

TEST_CASE("dirichlet trace of the full velocity")
{
    const Grid1D g(64);
    const auto b = build_basis(8, g);
    BoundaryData bc;
    bc.u_b = Expression::parse("0.3 + 0.4*x");
    const auto lift = tabulate_lift(bc, g);
    Gen gen(47);
    Vector v(8);
    for (int i = 0; i < 8; ++i) v(i) = gen.uniform(-1, 1);
    const Vector u = reconstruct_faces(v, b) + lift.faces;
    CHECK(u(0) == 0.3);
    CHECK(u(64) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("kinetic energy decays at the viscous rate")
{
    const Grid1D g(128);
    const auto b = build_basis(8, g);
    const auto lift = tabulate_lift(bc_const(0.0), g);
    const Vector half = Vector::Constant(128, 0.5);
    const StressParams s;
    const double dt = 1e-4;
    Vector v = Vector::Zero(8);
    v(0) = 0.5;
    v(2) = -0.3;
    for (int k = 0; k < 50; ++k) {
        Vector iter = v;
        for (int it = 0; it < 30; ++it) iter = step_momentum(g, b, v, iter, half, half, half, half, dt, lift, EosParams{}, s, 1e-2);
        const double de = 0.5 * (iter.squaredNorm() - v.squaredNorm()) / dt;
        const Vector du = reconstruct_derivative(iter, b);
        const double diss = s.modulus() * g.integrate(du.cwiseAbs2());
        // backward Euler dissipates ½|Δv|²/dt ≤ ½ dt ν (3π)² · diss on modes up to 3
        CHECK(std::abs(de + diss) <= 0.5 * dt * s.modulus() * 9 * pi * pi * diss * (1 + 1e-3) + 1e-10);
        v = iter;
    }
}
