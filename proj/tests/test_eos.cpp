#include <doctest.h>

#include <cmath>

#include "bifluid/eos.hpp"
#include "bifluid/errors.hpp"
#include "support.hpp"

using namespace bifluid;
using bifluid::testing::Gen;
using bifluid::testing::rel_err;
using bifluid::testing::unit_base;

namespace {

/// H by adaptive Simpson on the ray integral, independent of the Gauss-Legendre path.
double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0)
{
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    const double l = (m - a) / 6.0 * (fa + 4 * f(0.5 * (a + m)) + fm);
    const double r = (b - m) / 6.0 * (fm + 4 * f(0.5 * (m + b)) + fb);
    if (depth > 40 || std::abs(l + r - whole) < 15 * tol) return l + r + (l + r - whole) / 15;
    return simpson(f, a, m, tol / 2, depth + 1) + simpson(f, m, b, tol / 2, depth + 1);
}

/// R ∫_1^R P(s, sZ/R)/s² ds
double helmholtz_simpson(double R, double Z, const EosParams& e)
{
    auto f = [&](double s) { return pressure(StatePoint{s, s * Z / R}, e) / (s * s); };
    return R * simpson(f, 1.0, R, 1e-13);
}

EosParams params(double a1, double a2, double g, double b)
{
    EosParams e;
    e.a1 = a1;
    e.a2 = a2;
    e.gamma = g;
    e.beta = b;
    return e;
}

} // namespace

TEST_CASE("parameter invariants")
{
    CHECK(EosParams{}.violations().empty());
    EosParams e;
    e.gamma = 1.0;
    CHECK_THROWS_AS(e.validate(), ConfigError);
    e = {};
    e.b_high = e.b_low;
    CHECK_FALSE(e.violations().empty());
    e = {};
    e.a2 = 0.0;
    CHECK_FALSE(e.violations().empty());
}

TEST_CASE("pressure values")
{
    CHECK(pressure(StatePoint{0, 0}, params(3, 4, 1.5, 2.5)) == 0.0);
    CHECK(pressure(StatePoint{1, 1}, EosParams{}) == doctest::Approx(2.0));
    CHECK(pressure(StatePoint{2, 1}, params(1, 3, 2, 3)) == doctest::Approx(7.0));
    CHECK_THROWS_AS(pressure(StatePoint{-1, 1}, EosParams{}), DomainError);
}

TEST_CASE("pressure gradient")
{
    auto g = pressure_grad({1, 1}, EosParams{});
    CHECK(g(0) == doctest::Approx(2.0));
    CHECK(g(1) == doctest::Approx(2.0));
    g = pressure_grad({2, 1}, EosParams{});
    CHECK(g(0) == doctest::Approx(4.0));
    CHECK(g(1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pressure_grad({0, 1}, EosParams{}), DomainError);

    Gen gen(11);
    const EosParams e = params(2, 0.7, 1.4, 2.3);
    for (int i = 0; i < 200; ++i) {
        const StatePoint p = gen.quadrant_point();
        const double hr = 1e-5 * std::max(p.R, 1.0), hz = 1e-5 * std::max(p.Z, 1.0);
        const double fr = (pressure(StatePoint{p.R + hr, p.Z}, e) - pressure(StatePoint{p.R - hr, p.Z}, e)) / (2 * hr);
        const double fz = (pressure(StatePoint{p.R, p.Z + hz}, e) - pressure(StatePoint{p.R, p.Z - hz}, e)) / (2 * hz);
        g = pressure_grad(p, e);
        CHECK(rel_err(g(0), fr) < 1e-6);
        CHECK(rel_err(g(1), fz) < 1e-6);
    }
}

TEST_CASE("helmholtz with the unit base point")
{
    const EosParams e = unit_base();
    CHECK(helmholtz_quad(StatePoint{1.0, 5.0}, e, 16) == 0.0);
    CHECK(helmholtz_quad(StatePoint{0.0, 3.0}, e, 16) == 0.0);
    CHECK(helmholtz_quad(StatePoint{2.0, 1.0}, e, 32) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(helmholtz_closed(StatePoint{2.0, 1.0}, e) == doctest::Approx(2.5).epsilon(1e-14));
    for (double Z : {0.0, 0.3, 1.0, 7.0}) CHECK(helmholtz_closed(StatePoint{1.0, Z}, e) == 0.0);
    CHECK_THROWS_AS(helmholtz_closed(StatePoint{-1.0, 1.0}, e), DomainError);

    const auto g = helmholtz_grad({1, 1}, e);
    CHECK(g(0) == doctest::Approx(2.0));
    CHECK(std::abs(g(1)) < 1e-14);
    CHECK_THROWS_AS(helmholtz_grad({0, 1}, e), DomainError);
}

TEST_CASE("helmholtz with the origin base point")
{
    const EosParams e;
    // a1 R^γ/(γ−1) + a2 Z^β/(β−1)
    CHECK(helmholtz_closed(StatePoint{2.0, 1.0}, e) == doctest::Approx(5.0));
    CHECK(helmholtz_closed(StatePoint{0.0, 3.0}, e) == 0.0);
    CHECK(helmholtz_quad(StatePoint{2.0, 1.0}, e, 32) == doctest::Approx(5.0).epsilon(1e-12));
    const auto g = helmholtz_grad({1, 1}, e);
    CHECK(g(0) == doctest::Approx(2.0));
    CHECK(g(1) == doctest::Approx(2.0));
}

TEST_CASE("closed form agrees with an independent Simpson integration of the ray integral")
{
    Gen gen(3);
    const EosParams e = unit_base(params(2, 1, 1.4, 2));
    for (int i = 0; i < 50; ++i) {
        const StatePoint p = gen.cone_point(e, -1.5, 1.5);
        const double ref = helmholtz_simpson(p.R, p.Z, e);
        if (std::abs(ref) < 1e-12) continue;
        CHECK(rel_err(helmholtz_closed(p, e), ref) < 1e-9);
    }
}

TEST_CASE("quadrature matches the closed form on 1000 cone points")
{
    for (const auto base : {HelmholtzBase::unit, HelmholtzBase::origin}) {
        EosParams e;
        e.base = base;
        Gen gen(5);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const StatePoint p = gen.cone_point(e);
            const double closed = helmholtz_closed(p, e);
            if (std::abs(closed) < 1e-300) continue;
            worst = std::max(worst, rel_err(helmholtz_quad(p, e, 64), closed));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("gauss-legendre convergence order on a non-polynomial integrand")
{
    const EosParams e = unit_base(params(1, 1, 1.4, 1.7));
    const StatePoint p{6.5, 4.0};
    const double exact = helmholtz_closed(p, e);
    double prev = std::abs(helmholtz_quad(p, e, 2) - exact);
    for (int n : {4}) {
        const double err = std::abs(helmholtz_quad(p, e, n) - exact);
        CHECK(prev / err >= 8.0);
        prev = err;
    }
}

TEST_CASE("helmholtz gradient and hessian against finite differences")
{
    Gen gen(17);
    for (const auto base : {HelmholtzBase::unit, HelmholtzBase::origin}) {
        EosParams e = params(1.3, 0.8, 1.6, 2.4);
        e.base = base;
        for (int i = 0; i < 200; ++i) {
            const StatePoint p = gen.quadrant_point(0.2, 4.0);
            const double hr = 1e-5 * std::max(p.R, 1.0), hz = 1e-5 * std::max(p.Z, 1.0);
            auto H = [&](double R, double Z) { return helmholtz_closed(StatePoint{R, Z}, e); };
            const auto g = helmholtz_grad(p, e);
            const double fr = (H(p.R + hr, p.Z) - H(p.R - hr, p.Z)) / (2 * hr);
            const double fz = (H(p.R, p.Z + hz) - H(p.R, p.Z - hz)) / (2 * hz);
            CHECK(std::abs(g(0) - fr) < 1e-6 * std::max(1.0, std::abs(fr)));
            CHECK(std::abs(g(1) - fz) < 1e-6 * std::max(1.0, std::abs(fz)));

            const Eigen::Matrix2d hd = dual_hessian([&](auto r, auto z) { return helmholtz_closed(StatePointT<decltype(r)>{r, z}, e); }, p.R, p.Z);
            const Eigen::Matrix2d ha = helmholtz_hessian(p, e);
            CHECK((hd - ha).norm() < 1e-10 * std::max(1.0, ha.norm()));
        }
    }
}

TEST_CASE("euler identity residual")
{
    CHECK(euler_identity_residual({1, 1}, EosParams{}) < 1e-8);
    CHECK(euler_identity_residual({3, 2.5}, params(2, 1, 1.4, 2)) < 1e-6);
    EosParams e;
    for (double R : {0.5, 1.0, 5.0}) CHECK(euler_identity_residual({R, e.b_low * R}, e) < 1e-6);
    for (double R : {0.5, 1.0, 5.0}) CHECK(euler_identity_residual({R, e.b_low * R}, unit_base()) < 1e-6);
}

TEST_CASE("euler identity holds on 1000 sampled cone points")
{
    const EosParams e;
    Gen gen(23);
    for (int i = 0; i < 1000; ++i) {
        const StatePoint p = gen.cone_point(e);
        const double scale = std::max(1.0, pressure(p, e));
        CHECK(euler_identity_residual(p, e) < 1e-6 * scale);
    }
}

TEST_CASE("convexity constants")
{
    auto rep = convexity_constants(EosParams{}, 1000);
    CHECK(rep.a_low == doctest::Approx(1.0));
    CHECK(rep.a_high == doctest::Approx(1.0));
    CHECK(rep.gamma_coercive == doctest::Approx(2.0));
    CHECK(rep.hessian_min_eig > 0.0);
    CHECK(rep.samples == 1000);
    CHECK(rep.coercive_a > 0.0);

    rep = convexity_constants(params(1, 1, 2, 3), 1000);
    CHECK(rep.a_low == doctest::Approx(0.5));
    CHECK(rep.a_high == doctest::Approx(1.0));
    CHECK(rep.gamma_coercive == doctest::Approx(2.0));
    CHECK(rep.lower_gap_min_eig >= -1e-10);
    CHECK(rep.upper_gap_min_eig >= -1e-10);

    CHECK_THROWS_AS(convexity_constants(EosParams{}, 50), DomainError);
}

TEST_CASE("the unit base point fails certification")
{
    // ∇²H(1,1) = [[0, 2], [2, 0]] for γ = β = 2
    const Eigen::Matrix2d h = helmholtz_hessian({1, 1}, unit_base());
    CHECK(h(0, 0) == doctest::Approx(0.0));
    CHECK(h(0, 1) == doctest::Approx(2.0));
    CHECK(h(1, 1) == doctest::Approx(0.0));
    const auto rep = sample_convexity(unit_base(), 1000);
    CHECK_FALSE(rep.pass);
    CHECK(rep.hessian_min_eig < 0.0);
    CHECK_THROWS_AS(convexity_constants(unit_base(), 1000), CertificationError);
}

TEST_CASE("generic-law certification reproduces the power-law constants")
{
    const EosParams e = params(1, 1, 2, 3);
    const auto rep = certify_pressure_law(PowerLawPressure(e), e, 200);
    CHECK(rep.pass);
    CHECK(rep.a_low == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rep.a_high == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("affine pressure parts are reported, not certified")
{
    const EosParams e;
    auto affine = [](const auto& R, const auto& Z) { return R * R + Z * Z + 0.5 * R + 0.5 * Z; };
    const auto rep = certify_pressure_law(affine, e, 200);
    CHECK_FALSE(rep.pass);
    REQUIRE_FALSE(rep.failures.empty());
    CHECK(rep.failures.front().find("converge") != std::string::npos);

    auto linear = [](const auto& R, const auto& Z) { return 2.0 * R + Z; };
    EosParams u = unit_base();
    const auto lin = certify_pressure_law(linear, u, 200);
    CHECK_FALSE(lin.pass);
}

TEST_CASE("bregman divergence")
{
    const EosParams e;
    CHECK(bregman_h({1.3, 1.1}, {1.3, 1.1}, e) == doctest::Approx(0.0).scale(1.0));
    // Taylor remainder ∫_0^1 (1−s) dᵀ∇²H(ref + s d) d ds by Simpson, independent of the gradient
    for (const EosParams& ee : {e, unit_base(), params(1, 2, 1.5, 2.5)}) {
        const StatePoint p{2, 2}, ref{1, 1};
        const Eigen::Vector2d d(p.R - ref.R, p.Z - ref.Z);
        auto f = [&](double s) {
            const StatePoint q{ref.R + s * d(0), ref.Z + s * d(1)};
            return (1 - s) * d.dot(helmholtz_hessian(q, ee) * d);
        };
        const double oracle = simpson(f, 0.0, 1.0, 1e-13);
        CHECK(bregman_h(p, ref, ee) == doctest::Approx(oracle).epsilon(1e-9));
    }
    CHECK(bregman_h({2, 2}, {1, 1}, e) == doctest::Approx(2.0));
    CHECK_THROWS_AS(bregman_h({1, 1}, {0, 1}, e), DomainError);
}

TEST_CASE("bregman nonnegativity on 10^4 cone pairs")
{
    const EosParams e = params(1.5, 0.5, 1.7, 2.6);
    Gen gen(29);
    int negatives = 0, zero_at_distinct = 0;
    for (int i = 0; i < 10000; ++i) {
        const StatePoint p = gen.cone_point(e), ref = gen.cone_point(e);
        const double b = bregman_h(p, ref, e);
        if (b < -1e-12 * std::max(1.0, helmholtz_closed(p, e))) ++negatives;
        if (b <= 1e-12 && (std::abs(p.R - ref.R) > 1e-3 || std::abs(p.Z - ref.Z) > 1e-3)) ++zero_at_distinct;
    }
    CHECK(negatives == 0);
    CHECK(zero_at_distinct == 0);
}

TEST_CASE("coercivity on the cone")
{
    const EosParams e = params(1, 1, 2, 3);
    const auto rep = convexity_constants(e, 500);
    Gen gen(31);
    for (int i = 0; i < 500; ++i) {
        const StatePoint p = gen.cone_point(e, 0.0, 2.0);
        CHECK(pressure(p, e) >= rep.coercive_a * std::pow(p.R, rep.gamma_coercive) * (1 - 1e-12));
    }
}

TEST_CASE("cone membership")
{
    const EosParams e;
    CHECK(in_cone({1, 0.5}, e));
    CHECK(in_cone({1, 2}, e));
    CHECK_FALSE(in_cone({1, 0.25}, e));
    CHECK_FALSE(in_cone({1, 2.5}, e));
    CHECK(in_cone({0, 0}, e));
}
