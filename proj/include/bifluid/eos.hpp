#pragma once

// Two-species pressure law P(R, Z) = a1 R^γ + a2 Z^β, its pressure potential H
// built from the ray integral H(R,Z) = R ∫ P(s, sZ/R)/s² ds, and the sampled
// convexity certification that the energy estimates rely on.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bifluid/dual.hpp"
#include "bifluid/errors.hpp"
#include "bifluid/quadrature.hpp"

namespace bifluid {

/// Lower limit of the ray integral defining H.
///
/// `unit` integrates from s = 1 and gives H(1, Z) = 0. `origin` integrates from
/// s = 0 and gives the convex potential a1 R^γ/(γ−1) + a2 Z^β/(β−1) for the power
/// law. Both satisfy R ∂_R H + Z ∂_Z H − H = P; they differ by a 1-homogeneous term.
enum class HelmholtzBase { origin, unit };

const char* to_string(HelmholtzBase base);
HelmholtzBase parse_helmholtz_base(const std::string& name);

struct EosParams {
    double a1 = 1.0;
    double a2 = 1.0;
    double gamma = 2.0;
    double beta = 2.0;
    double b_low = 0.5;
    double b_high = 2.0;
    HelmholtzBase base = HelmholtzBase::origin;

    /// Every violated invariant, empty when valid.
    std::vector<std::string> violations() const;
    void validate() const;
};

template <class Scalar>
struct StatePointT {
    Scalar R;
    Scalar Z;
};
using StatePoint = StatePointT<double>;

/// Closed domination cone b_low·R ≤ Z ≤ b_high·R.
inline bool in_cone(const StatePoint& p, const EosParams& e, double tol = 0.0)
{
    return p.R >= 0.0 && p.Z >= 0.0 && e.b_low * p.R - p.Z <= tol && p.Z - e.b_high * p.R <= tol;
}

/// The power law as a generic callable, usable with dual scalars.
struct PowerLawPressure {
    double a1, a2, gamma, beta;

    explicit PowerLawPressure(const EosParams& e) : a1(e.a1), a2(e.a2), gamma(e.gamma), beta(e.beta) {}

    template <class Scalar>
    Scalar operator()(const Scalar& R, const Scalar& Z) const
    {
        using std::pow;
        return a1 * pow(R, gamma) + a2 * pow(Z, beta);
    }
};

namespace detail {
inline void require_nonnegative(double R, double Z, const char* op)
{
    if (!(R >= 0.0) || !(Z >= 0.0))
        throw DomainError(std::string(op) + ": densities must be nonnegative");
}
inline void require_positive(double R, double Z, const char* op)
{
    if (!(R > 0.0) || !(Z > 0.0))
        throw DomainError(std::string(op) + ": densities must be strictly positive");
}
} // namespace detail

template <class Scalar>
Scalar pressure(const StatePointT<Scalar>& p, const EosParams& e)
{
    detail::require_nonnegative(value_of(p.R), value_of(p.Z), "pressure");
    if (value_of(p.R) == 0.0 && value_of(p.Z) == 0.0) return Scalar(0.0);
    return PowerLawPressure(e)(p.R, p.Z);
}

Eigen::Vector2d pressure_grad(const StatePoint& p, const EosParams& e);
Eigen::Matrix2d pressure_hessian(const StatePoint& p, const EosParams& e);

/// Integrand of the ray integral after the substitution s = R·exp(−τ):
/// H = ∫ exp(τ) P(R e^{−τ}, Z e^{−τ}) dτ over τ ∈ [0, ln R] (unit) or [0, ∞) (origin).
template <class Law, class Scalar>
Scalar ray_integrand(const Law& law, const Scalar& R, const Scalar& Z, const Scalar& tau)
{
    using std::exp;
    Scalar shrink = exp(-tau);
    return law(R * shrink, Z * shrink) / shrink;
}

/// H by composite Gauss–Legendre on unit-width panels in the ray coordinate,
/// `quad_points` nodes per panel. The unit base integrates the oriented interval
/// [0, ln R]; the origin base marches panels until the tail is negligible and
/// throws DomainError if the integral does not settle (pressure not o(s) at 0).
template <class Law, class Scalar>
Scalar helmholtz_quad_law(const Law& law, const StatePointT<Scalar>& p, HelmholtzBase base, int quad_points)
{
    if (quad_points < 2) throw DomainError("helmholtz_quad: quad_points must be >= 2");
    detail::require_nonnegative(value_of(p.R), value_of(p.Z), "helmholtz_quad");
    if (value_of(p.R) == 0.0) return Scalar(0.0);

    auto integrand = [&](const Scalar& tau) { return ray_integrand(law, p.R, p.Z, tau); };

    if (base == HelmholtzBase::unit) {
        using std::log;
        Scalar upper = log(p.R);
        int panels = std::max(1, static_cast<int>(std::ceil(std::abs(value_of(upper)))));
        return composite_gauss<Scalar>(integrand, Scalar(0.0), upper, quad_points, panels);
    }

    constexpr int max_panels = 20000;
    Scalar total(0.0);
    int quiet = 0;
    for (int k = 0; k < max_panels; ++k) {
        Scalar piece = composite_gauss<Scalar>(integrand, Scalar(double(k)), Scalar(double(k + 1)), quad_points, 1);
        total += piece;
        if (std::abs(value_of(piece)) <= 1e-17 * std::abs(value_of(total))) {
            if (++quiet == 3) return total;
        } else {
            quiet = 0;
        }
    }
    throw DomainError("helmholtz_quad: ray integral from the origin does not converge "
                      "(pressure has a non-vanishing linear part along rays)");
}

template <class Scalar>
Scalar helmholtz_quad(const StatePointT<Scalar>& p, const EosParams& e, int quad_points)
{
    return helmholtz_quad_law(PowerLawPressure(e), p, e.base, quad_points);
}

/// Closed-form H for the power law; H(0, ·) = 0 for both bases.
template <class Scalar>
Scalar helmholtz_closed(const StatePointT<Scalar>& p, const EosParams& e)
{
    using std::pow;
    detail::require_nonnegative(value_of(p.R), value_of(p.Z), "helmholtz_closed");
    if (value_of(p.R) == 0.0) return Scalar(0.0);
    if (e.base == HelmholtzBase::origin)
        return e.a1 * pow(p.R, e.gamma) / (e.gamma - 1.0) + e.a2 * pow(p.Z, e.beta) / (e.beta - 1.0);
    return e.a1 * (pow(p.R, e.gamma) - p.R) / (e.gamma - 1.0) +
           e.a2 * pow(p.Z, e.beta) * (1.0 - pow(p.R, 1.0 - e.beta)) / (e.beta - 1.0);
}

Eigen::Vector2d helmholtz_grad(const StatePoint& p, const EosParams& e);
Eigen::Matrix2d helmholtz_hessian(const StatePoint& p, const EosParams& e);

/// |R ∂_R H + Z ∂_Z H − H − P| with H from quadrature and its gradient from
/// central differences of the quadrature.
double euler_identity_residual(const StatePoint& p, const EosParams& e, int quad_points = 64);

/// Bregman divergence of H between p and the reference point.
double bregman_h(const StatePoint& p, const StatePoint& ref, const EosParams& e);

/// Points uniform in log R ∈ [−2, 2] and slope Z/R ∈ [b_low, b_high].
std::vector<StatePoint> sample_cone(const EosParams& e, int n, std::uint64_t seed = 20240601);

struct ConvexityReport {
    double a_low = 0.0;
    double a_high = 0.0;
    double gamma_coercive = 0.0;
    double hessian_min_eig = 0.0;
    int samples = 0;
    /// Smallest sampled eigenvalue of ∇²(H − a_low P) and ∇²(a_high P − H).
    double lower_gap_min_eig = 0.0;
    double upper_gap_min_eig = 0.0;
    /// a in P ≥ a R^{gamma_coercive} on the cone for R ≥ 1, checked on the samples.
    double coercive_a = 0.0;
    bool pass = false;
    std::vector<std::string> failures;
};

/// Convexity constants of the power law and their sampled verification. Never throws on
/// certification failure; see convexity_constants.
ConvexityReport sample_convexity(const EosParams& e, int sample_n);

/// As sample_convexity, throwing CertificationError when the report does not pass.
ConvexityReport convexity_constants(const EosParams& e, int sample_n);

/// Hessian of a scalar function of (R, Z) by nested forward-mode duals.
template <class F>
Eigen::Matrix2d dual_hessian(F&& f, double R, double Z)
{
    using D2 = Dual<Dual<double>>;
    auto second = [&](int i, int j) {
        D2 r{Dual<double>(R, i == 0 ? 1.0 : 0.0), Dual<double>(j == 0 ? 1.0 : 0.0, 0.0)};
        D2 z{Dual<double>(Z, i == 1 ? 1.0 : 0.0), Dual<double>(j == 1 ? 1.0 : 0.0, 0.0)};
        return f(r, z).eps.eps;
    };
    Eigen::Matrix2d h;
    h(0, 0) = second(0, 0);
    h(1, 1) = second(1, 1);
    h(0, 1) = h(1, 0) = second(0, 1);
    return h;
}

/// Convexity certification of an arbitrary pressure callable `law(R, Z)` (templated on
/// the scalar). H comes from the ray quadrature and all Hessians from nested duals, so no
/// closed form is needed. a_low / a_high are the extreme sampled generalized eigenvalues
/// of (∇²H, ∇²P).
template <class Law>
ConvexityReport certify_pressure_law(const Law& law, const EosParams& cone, int sample_n, int quad_points = 32)
{
    ConvexityReport rep;
    rep.samples = sample_n;
    if (sample_n < 100) throw DomainError("certify_pressure_law: need at least 100 samples");
    const auto points = sample_cone(cone, sample_n);
    double lam_min = INFINITY, lam_max = -INFINITY, h_min = INFINITY;
    std::vector<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>> hess;
    hess.reserve(points.size());
    try {
        for (const auto& p : points) {
            Eigen::Matrix2d hp = dual_hessian([&](auto r, auto z) { return law(r, z); }, p.R, p.Z);
            Eigen::Matrix2d hh = dual_hessian(
                [&](auto r, auto z) {
                    return helmholtz_quad_law(law, StatePointT<decltype(r)>{r, z}, cone.base, quad_points);
                },
                p.R, p.Z);
            h_min = std::min(h_min, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hh).eigenvalues()(0));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> pe(hp);
            if (pe.eigenvalues()(0) <= 0.0) {
                rep.failures.push_back("pressure Hessian is not positive definite on the cone "
                                       "(affine or degenerate pressure)");
                break;
            }
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ge(hh, hp);
            lam_min = std::min(lam_min, ge.eigenvalues()(0));
            lam_max = std::max(lam_max, ge.eigenvalues()(1));
            hess.emplace_back(hh, hp);
        }
    } catch (const DomainError& err) {
        rep.failures.emplace_back(err.what());
    }
    rep.hessian_min_eig = h_min;
    if (!rep.failures.empty()) return rep;

    rep.a_low = lam_min;
    rep.a_high = lam_max;
    rep.gamma_coercive = 1.0 + 1.0 / rep.a_high;
    rep.lower_gap_min_eig = rep.upper_gap_min_eig = INFINITY;
    for (const auto& [hh, hp] : hess) {
        Eigen::Matrix2d lo = hh - rep.a_low * hp;
        Eigen::Matrix2d hi = rep.a_high * hp - hh;
        rep.lower_gap_min_eig = std::min(rep.lower_gap_min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(lo).eigenvalues()(0));
        rep.upper_gap_min_eig = std::min(rep.upper_gap_min_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hi).eigenvalues()(0));
    }
    double coercive = INFINITY;
    for (const auto& p : points)
        if (p.R >= 1.0) coercive = std::min(coercive, law(p.R, p.Z) / std::pow(p.R, rep.gamma_coercive));
    rep.coercive_a = coercive;

    if (!(rep.a_low > 0.0)) rep.failures.push_back("a_low is not positive");
    if (!(rep.hessian_min_eig > 0.0)) rep.failures.push_back("H is not strictly convex on the sampled cone");
    if (!(coercive > 0.0)) rep.failures.push_back("pressure is not coercive on the cone");
    rep.pass = rep.failures.empty();
    return rep;
}

} // namespace bifluid
