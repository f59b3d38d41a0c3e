#include "bifluid/eos.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace bifluid {

const char* to_string(HelmholtzBase base)
{
    return base == HelmholtzBase::origin ? "origin" : "unit";
}

HelmholtzBase parse_helmholtz_base(const std::string& name)
{
    if (name == "origin") return HelmholtzBase::origin;
    if (name == "unit") return HelmholtzBase::unit;
    throw ConfigError("unknown helmholtz base '" + name + "' (expected origin or unit)");
}

std::vector<std::string> EosParams::violations() const
{
    std::vector<std::string> out;
    if (!(a1 > 0.0)) out.emplace_back("eos.a1 must be > 0");
    if (!(a2 > 0.0)) out.emplace_back("eos.a2 must be > 0");
    if (!(gamma > 1.0)) out.emplace_back("eos.gamma must be > 1 (γ > 1)");
    if (!(beta > 1.0)) out.emplace_back("eos.beta must be > 1 (β > 1)");
    if (!(b_low > 0.0)) out.emplace_back("eos.b_low must be > 0");
    if (!(b_high > b_low) || !std::isfinite(b_high)) out.emplace_back("eos.b_high must be finite and > eos.b_low");
    return out;
}

void EosParams::validate() const
{
    auto v = violations();
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid EOS parameters:";
    for (const auto& s : v) msg << ' ' << s << ';';
    throw ConfigError(msg.str());
}

Eigen::Vector2d pressure_grad(const StatePoint& p, const EosParams& e)
{
    detail::require_positive(p.R, p.Z, "pressure_grad");
    return {e.a1 * e.gamma * std::pow(p.R, e.gamma - 1.0), e.a2 * e.beta * std::pow(p.Z, e.beta - 1.0)};
}

Eigen::Matrix2d pressure_hessian(const StatePoint& p, const EosParams& e)
{
    detail::require_positive(p.R, p.Z, "pressure_hessian");
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    h(0, 0) = e.a1 * e.gamma * (e.gamma - 1.0) * std::pow(p.R, e.gamma - 2.0);
    h(1, 1) = e.a2 * e.beta * (e.beta - 1.0) * std::pow(p.Z, e.beta - 2.0);
    return h;
}

Eigen::Vector2d helmholtz_grad(const StatePoint& p, const EosParams& e)
{
    detail::require_positive(p.R, p.Z, "helmholtz_grad");
    const double R = p.R, Z = p.Z, g = e.gamma, b = e.beta;
    if (e.base == HelmholtzBase::origin)
        return {e.a1 * g * std::pow(R, g - 1.0) / (g - 1.0), e.a2 * b * std::pow(Z, b - 1.0) / (b - 1.0)};
    return {e.a1 * (g * std::pow(R, g - 1.0) - 1.0) / (g - 1.0) + e.a2 * std::pow(Z, b) * std::pow(R, -b),
            e.a2 * b * std::pow(Z, b - 1.0) * (1.0 - std::pow(R, 1.0 - b)) / (b - 1.0)};
}

Eigen::Matrix2d helmholtz_hessian(const StatePoint& p, const EosParams& e)
{
    detail::require_positive(p.R, p.Z, "helmholtz_hessian");
    const double R = p.R, Z = p.Z, g = e.gamma, b = e.beta;
    Eigen::Matrix2d h;
    if (e.base == HelmholtzBase::origin) {
        h << e.a1 * g * std::pow(R, g - 2.0), 0.0,
             0.0, e.a2 * b * std::pow(Z, b - 2.0);
        return h;
    }
    const double rz = e.a2 * b * std::pow(Z, b - 1.0) * std::pow(R, -b);
    h << e.a1 * g * std::pow(R, g - 2.0) - e.a2 * b * std::pow(Z, b) * std::pow(R, -b - 1.0), rz,
         rz, e.a2 * b * std::pow(Z, b - 2.0) * (1.0 - std::pow(R, 1.0 - b));
    return h;
}

double euler_identity_residual(const StatePoint& p, const EosParams& e, int quad_points)
{
    detail::require_positive(p.R, p.Z, "euler_identity_residual");
    auto H = [&](double R, double Z) { return helmholtz_quad(StatePoint{R, Z}, e, quad_points); };
    const double hr = 1e-5 * std::max(p.R, 1.0);
    const double hz = 1e-5 * std::max(p.Z, 1.0);
    // keep the stencil inside the positive quadrant
    const double sr = std::min(hr, 0.5 * p.R), sz = std::min(hz, 0.5 * p.Z);
    const double dHdR = (H(p.R + sr, p.Z) - H(p.R - sr, p.Z)) / (2.0 * sr);
    const double dHdZ = (H(p.R, p.Z + sz) - H(p.R, p.Z - sz)) / (2.0 * sz);
    return std::abs(p.R * dHdR + p.Z * dHdZ - H(p.R, p.Z) - pressure(p, e));
}

double bregman_h(const StatePoint& p, const StatePoint& ref, const EosParams& e)
{
    if (!(ref.R > 0.0) || !(ref.Z > 0.0)) throw DomainError("bregman_h: reference state must be strictly positive");
    detail::require_nonnegative(p.R, p.Z, "bregman_h");
    const Eigen::Vector2d g = helmholtz_grad(ref, e);
    return helmholtz_closed(p, e) - g(0) * (p.R - ref.R) - g(1) * (p.Z - ref.Z) - helmholtz_closed(ref, e);
}

std::vector<StatePoint> sample_cone(const EosParams& e, int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_r(-2.0, 2.0);
    std::uniform_real_distribution<double> slope(e.b_low, e.b_high);
    std::vector<StatePoint> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        double R = std::exp(log_r(rng));
        pts.push_back({R, slope(rng) * R});
    }
    return pts;
}

ConvexityReport sample_convexity(const EosParams& e, int sample_n)
{
    if (sample_n < 100) throw DomainError("convexity_constants: sample_n must be >= 100");
    e.validate();

    ConvexityReport rep;
    rep.samples = sample_n;
    // H − a P is, per species, a positive multiple of R^γ (resp. Z^β) for the origin
    // base, so the extreme admissible constants are the per-species ratios.
    rep.a_low = 1.0 / (std::max(e.gamma, e.beta) - 1.0);
    rep.a_high = 1.0 / (std::min(e.gamma, e.beta) - 1.0);
    rep.gamma_coercive = 1.0 + 1.0 / rep.a_high;

    rep.hessian_min_eig = rep.lower_gap_min_eig = rep.upper_gap_min_eig = INFINITY;
    // R ≥ 1 on the cone: P ≥ a1 R^γ + a2 (b_low R)^β ≥ (a1 + a2 b_low^β) R^{min(γ,β)}
    rep.coercive_a = e.a1 + e.a2 * std::pow(e.b_low, e.beta);
    double coercive_gap = INFINITY;
    using Solver = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>;
    for (const auto& p : sample_cone(e, sample_n)) {
        const Eigen::Matrix2d hh = helmholtz_hessian(p, e);
        const Eigen::Matrix2d hp = pressure_hessian(p, e);
        rep.hessian_min_eig = std::min(rep.hessian_min_eig, Solver(hh, Eigen::EigenvaluesOnly).eigenvalues()(0));
        rep.lower_gap_min_eig = std::min(rep.lower_gap_min_eig, Solver(hh - rep.a_low * hp, Eigen::EigenvaluesOnly).eigenvalues()(0));
        rep.upper_gap_min_eig = std::min(rep.upper_gap_min_eig, Solver(rep.a_high * hp - hh, Eigen::EigenvaluesOnly).eigenvalues()(0));
        if (p.R >= 1.0)
            coercive_gap = std::min(coercive_gap, pressure(p, e) / std::pow(p.R, rep.gamma_coercive) - rep.coercive_a);
    }

    if (!(rep.hessian_min_eig > 0.0))
        rep.failures.push_back("H is not strictly convex on the sampled cone (min Hessian eigenvalue " +
                               std::to_string(rep.hessian_min_eig) + ")");
    if (rep.lower_gap_min_eig < -1e-10)
        rep.failures.push_back("H - a_low*P is not convex on the sampled cone");
    if (rep.upper_gap_min_eig < -1e-10)
        rep.failures.push_back("a_high*P - H is not convex on the sampled cone");
    if (coercive_gap < -1e-12 * rep.coercive_a) rep.failures.push_back("pressure coercivity bound fails on the sampled cone");
    rep.pass = rep.failures.empty();
    return rep;
}

ConvexityReport convexity_constants(const EosParams& e, int sample_n)
{
    ConvexityReport rep = sample_convexity(e, sample_n);
    if (!rep.pass) {
        std::string msg = "EOS certification failed:";
        for (const auto& f : rep.failures) msg += " " + f + ";";
        throw CertificationError(msg);
    }
    return rep;
}

} // namespace bifluid
