#include "bifluid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bifluid/errors.hpp"

namespace bifluid {

EnergyParts total_energy(const Discretization& disc, const SimState& state, const EosParams& eos)
{
    const Vector rel = reconstruct(state.v, disc.basis);
    EnergyParts e;
    e.kinetic = 0.5 * disc.grid.integrate((state.R + state.Z).cwiseProduct(rel.cwiseAbs2()));
    Vector h(disc.grid.n_cells);
    for (int j = 0; j < disc.grid.n_cells; ++j) h(j) = helmholtz_closed(StatePoint{state.R(j), state.Z(j)}, eos);
    e.helmholtz = disc.grid.integrate(h);
    return e;
}

namespace {

/// Instantaneous integrands of the energy balance for one state.
struct Rates {
    double dissipation = 0.0;
    double outflow = 0.0;
    double inflow = 0.0;
    double inflow_relative = 0.0;
    double eps = 0.0;
    std::array<double, 3> rhs{};
};

double relative_h(const StatePoint& data, const StatePoint& at, const EosParams& eos)
{
    const Eigen::Vector2d g = helmholtz_grad(at, eos);
    return helmholtz_closed(data, eos) - g(0) * (data.R - at.R) - g(1) * (data.Z - at.Z) - helmholtz_closed(at, eos);
}

Rates rates(const Discretization& disc, const SimState& s, const StepPhysics& phys)
{
    const Grid1D& grid = disc.grid;
    const int n = grid.n_cells;
    const double h = grid.h;
    const double nu = phys.stress.modulus();
    const Vector rho = s.R + s.Z;
    const Vector u = reconstruct(s.v, disc.basis) + disc.lift.nodes;
    const Vector du = reconstruct_derivative(s.v, disc.basis) + disc.lift.dnodes;
    const Vector& ub = disc.lift.nodes;
    const Vector& dub = disc.lift.dnodes;

    Rates r;
    r.dissipation = nu * grid.integrate(du.cwiseAbs2());

    const StatePoint data{phys.bc.r_b, phys.bc.z_b};
    auto end_terms = [&](double un, const StatePoint& trace) {
        if (un < 0.0) {
            r.inflow += helmholtz_closed(data, phys.eos) * un;
            r.inflow_relative -= relative_h(data, trace, phys.eos) * un;
        } else {
            r.outflow += helmholtz_closed(trace, phys.eos) * un;
        }
    };
    end_terms(-phys.bc.u_left(), {s.R(0), s.Z(0)});
    end_terms(phys.bc.u_right(), {s.R(n - 1), s.Z(n - 1)});

    // ε ∫ ∇²H[∂R, ∂Z] with face differences and the Hessian at the face average
    double eps_sum = 0.0;
    for (int f = 1; f < n; ++f) {
        const double dR = s.R(f) - s.R(f - 1), dZ = s.Z(f) - s.Z(f - 1);
        const StatePoint mid{0.5 * (s.R(f) + s.R(f - 1)), 0.5 * (s.Z(f) + s.Z(f - 1))};
        const Eigen::Matrix2d hess = helmholtz_hessian(mid, phys.eos);
        eps_sum += (hess(0, 0) * dR * dR + 2.0 * hess(0, 1) * dR * dZ + hess(1, 1) * dZ * dZ) / h;
    }
    r.eps = phys.epsilon * eps_sum;

    Vector p(n);
    for (int j = 0; j < n; ++j) p(j) = pressure(StatePoint{s.R(j), s.Z(j)}, phys.eos);
    r.rhs[0] = -grid.integrate((rho.cwiseProduct(u.cwiseAbs2()) + p).cwiseProduct(dub));
    r.rhs[1] = grid.integrate(rho.cwiseProduct(u).cwiseProduct(dub).cwiseProduct(ub));
    r.rhs[2] = nu * grid.integrate(du.cwiseProduct(dub));
    return r;
}

} // namespace

EnergyBudget energy_inequality_residual(const Discretization& disc, const SimState& old_state,
                                        const SimState& new_state, const StepPhysics& phys)
{
    const EnergyParts e0 = total_energy(disc, old_state, phys.eos);
    const EnergyParts e1 = total_energy(disc, new_state, phys.eos);
    const Rates r0 = rates(disc, old_state, phys);
    const Rates r1 = rates(disc, new_state, phys);
    const double w = 0.5 * phys.dt;

    EnergyBudget b;
    b.kinetic = e1.kinetic;
    b.helmholtz = e1.helmholtz;
    b.energy_change = e1.total() - e0.total();
    b.dissipation = w * (r0.dissipation + r1.dissipation);
    b.outflow_flux = w * (r0.outflow + r1.outflow);
    b.inflow_flux = w * (r0.inflow + r1.inflow);
    b.eps_dissipation = w * (r0.eps + r1.eps);
    b.inflow_relative = w * (r0.inflow_relative + r1.inflow_relative);
    for (int i = 0; i < 3; ++i) b.rhs_terms[i] = w * (r0.rhs[i] + r1.rhs[i]);
    b.rhs_terms[3] = -b.inflow_flux;

    const double lhs = b.energy_change + b.dissipation + b.outflow_flux + b.eps_dissipation;
    const double rhs = b.rhs_terms[0] + b.rhs_terms[1] + b.rhs_terms[2] + b.rhs_terms[3];
    b.residual = lhs - rhs;
    b.residual_aux = b.residual + b.inflow_relative;
    return b;
}

double relative_energy(const Grid1D& grid, const NodalSnapshot& state, const NodalSnapshot& ref, const EosParams& eos)
{
    const int n = grid.n_cells;
    if (state.R.size() != n || ref.R.size() != n) throw DomainError("relative_energy: fields do not match the grid");
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const StatePoint rp{ref.R(j), ref.Z(j)};
        if (!(rp.R > 0.0) || !(rp.Z > 0.0)) throw DomainError("relative_energy: reference state must be strictly positive");
        const double du = state.u(j) - ref.u(j);
        sum += 0.5 * (state.R(j) + state.Z(j)) * du * du + bregman_h({state.R(j), state.Z(j)}, rp, eos);
    }
    return grid.h * sum;
}

GronwallFit gronwall_check(std::vector<RelEnergyRecord>& series, double c_max, double atol)
{
    GronwallFit fit;
    if (series.empty()) {
        fit.pass = true;
        return fit;
    }
    const double t0 = series.front().t;
    const double base = series.front().value + atol;
    fit.identical_start = series.front().value <= atol;
    double c = 0.0;
    bool stays_small = true;
    for (const auto& rec : series) {
        const double dt = rec.t - t0;
        if (dt > 0.0) c = std::max(c, std::log((rec.value + atol) / base) / dt);
        if (rec.value > 100.0 * atol) stays_small = false;
    }
    fit.c_fit = c;
    for (auto& rec : series) rec.gronwall_bound = base * std::exp(c * (rec.t - t0));
    fit.pass = c <= c_max && (!fit.identical_start || stays_small);
    return fit;
}

double kinetic_envelope(double r, double m)
{
    if (r < 0.0) throw DomainError("kinetic_envelope: density must be nonnegative");
    if (r > 0.0) return m * m / r;
    return m == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

DefectProxy defect_proxy(const NodalSnapshot& fine, int k, const EosParams& eos, double a_low, double a_high)
{
    const auto n = fine.R.size();
    if (k < 1 || n % k != 0) throw DomainError("defect_proxy: block size must divide the number of cells");
    DefectProxy d;
    d.t = fine.t;
    d.factor = k;
    d.blocks = static_cast<int>(n / k);
    d.min_delta_p = d.min_delta_h = d.min_delta_kinetic = INFINITY;
    d.max_delta_p = d.max_delta_h = d.max_delta_kinetic = -INFINITY;
    const double c_lo = std::min(1.0, 1.0 / a_high);
    const double c_hi = std::max(1.0, 1.0 / a_low);
    const double c_hi_kin = std::max(2.0, 1.0 / a_low);

    for (int b = 0; b < d.blocks; ++b) {
        double sR = 0, sZ = 0, sM = 0, sP = 0, sH = 0, sK = 0;
        for (int i = b * k; i < (b + 1) * k; ++i) {
            const StatePoint p{fine.R(i), fine.Z(i)};
            const double rho = p.R + p.Z;
            const double m = rho * fine.u(i);
            sR += p.R;
            sZ += p.Z;
            sM += m;
            sP += pressure(p, eos);
            sH += helmholtz_closed(p, eos);
            sK += kinetic_envelope(rho, m);
        }
        const StatePoint avg{sR / k, sZ / k};
        const double dp = sP / k - pressure(avg, eos);
        const double dh = sH / k - helmholtz_closed(avg, eos);
        const double dk = sK / k - kinetic_envelope(avg.R + avg.Z, sM / k);

        d.min_delta_p = std::min(d.min_delta_p, dp);
        d.max_delta_p = std::max(d.max_delta_p, dp);
        d.min_delta_h = std::min(d.min_delta_h, dh);
        d.max_delta_h = std::max(d.max_delta_h, dh);
        d.min_delta_kinetic = std::min(d.min_delta_kinetic, dk);
        d.max_delta_kinetic = std::max(d.max_delta_kinetic, dk);
        if (dp < -1e-12 || dh < -1e-12 || dk < -1e-12) ++d.jensen_violations;

        if (dp > 1e-12) {
            d.sandwich_low_violation = std::max(d.sandwich_low_violation, a_low * dp - dh);
            d.sandwich_high_violation = std::max(d.sandwich_high_violation, dh - a_high * dp);
        }
        const double energy = dh + 0.5 * dk;
        const double trace = dp + dk;
        if (energy > 1e-14) {
            d.trace_ratio_low = std::min(d.trace_ratio_low, trace / energy);
            d.trace_ratio_high = std::max(d.trace_ratio_high, trace / energy);
        }
        d.trace_low_violation = std::max(d.trace_low_violation, c_lo * energy - trace);
        d.trace_high_violation = std::max(d.trace_high_violation, trace - c_hi * energy);
        d.trace_high_violation_kinetic = std::max(d.trace_high_violation_kinetic, trace - c_hi_kin * energy);
    }
    return d;
}

std::array<double, 2> cone_margins(const Vector& R, const Vector& Z, const EosParams& eos)
{
    return {(Z - eos.b_low * R).minCoeff(), (eos.b_high * R - Z).minCoeff()};
}

} // namespace bifluid
