#pragma once

#include <array>
#include <vector>

#include "bifluid/eos.hpp"
#include "bifluid/model.hpp"

namespace bifluid {

struct EnergyParts {
    double kinetic = 0.0;    ///< ½∫(R+Z)|u − u_B|²
    double helmholtz = 0.0;  ///< ∫H(R,Z)
    double total() const { return kinetic + helmholtz; }
};

EnergyParts total_energy(const Discretization& disc, const SimState& state, const EosParams& eos);

/// Terms of the approximate energy inequality over one step, time integrals by the
/// trapezoidal rule. The primary residual uses the grouping with separate H(R,Z) outflow
/// and H(R_B,Z_B) inflow boundary integrals; `residual_aux` additionally carries the
/// −∫_Γin E_H(R_B,Z_B | R,Z) u_B·n term (nonnegative).
struct EnergyBudget {
    double kinetic = 0.0;          ///< at the end of the step
    double helmholtz = 0.0;        ///< at the end of the step
    double energy_change = 0.0;    ///< E(t+dt) − E(t)
    double dissipation = 0.0;      ///< ∫∫(2μ+λ)(∂_x u)²
    double outflow_flux = 0.0;     ///< ∫∫_Γout H(R,Z) u_B·n
    double inflow_flux = 0.0;      ///< ∫∫_Γin H(R_B,Z_B) u_B·n
    double eps_dissipation = 0.0;  ///< ε∫∫∇²H[∂_x R, ∂_x Z]
    double inflow_relative = 0.0;  ///< −∫∫_Γin E_H(R_B,Z_B | R,Z) u_B·n  (≥ 0)
    /// −∫[(R+Z)u² + P]∂_x u_B, ∫(R+Z)u u_B ∂_x u_B, ∫(2μ+λ)∂_x u ∂_x u_B, −∫_Γin H(R_B,Z_B) u_B·n
    std::array<double, 4> rhs_terms{};
    double residual = 0.0;      ///< LHS − RHS
    double residual_aux = 0.0;  ///< LHS − RHS with the E_H inflow term on the left
};

struct StepPhysics {
    EosParams eos;
    StressParams stress;
    double epsilon = 0.0;
    double dt = 0.0;
    BoundaryData bc;
};

EnergyBudget energy_inequality_residual(const Discretization& disc, const SimState& old_state,
                                        const SimState& new_state, const StepPhysics& phys);

/// ∫[½(R+Z)|u − u_ref|² + Bregman_H((R,Z) | (r_ref, z_ref))] by midpoint quadrature.
/// The reference must be strictly positive.
double relative_energy(const Grid1D& grid, const NodalSnapshot& state, const NodalSnapshot& ref, const EosParams& eos);

struct RelEnergyRecord {
    double t = 0.0;
    double value = 0.0;
    double gronwall_bound = 0.0;
};

struct GronwallFit {
    double c_fit = 0.0;
    bool pass = false;
    bool identical_start = false;  ///< value(0) ≤ atol, so the series must stay at round-off
};

/// Smallest C ≥ 0 with value(t) ≤ (value(0) + atol) exp(C t); fills `gronwall_bound`.
GronwallFit gronwall_check(std::vector<RelEnergyRecord>& series, double c_max, double atol = 1e-12);

/// m²/r, 0 at (0, 0), +∞ for r = 0 and m ≠ 0.
double kinetic_envelope(double r, double m);

struct DefectProxy {
    double t = 0.0;
    int factor = 0;
    int blocks = 0;
    double min_delta_p = 0.0, max_delta_p = 0.0;
    double min_delta_h = 0.0, max_delta_h = 0.0;
    double min_delta_kinetic = 0.0, max_delta_kinetic = 0.0;
    /// Largest a_low·δp − δh and δh − a_high·δp over blocks with δp > 1e-12 (≤ 1e-8 expected).
    double sandwich_low_violation = -INFINITY;
    double sandwich_high_violation = -INFINITY;
    /// Observed extreme ratios Tr ℜ / 𝔈 over blocks with 𝔈 > 1e-14.
    double trace_ratio_low = INFINITY;
    double trace_ratio_high = -INFINITY;
    /// Largest c_lo·𝔈 − Tr ℜ with c_lo = min{1, 1/a_high}.
    double trace_low_violation = -INFINITY;
    /// Largest Tr ℜ − c_hi·𝔈 with c_hi = max{1, 1/a_low}.
    double trace_high_violation = -INFINITY;
    /// Same with the kinetic-consistent constant max{2, 1/a_low}.
    double trace_high_violation_kinetic = -INFINITY;
    int jensen_violations = 0;  ///< blocks with a delta below −1e-12
};

/// Coarse-graining Jensen gaps of P, H and the kinetic envelope over blocks of k cells.
DefectProxy defect_proxy(const NodalSnapshot& fine, int k, const EosParams& eos, double a_low, double a_high);

/// Pointwise cone margins min(Z − b_low R), min(b_high R − Z).
std::array<double, 2> cone_margins(const Vector& R, const Vector& Z, const EosParams& eos);

} // namespace bifluid
