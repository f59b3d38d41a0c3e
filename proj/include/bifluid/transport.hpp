#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bifluid/discretization.hpp"
#include "bifluid/expression.hpp"

namespace bifluid {

enum class Species { R, Z };

/// Boundary/extension velocity u_B(x) on [0, 1] and the inflow densities.
///
/// x = 0 is an inflow point iff u_B(0) > 0 (outer normal −1); x = 1 iff u_B(1) < 0.
struct BoundaryData {
    Expression u_b{0.0};
    double r_b = 1.0;
    double z_b = 1.0;

    double u_left() const { return u_b(0.0); }
    double u_right() const { return u_b(1.0); }
    bool inflow_left() const { return u_left() > 0.0; }
    bool inflow_right() const { return u_right() < 0.0; }
    bool has_inflow() const { return inflow_left() || inflow_right(); }
    double density(Species s) const { return s == Species::R ? r_b : z_b; }
};

/// u_B and its derivative tabulated on a grid.
struct LiftTable {
    Vector nodes;
    Vector dnodes;
    Vector faces;
    Vector dfaces;
    double sup_abs = 0.0;
};
LiftTable tabulate_lift(const BoundaryData& bc, const Grid1D& grid);

struct TransportConfig {
    double epsilon = 1e-2;
    double dt = 1e-3;
    double theta = 1.0;

    std::vector<std::string> violations() const;
};

struct TransportResult {
    Vector r;
    /// Implicit matrix has a nonpositive off-diagonal sign pattern (cell Péclet ≤ 1).
    bool m_matrix = true;
    /// dt·max|u|/h > 1 with an explicit part (theta < 1).
    bool cfl_warning = false;
};

/// One θ-step of ∂_t r + ∂_x(r u) = ε ∂_xx r in conservative flux form. Interior faces use
/// central advective fluxes plus the ε-diffusive flux. Eliminating the diffusive flux with
/// the Robin condition ε ∂_x r·n + (r_B − r)[u_B·n]^− = 0 leaves the boundary flux
/// u_B r_B at an inflow end and u_B r (boundary cell value) at an outflow end.
///
/// `u_faces` is the full velocity at the n_cells + 1 faces; its end values are u_B(0), u_B(1).
TransportResult step_transport(const Grid1D& grid, const Vector& r, const Vector& u_faces,
                               const TransportConfig& cfg, const BoundaryData& bc, Species which);

/// Residual of the φ ≡ 1 balance |∫(r_new − r_old) + dt Σ_∂Ω [r u_B·n − (r − r_B)[u_B·n]^−]|,
/// boundary terms θ-weighted like the step.
double mass_budget(const Grid1D& grid, const Vector& r_old, const Vector& r_new, const Vector& u_faces,
                   const TransportConfig& cfg, const BoundaryData& bc, Species which);

struct ExtremumViolation {
    double t = 0.0;
    double x = 0.0;
    double value = 0.0;
    bool upper = true;
};

struct ExtremumReport {
    double M = 0.0;                ///< max{max r0, max_Γin r_B, sup|u_B|}
    double m = 0.0;                ///< min{min r0, min_Γin r_B}
    double div_sup = 0.0;          ///< sup |∂_x u| over the trajectory
    double horizon = 0.0;
    double tol = 0.0;              ///< 1e-6 + 10 h²
    double upper_bound = 0.0;      ///< M exp(T div_sup)
    double lower_bound = 0.0;      ///< m exp(−T div_sup)
    double observed_max = -INFINITY;
    double observed_min = INFINITY;
    bool upper_ok = true;
    bool lower_ok = true;
    /// The upper bound holds, but only because sup|u_B| enlarges M.
    bool needs_ub_term = false;
    std::optional<ExtremumViolation> first_violation;

    bool ok() const { return upper_ok && lower_ok; }
};

/// Streaming form of the max/min principle check: feed every sampled density field and the
/// per-step sup |∂_x u|, then ask for the report.
class ExtremumMonitor {
public:
    ExtremumMonitor(const Grid1D& grid, const BoundaryData& bc, Species which, const Vector& r0, double horizon);

    void observe(double t, const Vector& r);
    void observe_divergence(double div_sup);
    ExtremumReport report() const;

private:
    struct Sample {
        double t;
        double max, x_max;
        double min, x_min;
    };
    const Grid1D* grid_;
    double m_with_ub_ = 0.0;
    double m_without_ub_ = 0.0;
    double m_low_ = 0.0;
    double horizon_ = 0.0;
    double div_sup_ = 0.0;
    std::vector<Sample> samples_;
};

/// Batch form over stored trajectories.
ExtremumReport extremum_bounds(const Grid1D& grid, const std::vector<double>& times,
                               const std::vector<Vector>& r_trajectory, const std::vector<double>& div_u_sup,
                               const BoundaryData& bc, Species which, const Vector& r0, double horizon);

/// sup |∂_x u| from the analytic derivative at nodes and faces and the face differences.
double divergence_sup(const Grid1D& grid, const Vector& du_nodes, const Vector& du_faces, const Vector& u_faces);

/// Thomas algorithm for a tridiagonal system; lower(0) and upper(n−1) are ignored.
/// Throws NumericalError on a vanishing pivot.
Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper, const Vector& rhs);

} // namespace bifluid
