#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "bifluid/diagnostics.hpp"
#include "bifluid/model.hpp"

namespace bifluid {

/// One row of the per-step trace.
struct StepRecord {
    double t = 0.0;
    double mass_R = 0.0;
    double mass_Z = 0.0;
    double kinetic = 0.0;
    double helmholtz = 0.0;
    double dissipation_cum = 0.0;
    double residual_E7 = 0.0;
    double residual_E7_aux = 0.0;
    double min_R = 0.0, max_R = 0.0;
    double min_Z = 0.0, max_Z = 0.0;
    double cone_margin_low = 0.0;
    double cone_margin_high = 0.0;
    int picard_iters = 0;
    double rel_energy = std::numeric_limits<double>::quiet_NaN();  ///< NaN without a reference

    // not written to the trace
    double energy_change = 0.0;
    double dissipation = 0.0;
    double eps_dissipation = 0.0;
    double mass_residual_R = 0.0;
    double mass_residual_Z = 0.0;
    double div_sup = 0.0;
    bool m_matrix = true;
    std::vector<double> picard_residuals;
};

struct PicardResult {
    SimState state;
    int iterations = 0;
    std::vector<double> residuals;
    Vector u_faces;  ///< transporting velocity of the accepted iterate
    bool m_matrix = true;
};

/// Nodal reference state at time t on the run grid.
using ReferenceProvider = std::function<NodalSnapshot(double t, const Grid1D& grid)>;

struct Trajectory {
    RunConfig cfg;
    std::vector<NodalSnapshot> snapshots;  ///< t = 0, every `every_n_steps` steps, and the final time
    std::vector<StepRecord> records;       ///< t = 0 and every step
    ExtremumReport extremum_R;
    ExtremumReport extremum_Z;
    bool has_reference = false;
    GronwallFit gronwall;
};

SimState init_state(const RunConfig& cfg, const Discretization& disc);

/// Advances one step by the fixed-point iteration transport(u^k) → momentum → u^{k+1}.
/// Throws NumericalError carrying the residual history if picard_max is exhausted.
PicardResult picard_step(const SimState& state, const RunConfig& cfg, const Discretization& disc);

/// Marches from t = 0 to the horizon with per-step diagnostics. A reference, when given,
/// fills the rel_energy column and the Gronwall fit.
Trajectory run(const RunConfig& cfg, const ReferenceProvider& reference = nullptr);

/// Runs with the reference named in cfg.reference (none, uniform_steady or fine_grid).
Trajectory run_with_configured_reference(const RunConfig& cfg);

} // namespace bifluid
