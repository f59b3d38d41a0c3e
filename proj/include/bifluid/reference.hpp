#pragma once

#include "bifluid/coupler.hpp"

namespace bifluid {

/// Exact constant solution R ≡ Rc, Z ≡ Zc, u ≡ Uc with consistent boundary data.
/// Returns the config for running it; the reference itself is `constant_reference`.
RunConfig uniform_steady(double Rc, double Zc, double Uc, RunConfig cfg);

ReferenceProvider constant_reference(double Rc, double Zc, double Uc);

/// The same run at n_cells·refine cells, n_modes·min(refine, 4) modes and dt/refine²,
/// with a snapshot at every coarse step.
Trajectory fine_reference(const RunConfig& cfg, int refine);

/// Block average over k consecutive cells.
Vector restrict_field(const Vector& fine, int k);

/// Reference provider backed by stored snapshots, restricted to the requested grid.
/// Throws DomainError when no snapshot matches the requested time.
ReferenceProvider trajectory_reference(std::vector<NodalSnapshot> snapshots);

} // namespace bifluid
