#include "bifluid/coupler.hpp"

#include <cmath>
#include <sstream>

#include "bifluid/errors.hpp"
#include "bifluid/reference.hpp"

namespace bifluid {

namespace {

constexpr double cone_tol = 1e-8;

void check_state(const SimState& s, const RunConfig& cfg)
{
    auto fail = [&](const std::string& what, int j) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " at t = " << s.t;
        if (j >= 0) msg << ", cell " << j << " (R = " << s.R(j) << ", Z = " << s.Z(j) << ")";
        throw InvariantViolation(msg.str());
    };
    if (!s.v.allFinite()) fail("non-finite velocity coefficients", -1);
    for (int j = 0; j < s.R.size(); ++j) {
        const double R = s.R(j), Z = s.Z(j);
        if (!std::isfinite(R) || !std::isfinite(Z)) fail("non-finite density", j);
        if (!(R > 0.0) || !(Z > 0.0)) fail("density positivity violated", j);
        if (Z - cfg.eos.b_low * R < -cone_tol || cfg.eos.b_high * R - Z < -cone_tol) fail("cone condition violated", j);
    }
}

StepRecord base_record(const Discretization& disc, const SimState& s, const EosParams& eos)
{
    StepRecord rec;
    rec.t = s.t;
    rec.mass_R = disc.grid.integrate(s.R);
    rec.mass_Z = disc.grid.integrate(s.Z);
    const EnergyParts e = total_energy(disc, s, eos);
    rec.kinetic = e.kinetic;
    rec.helmholtz = e.helmholtz;
    rec.min_R = s.R.minCoeff();
    rec.max_R = s.R.maxCoeff();
    rec.min_Z = s.Z.minCoeff();
    rec.max_Z = s.Z.maxCoeff();
    const auto margins = cone_margins(s.R, s.Z, eos);
    rec.cone_margin_low = margins[0];
    rec.cone_margin_high = margins[1];
    return rec;
}

} // namespace

SimState init_state(const RunConfig& cfg, const Discretization& disc)
{
    cfg.validate();
    const int n = disc.grid.n_cells;
    SimState s;
    s.R.resize(n);
    s.Z.resize(n);
    for (int j = 0; j < n; ++j) {
        s.R(j) = cfg.init.r0(disc.grid.nodes(j));
        s.Z(j) = cfg.init.z0(disc.grid.nodes(j));
    }
    if (cfg.init.u0_given) {
        Vector rel(n);
        for (int j = 0; j < n; ++j) rel(j) = cfg.init.u0(disc.grid.nodes(j)) - disc.lift.nodes(j);
        s.v = project(rel, disc.basis, disc.grid);
    } else {
        s.v = Vector::Zero(cfg.n_modes);
    }
    return s;
}

PicardResult picard_step(const SimState& state, const RunConfig& cfg, const Discretization& disc)
{
    const double dt = cfg.dt();
    const double omega = cfg.picard_relaxation;
    PicardResult out;
    Vector v = state.v;
    for (int k = 1; k <= cfg.picard_max; ++k) {
        const Vector u_faces = reconstruct_faces(v, disc.basis) + disc.lift.faces;
        const TransportResult tr = step_transport(disc.grid, state.R, u_faces, cfg.transport, cfg.bc, Species::R);
        const TransportResult tz = step_transport(disc.grid, state.Z, u_faces, cfg.transport, cfg.bc, Species::Z);
        const Vector v_hat = step_momentum(disc.grid, disc.basis, state.v, v, tr.r, tz.r, state.R, state.Z, dt,
                                           disc.lift, cfg.eos, cfg.fluid, cfg.transport.epsilon);
        const Vector v_next = v + omega * (v_hat - v);
        const double res = (v_next - v).norm();
        out.residuals.push_back(res);
        v = v_next;
        if (res < cfg.picard_tol) {
            out.state = SimState{state.t + dt, tr.r, tz.r, v};
            out.iterations = k;
            out.u_faces = u_faces;
            out.m_matrix = tr.m_matrix && tz.m_matrix;
            return out;
        }
    }
    std::ostringstream msg;
    msg.precision(6);
    msg << "Picard iteration did not converge within " << cfg.picard_max << " iterations at t = " << state.t + dt
        << " (residuals:";
    for (double r : out.residuals) msg << ' ' << r;
    msg << "); reduce time.dt";
    throw NumericalError(msg.str());
}

Trajectory run(const RunConfig& cfg, const ReferenceProvider& reference)
{
    cfg.validate();
    const Discretization disc(cfg);
    const StepPhysics phys{cfg.eos, cfg.fluid, cfg.transport.epsilon, cfg.dt(), cfg.bc};

    Trajectory traj;
    traj.cfg = cfg;
    traj.has_reference = static_cast<bool>(reference);

    SimState s = init_state(cfg, disc);
    check_state(s, cfg);
    ExtremumMonitor mon_R(disc.grid, cfg.bc, Species::R, s.R, cfg.horizon);
    ExtremumMonitor mon_Z(disc.grid, cfg.bc, Species::Z, s.Z, cfg.horizon);
    mon_R.observe(0.0, s.R);
    mon_Z.observe(0.0, s.Z);

    auto rel = [&](const SimState& st) {
        if (!reference) return std::numeric_limits<double>::quiet_NaN();
        return relative_energy(disc.grid, nodal(disc, st), reference(st.t, disc.grid), cfg.eos);
    };

    StepRecord first = base_record(disc, s, cfg.eos);
    first.rel_energy = rel(s);
    traj.records.push_back(first);
    traj.snapshots.push_back(nodal(disc, s));

    const long steps = cfg.n_steps();
    double dissipation_cum = 0.0;
    for (long i = 1; i <= steps; ++i) {
        PicardResult pr;
        try {
            pr = picard_step(s, cfg, disc);
        } catch (const DomainError& e) {
            std::ostringstream msg;
            msg << e.what() << " (step ending at t = " << s.t + cfg.dt() << ")";
            throw NumericalError(msg.str());
        }
        pr.state.t = static_cast<double>(i) * cfg.dt();
        check_state(pr.state, cfg);

        const EnergyBudget b = energy_inequality_residual(disc, s, pr.state, phys);
        dissipation_cum += b.dissipation;

        StepRecord rec = base_record(disc, pr.state, cfg.eos);
        rec.dissipation_cum = dissipation_cum;
        rec.residual_E7 = b.residual;
        rec.residual_E7_aux = b.residual_aux;
        rec.picard_iters = pr.iterations;
        rec.rel_energy = rel(pr.state);
        rec.energy_change = b.energy_change;
        rec.dissipation = b.dissipation;
        rec.eps_dissipation = b.eps_dissipation;
        rec.mass_residual_R = mass_budget(disc.grid, s.R, pr.state.R, pr.u_faces, cfg.transport, cfg.bc, Species::R);
        rec.mass_residual_Z = mass_budget(disc.grid, s.Z, pr.state.Z, pr.u_faces, cfg.transport, cfg.bc, Species::Z);
        rec.m_matrix = pr.m_matrix;
        rec.picard_residuals = pr.residuals;

        const Vector du_nodes = reconstruct_derivative(pr.state.v, disc.basis) + disc.lift.dnodes;
        const Vector du_faces = reconstruct_face_derivative(pr.state.v, disc.basis) + disc.lift.dfaces;
        rec.div_sup = divergence_sup(disc.grid, du_nodes, du_faces, pr.u_faces);
        mon_R.observe_divergence(rec.div_sup);
        mon_Z.observe_divergence(rec.div_sup);
        mon_R.observe(pr.state.t, pr.state.R);
        mon_Z.observe(pr.state.t, pr.state.Z);

        for (double x : {rec.kinetic, rec.helmholtz, rec.dissipation_cum, rec.residual_E7, rec.residual_E7_aux})
            if (!std::isfinite(x)) {
                std::ostringstream msg;
                msg << "non-finite diagnostic at t = " << pr.state.t;
                throw InvariantViolation(msg.str());
            }
        traj.records.push_back(std::move(rec));

        s = std::move(pr.state);
        if (i % cfg.every_n_steps == 0 || i == steps) traj.snapshots.push_back(nodal(disc, s));
    }

    traj.extremum_R = mon_R.report();
    traj.extremum_Z = mon_Z.report();
    if (reference) {
        std::vector<RelEnergyRecord> series;
        for (const auto& r : traj.records) series.push_back({r.t, r.rel_energy, 0.0});
        traj.gronwall = gronwall_check(series, cfg.gronwall_c_max);
    }
    return traj;
}

Trajectory run_with_configured_reference(const RunConfig& cfg)
{
    switch (cfg.reference.kind) {
    case ReferenceKind::uniform_steady:
        return run(cfg, constant_reference(cfg.reference.r, cfg.reference.z, cfg.reference.u));
    case ReferenceKind::fine_grid: {
        Trajectory fine = fine_reference(cfg, cfg.reference.refine);
        return run(cfg, trajectory_reference(std::move(fine.snapshots)));
    }
    case ReferenceKind::none: break;
    }
    return run(cfg);
}

} // namespace bifluid
