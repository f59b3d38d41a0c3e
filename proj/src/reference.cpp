#include "bifluid/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bifluid/errors.hpp"

namespace bifluid {

RunConfig uniform_steady(double Rc, double Zc, double Uc, RunConfig cfg)
{
    if (!(Rc > 0.0) || !(Zc > 0.0) || !in_cone({Rc, Zc}, cfg.eos, 0.0))
        throw ConfigError("uniform_steady: (Rc, Zc) must be strictly positive and in the cone");
    cfg.bc.u_b = Expression(Uc);
    cfg.bc.r_b = Rc;
    cfg.bc.z_b = Zc;
    cfg.init.r0 = Expression(Rc);
    cfg.init.z0 = Expression(Zc);
    cfg.init.u0 = Expression(Uc);
    cfg.init.u0_given = true;
    cfg.reference.kind = ReferenceKind::uniform_steady;
    cfg.reference.r = Rc;
    cfg.reference.z = Zc;
    cfg.reference.u = Uc;
    return cfg;
}

ReferenceProvider constant_reference(double Rc, double Zc, double Uc)
{
    return [=](double t, const Grid1D& grid) {
        const int n = grid.n_cells;
        return NodalSnapshot{t, Vector::Constant(n, Rc), Vector::Constant(n, Zc), Vector::Constant(n, Uc)};
    };
}

Trajectory fine_reference(const RunConfig& cfg, int refine)
{
    if (refine < 1) throw ConfigError("fine_reference: refine must be >= 1");
    RunConfig fine = cfg;
    fine.n_cells = cfg.n_cells * refine;
    fine.n_modes = cfg.n_modes * std::min(refine, 4);
    fine.transport.dt = cfg.dt() / static_cast<double>(refine * refine);
    fine.every_n_steps = refine * refine;
    fine.reference.kind = ReferenceKind::none;
    return run(fine);
}

Vector restrict_field(const Vector& fine, int k)
{
    if (k < 1 || fine.size() % k != 0) {
        std::ostringstream msg;
        msg << "restrict: factor " << k << " does not divide " << fine.size() << " cells";
        throw DomainError(msg.str());
    }
    const Eigen::Index n = fine.size() / k;
    return fine.reshaped(k, n).colwise().mean().transpose();
}

ReferenceProvider trajectory_reference(std::vector<NodalSnapshot> snapshots)
{
    return [snaps = std::move(snapshots)](double t, const Grid1D& grid) {
        const auto it = std::min_element(snaps.begin(), snaps.end(), [t](const auto& a, const auto& b) {
            return std::abs(a.t - t) < std::abs(b.t - t);
        });
        if (it == snaps.end() || std::abs(it->t - t) > 1e-9 * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "reference trajectory has no snapshot at t = " << t;
            throw DomainError(msg.str());
        }
        const auto fine_n = static_cast<int>(it->R.size());
        if (fine_n % grid.n_cells != 0) throw DomainError("reference grid is not a refinement of the run grid");
        const int k = fine_n / grid.n_cells;
        return NodalSnapshot{t, restrict_field(it->R, k), restrict_field(it->Z, k), restrict_field(it->u, k)};
    };
}

} // namespace bifluid
