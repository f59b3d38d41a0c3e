#include "bifluid/model.hpp"

#include <cmath>
#include <sstream>

#include "bifluid/errors.hpp"

namespace bifluid {

long RunConfig::n_steps() const { return std::lround(horizon / transport.dt); }

std::vector<std::string> RunConfig::violations() const
{
    std::vector<std::string> out = eos.violations();
    auto append = [&](const std::vector<std::string>& v) { out.insert(out.end(), v.begin(), v.end()); };
    append(transport.violations());
    append(fluid.violations());
    if (n_cells < 4) out.emplace_back("grid.n_cells must be >= 4");
    if (n_modes < 1) out.emplace_back("galerkin.n_modes must be >= 1");
    if (n_cells < 8 * n_modes) out.emplace_back("grid.n_cells must be >= 8 * galerkin.n_modes");
    if (!(horizon > 0.0)) out.emplace_back("time.horizon must be > 0");
    if (horizon > 0.0 && transport.dt > 0.0) {
        const double steps = horizon / transport.dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps || std::round(steps) < 1)
            out.emplace_back("time.horizon must be a positive integer multiple of time.dt");
    }
    if (!(picard_tol > 0.0)) out.emplace_back("picard.tol must be > 0");
    if (picard_max < 1) out.emplace_back("picard.max must be >= 1");
    if (!(picard_relaxation > 0.0 && picard_relaxation <= 1.0)) out.emplace_back("picard.relaxation must lie in (0, 1]");
    if (every_n_steps < 1) out.emplace_back("output.every_n_steps must be >= 1");
    if (reference.kind == ReferenceKind::fine_grid && reference.refine < 1) out.emplace_back("reference.refine must be >= 1");
    if (!(gronwall_c_max >= 0.0)) out.emplace_back("gronwall.c_max must be >= 0");
    if (!eos.violations().empty()) return out;

    // boundary data in the closed cone
    const double cone_tol = 1e-12;
    if (!(bc.r_b >= 0.0 && bc.z_b >= 0.0) || !in_cone({bc.r_b, bc.z_b}, eos, cone_tol * std::max(1.0, bc.r_b)))
        out.emplace_back("boundary densities (bc.r_b, bc.z_b) violate the cone condition b_low R_B <= Z_B <= b_high R_B");
    if (bc.has_inflow() && !(bc.r_b > 0.0 && bc.z_b > 0.0))
        out.emplace_back("inflow boundary densities must be strictly positive");

    // initial data in the closed cone, strictly positive, on the run grid
    if (n_cells >= 4) {
        const Grid1D grid(n_cells);
        for (int j = 0; j < n_cells; ++j) {
            const double x = grid.nodes(j);
            const double R = init.r0(x), Z = init.z0(x);
            if (!(R > 0.0) || !(Z > 0.0)) {
                std::ostringstream msg;
                msg << "initial densities must be strictly positive (x = " << x << ")";
                out.push_back(msg.str());
                break;
            }
            if (!in_cone({R, Z}, eos, cone_tol * R)) {
                std::ostringstream msg;
                msg << "initial data violate the cone condition b_low R0 <= Z0 <= b_high R0 at x = " << x;
                out.push_back(msg.str());
                break;
            }
        }
    }
    if (reference.kind == ReferenceKind::uniform_steady &&
        (!(reference.r > 0.0 && reference.z > 0.0) || !in_cone({reference.r, reference.z}, eos, cone_tol)))
        out.emplace_back("uniform_steady reference constants must be positive and in the cone");
    return out;
}

void RunConfig::validate() const
{
    const auto v = violations();
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& s : v) msg << "\n  - " << s;
    throw ConfigError(msg.str());
}

Discretization::Discretization(const RunConfig& cfg)
    : grid(cfg.n_cells), basis(build_basis(cfg.n_modes, grid)), lift(tabulate_lift(cfg.bc, grid))
{
}

NodalSnapshot nodal(const Discretization& disc, const SimState& s)
{
    return {s.t, s.R, s.Z, reconstruct(s.v, disc.basis) + disc.lift.nodes};
}

} // namespace bifluid
