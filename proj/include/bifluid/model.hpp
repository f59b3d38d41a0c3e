#pragma once

#include <string>
#include <vector>

#include "bifluid/discretization.hpp"
#include "bifluid/eos.hpp"
#include "bifluid/expression.hpp"
#include "bifluid/momentum.hpp"
#include "bifluid/transport.hpp"

namespace bifluid {

struct InitialData {
    Expression r0{1.0};
    Expression z0{1.0};
    /// Initial velocity; defaults to u_B, i.e. zero Galerkin part.
    Expression u0{0.0};
    bool u0_given = false;
};

enum class ReferenceKind { none, uniform_steady, fine_grid };

struct ReferenceSpec {
    ReferenceKind kind = ReferenceKind::none;
    int refine = 4;
    double r = 1.0;  ///< uniform_steady constants
    double z = 1.0;
    double u = 0.0;
};

/// Everything needed for one run; see the README for the config keys.
struct RunConfig {
    int n_cells = 64;
    int n_modes = 8;
    TransportConfig transport;
    double horizon = 0.1;
    StressParams fluid;
    EosParams eos;
    BoundaryData bc;
    InitialData init;
    double picard_tol = 1e-10;
    int picard_max = 20;
    double picard_relaxation = 1.0;
    int every_n_steps = 1;
    std::string output_dir = "out";
    ReferenceSpec reference;
    double gronwall_c_max = 50.0;

    double dt() const { return transport.dt; }
    long n_steps() const;
    /// Every violated invariant (parameters, cone membership of data, step divisibility).
    std::vector<std::string> violations() const;
    /// Throws ConfigError listing all violations.
    void validate() const;
};

/// Grid, Galerkin basis and tabulated lift for one configuration.
struct Discretization {
    Grid1D grid;
    GalerkinBasis basis;
    LiftTable lift;

    explicit Discretization(const RunConfig& cfg);
};

/// Level-I solution at one time: densities on cell centres, velocity as Galerkin
/// coefficients of u − u_B.
struct SimState {
    double t = 0.0;
    Vector R;
    Vector Z;
    Vector v;
};

/// Node values of a state, the common currency of comparisons and file output.
struct NodalSnapshot {
    double t = 0.0;
    Vector R;
    Vector Z;
    Vector u;
};

NodalSnapshot nodal(const Discretization& disc, const SimState& s);

} // namespace bifluid
