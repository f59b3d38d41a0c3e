#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bifluid/eos.hpp"

namespace bifluid::testing {

/// Seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// Closed-cone point with log R uniform in [log_lo, log_hi].
    StatePoint cone_point(const EosParams& e, double log_lo = -2.0, double log_hi = 2.0)
    {
        const double R = std::exp(uniform(log_lo, log_hi));
        return {R, uniform(e.b_low, e.b_high) * R};
    }

    StatePoint quadrant_point(double lo = 0.05, double hi = 5.0) { return {uniform(lo, hi), uniform(lo, hi)}; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline EosParams unit_base(EosParams e = {})
{
    e.base = HelmholtzBase::unit;
    return e;
}

} // namespace bifluid::testing

#include "bifluid/model.hpp"

namespace bifluid::testing {

/// Smooth inflow/outflow configuration used across the coupler tests.
inline RunConfig smooth_config(int n_cells = 64, double dt = 1e-3, double horizon = 0.05)
{
    RunConfig c;
    c.n_cells = n_cells;
    c.n_modes = 8;
    c.transport.dt = dt;
    c.horizon = horizon;
    c.bc.u_b = Expression::parse("0.5 + 0.2*x");
    c.init.r0 = Expression::parse("1 + 0.2*sin(pi*x)");
    c.init.z0 = Expression::parse("1 + 0.1*sin(2*pi*x)");
    c.init.u0 = Expression::parse("0.5 + 0.2*x + 0.3*sin(pi*x)");
    c.init.u0_given = true;
    return c;
}

inline RunConfig steady_config(double U = 0.5)
{
    RunConfig c;
    c.n_cells = 128;
    c.n_modes = 8;
    c.transport.dt = 1e-3;
    c.horizon = 1.0;
    c.bc.u_b = Expression(U);
    c.init.u0 = Expression(U);
    c.init.u0_given = true;
    return c;
}

} // namespace bifluid::testing
