#include "bifluid/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bifluid/errors.hpp"

namespace bifluid {

LiftTable tabulate_lift(const BoundaryData& bc, const Grid1D& grid)
{
    LiftTable t;
    const int n = grid.n_cells;
    t.nodes.resize(n);
    t.dnodes.resize(n);
    t.faces.resize(n + 1);
    t.dfaces.resize(n + 1);
    for (int j = 0; j < n; ++j) {
        auto d = bc.u_b(Dual<double>(grid.nodes(j), 1.0));
        t.nodes(j) = d.val;
        t.dnodes(j) = d.eps;
    }
    for (int j = 0; j <= n; ++j) {
        auto d = bc.u_b(Dual<double>(grid.faces(j), 1.0));
        t.faces(j) = d.val;
        t.dfaces(j) = d.eps;
    }
    t.sup_abs = std::max(t.nodes.cwiseAbs().maxCoeff(), t.faces.cwiseAbs().maxCoeff());
    return t;
}

std::vector<std::string> TransportConfig::violations() const
{
    std::vector<std::string> out;
    if (!(epsilon > 0.0)) out.emplace_back("transport.epsilon must be > 0");
    if (!(dt > 0.0)) out.emplace_back("time.dt must be > 0");
    if (!(theta >= 0.5 && theta <= 1.0)) out.emplace_back("transport.theta must lie in [1/2, 1]");
    return out;
}

Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper, const Vector& rhs)
{
    const Eigen::Index n = diag.size();
    Vector c(n), x(n);
    double pivot = diag(0);
    double min_pivot = std::abs(pivot);
    auto check = [&](double p, Eigen::Index row) {
        min_pivot = std::min(min_pivot, std::abs(p));
        if (!(std::abs(p) > 1e-300) || !std::isfinite(p)) {
            double dominance = INFINITY;
            for (Eigen::Index i = 0; i < n; ++i) {
                double off = (i > 0 ? std::abs(lower(i)) : 0.0) + (i + 1 < n ? std::abs(upper(i)) : 0.0);
                if (off > 0.0) dominance = std::min(dominance, std::abs(diag(i)) / off);
            }
            std::ostringstream msg;
            msg << "tridiagonal solve: singular pivot at row " << row << " (min |pivot| " << min_pivot
                << ", min diagonal dominance ratio " << dominance << ")";
            throw NumericalError(msg.str());
        }
    };
    check(pivot, 0);
    c(0) = upper(0) / pivot;
    x(0) = rhs(0) / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = diag(i) - lower(i) * c(i - 1);
        check(pivot, i);
        c(i) = i + 1 < n ? upper(i) / pivot : 0.0;
        x(i) = (rhs(i) - lower(i) * x(i - 1)) / pivot;
    }
    for (Eigen::Index i = n - 1; i > 0; --i) x(i - 1) -= c(i - 1) * x(i);
    return x;
}

namespace {

/// G(r)_j = (F_{j+1} − F_j)/h = lower_j r_{j−1} + diag_j r_j + upper_j r_{j+1} + source_j.
struct FluxOperator {
    Vector lower, diag, upper, source;

    Vector apply(const Vector& r) const
    {
        const Eigen::Index n = r.size();
        Vector g = diag.cwiseProduct(r) + source;
        g.tail(n - 1) += lower.tail(n - 1).cwiseProduct(r.head(n - 1));
        g.head(n - 1) += upper.head(n - 1).cwiseProduct(r.tail(n - 1));
        return g;
    }
};

FluxOperator assemble_flux(const Grid1D& grid, const Vector& u, double eps, double r_boundary, const BoundaryData& bc)
{
    const int n = grid.n_cells;
    const double h = grid.h;
    // face f flux F_f = a_f r_{f-1} + b_f r_f (+ s_f at the two ends)
    Vector a(n + 1), b(n + 1);
    for (int f = 1; f < n; ++f) {
        a(f) = 0.5 * u(f) + eps / h;
        b(f) = 0.5 * u(f) - eps / h;
    }
    double s0 = 0.0, sN = 0.0;
    a(0) = 0.0;
    b(n) = 0.0;
    if (bc.inflow_left()) {
        b(0) = 0.0;
        s0 = u(0) * r_boundary;
    } else {
        b(0) = u(0);
    }
    if (bc.inflow_right()) {
        a(n) = 0.0;
        sN = u(n) * r_boundary;
    } else {
        a(n) = u(n);
    }

    FluxOperator op{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
    for (int j = 0; j < n; ++j) {
        op.lower(j) = j > 0 ? -a(j) / h : 0.0;
        op.diag(j) = (a(j + 1) - b(j)) / h;
        op.upper(j) = j + 1 < n ? b(j + 1) / h : 0.0;
    }
    op.source(0) -= s0 / h;
    op.source(n - 1) += sN / h;
    return op;
}

void check_velocity(const Grid1D& grid, const Vector& u_faces, const BoundaryData& bc)
{
    if (u_faces.size() != grid.n_cells + 1)
        throw DomainError("transport: velocity must be given at the n_cells + 1 faces");
    if (u_faces(0) != bc.u_left() || u_faces(grid.n_cells) != bc.u_right())
        throw DomainError("transport: velocity end values must equal u_B at the boundary");
}

} // namespace

TransportResult step_transport(const Grid1D& grid, const Vector& r, const Vector& u_faces,
                               const TransportConfig& cfg, const BoundaryData& bc, Species which)
{
    check_velocity(grid, u_faces, bc);
    if (r.size() != grid.n_cells) throw DomainError("transport: density size does not match grid");

    const FluxOperator op = assemble_flux(grid, u_faces, cfg.epsilon, bc.density(which), bc);
    const double dt = cfg.dt, th = cfg.theta;

    Vector rhs = r;
    if (th < 1.0) rhs -= dt * (1.0 - th) * op.apply(r);
    else rhs -= dt * op.source;
    if (th < 1.0) rhs -= dt * th * op.source;

    const Vector lower = dt * th * op.lower;
    const Vector diag = Vector::Ones(grid.n_cells) + dt * th * op.diag;
    const Vector upper = dt * th * op.upper;

    TransportResult out;
    out.r = solve_tridiagonal(lower, diag, upper, rhs);
    for (int j = 0; j < grid.n_cells; ++j) {
        if ((j > 0 && lower(j) > 0.0) || (j + 1 < grid.n_cells && upper(j) > 0.0) || !(diag(j) > 0.0)) {
            out.m_matrix = false;
            break;
        }
    }
    out.cfl_warning = th < 1.0 && dt * u_faces.cwiseAbs().maxCoeff() / grid.h > 1.0;
    return out;
}

double mass_budget(const Grid1D& grid, const Vector& r_old, const Vector& r_new, const Vector& u_faces,
                   const TransportConfig& cfg, const BoundaryData& bc, Species which)
{
    if (r_old.size() != r_new.size() || r_old.size() != grid.n_cells)
        throw DomainError("mass_budget: fields must live on the same grid");
    const int n = grid.n_cells;
    const double r_b = bc.density(which);
    auto neg = [](double a) { return std::min(a, 0.0); };
    // outward normal velocity u_B·n at x = 0 (n = −1) and x = 1 (n = +1)
    const double un_left = -u_faces(0), un_right = u_faces(n);
    auto boundary = [&](const Vector& r) {
        const double left = r(0) * un_left - (r(0) - r_b) * neg(un_left);
        const double right = r(n - 1) * un_right - (r(n - 1) - r_b) * neg(un_right);
        return left + right;
    };
    const double outflow = cfg.theta * boundary(r_new) + (1.0 - cfg.theta) * boundary(r_old);
    return std::abs(grid.integrate(r_new - r_old) + cfg.dt * outflow);
}

double divergence_sup(const Grid1D& grid, const Vector& du_nodes, const Vector& du_faces, const Vector& u_faces)
{
    double s = std::max(du_nodes.cwiseAbs().maxCoeff(), du_faces.cwiseAbs().maxCoeff());
    const int n = grid.n_cells;
    for (int j = 0; j < n; ++j) s = std::max(s, std::abs(u_faces(j + 1) - u_faces(j)) / grid.h);
    return s;
}

ExtremumMonitor::ExtremumMonitor(const Grid1D& grid, const BoundaryData& bc, Species which, const Vector& r0,
                                 double horizon)
    : grid_(&grid), horizon_(horizon)
{
    double hi = r0.maxCoeff();
    double lo = r0.minCoeff();
    if (bc.has_inflow()) {
        hi = std::max(hi, bc.density(which));
        lo = std::min(lo, bc.density(which));
    }
    m_without_ub_ = hi;
    m_with_ub_ = std::max(hi, tabulate_lift(bc, grid).sup_abs);
    m_low_ = lo;
}

void ExtremumMonitor::observe(double t, const Vector& r)
{
    Eigen::Index imax = 0, imin = 0;
    const double vmax = r.maxCoeff(&imax);
    const double vmin = r.minCoeff(&imin);
    samples_.push_back({t, vmax, grid_->nodes(imax), vmin, grid_->nodes(imin)});
}

void ExtremumMonitor::observe_divergence(double div_sup) { div_sup_ = std::max(div_sup_, div_sup); }

ExtremumReport ExtremumMonitor::report() const
{
    ExtremumReport rep;
    rep.M = m_with_ub_;
    rep.m = m_low_;
    rep.div_sup = div_sup_;
    rep.horizon = horizon_;
    rep.tol = 1e-6 + 10.0 * grid_->h * grid_->h;
    const double growth = std::exp(horizon_ * div_sup_);
    rep.upper_bound = rep.M * growth;
    rep.lower_bound = rep.m / growth;
    for (const auto& s : samples_) {
        rep.observed_max = std::max(rep.observed_max, s.max);
        rep.observed_min = std::min(rep.observed_min, s.min);
        const bool above = s.max > rep.upper_bound * (1.0 + rep.tol);
        const bool below = s.min < rep.lower_bound * (1.0 - rep.tol);
        if (above) rep.upper_ok = false;
        if (below) rep.lower_ok = false;
        if (!rep.first_violation && (above || below))
            rep.first_violation = above ? ExtremumViolation{s.t, s.x_max, s.max, true}
                                        : ExtremumViolation{s.t, s.x_min, s.min, false};
    }
    rep.needs_ub_term = rep.upper_ok && rep.observed_max > m_without_ub_ * growth * (1.0 + rep.tol);
    return rep;
}

ExtremumReport extremum_bounds(const Grid1D& grid, const std::vector<double>& times,
                               const std::vector<Vector>& r_trajectory, const std::vector<double>& div_u_sup,
                               const BoundaryData& bc, Species which, const Vector& r0, double horizon)
{
    if (times.size() != r_trajectory.size()) throw DomainError("extremum_bounds: times and fields differ in length");
    ExtremumMonitor mon(grid, bc, which, r0, horizon);
    for (double d : div_u_sup) mon.observe_divergence(d);
    for (std::size_t k = 0; k < times.size(); ++k) mon.observe(times[k], r_trajectory[k]);
    return mon.report();
}

} // namespace bifluid
