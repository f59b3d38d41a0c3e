#include "bifluid/momentum.hpp"

#include <cmath>
#include <sstream>

#include "bifluid/errors.hpp"

namespace bifluid {

std::vector<std::string> StressParams::violations() const
{
    std::vector<std::string> out;
    if (!(mu > 0.0)) out.emplace_back("fluid.mu must be > 0");
    if (!(lambda + 2.0 * mu > 0.0)) out.emplace_back("fluid.lambda + 2 fluid.mu must be > 0");
    return out;
}

Vector stress_1d(const Vector& du_dx, const StressParams& s) { return s.modulus() * du_dx; }

namespace {
Vector total_density(const Vector& R, const Vector& Z, const char* op)
{
    Vector rho = R + Z;
    for (Eigen::Index j = 0; j < rho.size(); ++j) {
        if (!(rho(j) > 0.0)) {
            std::ostringstream msg;
            msg << op << ": R + Z = " << rho(j) << " at cell " << j << " (must be > 0)";
            throw DomainError(msg.str());
        }
    }
    return rho;
}
} // namespace

GalerkinSystem assemble_galerkin_system(const Grid1D& grid, const GalerkinBasis& basis, const Vector& R,
                                        const Vector& Z, const Vector& v, const LiftTable& lift,
                                        const EosParams& eos, const StressParams& stress, double epsilon)
{
    const Vector rho = total_density(R, Z, "assemble_galerkin_system");
    const double h = grid.h;
    const Vector u = reconstruct(v, basis) + lift.nodes;
    const Vector du = reconstruct_derivative(v, basis) + lift.dnodes;
    Vector p(grid.n_cells);
    for (int j = 0; j < grid.n_cells; ++j) p(j) = pressure(StatePoint{R(j), Z(j)}, eos);
    const Vector drho = central_difference(rho, grid);

    const auto& W = basis.values;
    const auto& Wd = basis.derivs;
    GalerkinSystem sys;
    sys.mass = weighted_gram(rho, basis, grid);
    sys.stiffness = h * (Wd.transpose() * Wd);
    sys.lift_momentum = h * (W.transpose() * rho.cwiseProduct(lift.nodes));
    sys.convection = h * (Wd.transpose() * rho.cwiseProduct(u.cwiseAbs2()));
    sys.pressure = h * (Wd.transpose() * p);
    sys.viscous = -h * (Wd.transpose() * stress_1d(du, stress));
    sys.regularization = -epsilon * h * (W.transpose() * drho.cwiseProduct(du));
    sys.lift_viscous = h * (Wd.transpose() * lift.dnodes);
    return sys;
}

Vector galerkin_momentum(const Grid1D& grid, const GalerkinBasis& basis, const Vector& R, const Vector& Z,
                         const Vector& v, const LiftTable& lift)
{
    const Vector rho = total_density(R, Z, "galerkin_momentum");
    const Vector u = reconstruct(v, basis) + lift.nodes;
    return grid.h * (basis.values.transpose() * rho.cwiseProduct(u));
}

Vector step_momentum(const Grid1D& grid, const GalerkinBasis& basis, const Vector& v_old, const Vector& v_iter,
                     const Vector& R_new, const Vector& Z_new, const Vector& R_old, const Vector& Z_old, double dt,
                     const LiftTable& lift, const EosParams& eos, const StressParams& stress, double epsilon)
{
    const GalerkinSystem sys = assemble_galerkin_system(grid, basis, R_new, Z_new, v_iter, lift, eos, stress, epsilon);
    const double nu = stress.modulus();

    const Matrix A = sys.mass + (dt * nu) * sys.stiffness;
    const Vector rhs = galerkin_momentum(grid, basis, R_old, Z_old, v_old, lift) - sys.lift_momentum +
                       dt * (sys.convection + sys.pressure + sys.regularization - nu * sys.lift_viscous);

    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) throw NumericalError("step_momentum: Galerkin matrix is not positive definite");
    Vector v_new = llt.solve(rhs);
    if (!v_new.allFinite() || v_new.norm() > 1e6) {
        std::ostringstream msg;
        msg << "step_momentum: velocity coefficients diverged (|v| = " << v_new.norm() << ")";
        throw NumericalError(msg.str());
    }
    return v_new;
}

} // namespace bifluid
