#pragma once

#include <string>
#include <vector>

#include "bifluid/discretization.hpp"
#include "bifluid/eos.hpp"
#include "bifluid/transport.hpp"

namespace bifluid {

/// Newtonian stress coefficients; in one dimension 𝕊 = (2μ + λ) ∂_x u.
struct StressParams {
    double mu = 1.0;
    double lambda = 0.0;

    double modulus() const { return 2.0 * mu + lambda; }
    std::vector<std::string> violations() const;
};

Vector stress_1d(const Vector& du_dx, const StressParams& s);

/// Galerkin system of the momentum balance tested against the sine modes.
struct GalerkinSystem {
    Matrix mass;            ///< ∫(R+Z) w_i w_j
    Matrix stiffness;       ///< ∫ w_i' w_j'
    Vector lift_momentum;   ///< ∫(R+Z) u_B w_i
    Vector convection;      ///< ∫(R+Z) u² w_i'
    Vector pressure;        ///< ∫ P(R,Z) w_i'
    Vector viscous;         ///< −∫(2μ+λ) u' w_i'  at the given velocity
    Vector regularization;  ///< −∫ ε ∂_x(R+Z) u' w_i
    Vector lift_viscous;    ///< ∫ u_B' w_i'

    Vector force() const { return convection + pressure + viscous + regularization; }
};

/// Assembles M and the force contributions at densities (R, Z) and velocity
/// u = Σ v_i w_i + u_B. Throws DomainError if R + Z ≤ 0 anywhere.
GalerkinSystem assemble_galerkin_system(const Grid1D& grid, const GalerkinBasis& basis, const Vector& R,
                                        const Vector& Z, const Vector& v, const LiftTable& lift,
                                        const EosParams& eos, const StressParams& stress, double epsilon);

/// ∫(R+Z) u w_i for u = Σ v_i w_i + u_B.
Vector galerkin_momentum(const Grid1D& grid, const GalerkinBasis& basis, const Vector& R, const Vector& Z,
                         const Vector& v, const LiftTable& lift);

/// Backward-difference momentum step
///   M_new v_new + b_new − (M_old v_old + b_old) = dt F,
/// with the viscous part of F implicit in v_new and convection, pressure and the
/// ε-correction evaluated at the Picard iterate `v_iter` and the new densities.
Vector step_momentum(const Grid1D& grid, const GalerkinBasis& basis, const Vector& v_old, const Vector& v_iter,
                     const Vector& R_new, const Vector& Z_new, const Vector& R_old, const Vector& Z_old, double dt,
                     const LiftTable& lift, const EosParams& eos, const StressParams& stress, double epsilon);

} // namespace bifluid
