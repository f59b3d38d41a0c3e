#pragma once

#include <Eigen/Dense>

namespace bifluid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Uniform cell-centred grid on Ω = (0, 1).
struct Grid1D {
    int n_cells = 0;
    double h = 0.0;
    Vector nodes;  ///< cell centres (i + 1/2) h
    Vector faces;  ///< cell faces i h, i = 0..n_cells

    Grid1D() = default;
    explicit Grid1D(int n);

    /// Midpoint rule ∫_Ω f dx.
    double integrate(const Vector& f) const { return h * f.sum(); }
};

/// Sine modes w_i(x) = √2 sin(iπx), i = 1..n_modes, tabulated analytically at the cell
/// centres and at the faces. Face values at x = 0 and x = 1 are exactly zero.
struct GalerkinBasis {
    int n_modes = 0;
    Matrix values;       ///< n_cells × n_modes
    Matrix derivs;       ///< n_cells × n_modes
    Matrix face_values;  ///< (n_cells + 1) × n_modes
    Matrix face_derivs;  ///< (n_cells + 1) × n_modes
};

/// Throws DomainError when n_cells < 8·n_modes.
GalerkinBasis build_basis(int n_modes, const Grid1D& grid);

/// Coefficients c_i = Σ_j h field(x_j) w_i(x_j).
Vector project(const Vector& field, const GalerkinBasis& basis, const Grid1D& grid);

/// Σ c_i w_i at the cell centres.
Vector reconstruct(const Vector& c, const GalerkinBasis& basis);
Vector reconstruct_derivative(const Vector& c, const GalerkinBasis& basis);
Vector reconstruct_faces(const Vector& c, const GalerkinBasis& basis);
Vector reconstruct_face_derivative(const Vector& c, const GalerkinBasis& basis);

/// Weighted Gram matrix Σ_j h weight_j w_i(x_j) w_k(x_j).
Matrix weighted_gram(const Vector& weight, const GalerkinBasis& basis, const Grid1D& grid);

/// Second-order central difference at the centres, one-sided at the two boundary cells.
Vector central_difference(const Vector& f, const Grid1D& grid);

} // namespace bifluid
