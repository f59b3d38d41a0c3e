#include "bifluid/discretization.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bifluid/errors.hpp"

namespace bifluid {

Grid1D::Grid1D(int n) : n_cells(n)
{
    if (n < 4) throw DomainError("Grid1D: need at least four cells");
    h = 1.0 / n;
    nodes.resize(n);
    faces.resize(n + 1);
    for (int i = 0; i < n; ++i) nodes(i) = (i + 0.5) * h;
    for (int i = 0; i <= n; ++i) faces(i) = i * h;
    faces(n) = 1.0;
}

GalerkinBasis build_basis(int n_modes, const Grid1D& grid)
{
    if (n_modes < 1) throw DomainError("build_basis: n_modes must be >= 1");
    if (grid.n_cells < 8 * n_modes)
        throw DomainError("build_basis: n_cells = " + std::to_string(grid.n_cells) +
                          " cannot resolve " + std::to_string(n_modes) + " modes (need >= 8 cells per mode)");
    constexpr double pi = std::numbers::pi;
    const double s2 = std::numbers::sqrt2;
    GalerkinBasis b;
    b.n_modes = n_modes;
    const int n = grid.n_cells;
    b.values.resize(n, n_modes);
    b.derivs.resize(n, n_modes);
    b.face_values.resize(n + 1, n_modes);
    b.face_derivs.resize(n + 1, n_modes);
    for (int m = 0; m < n_modes; ++m) {
        const double k = (m + 1) * pi;
        for (int j = 0; j < n; ++j) {
            b.values(j, m) = s2 * std::sin(k * grid.nodes(j));
            b.derivs(j, m) = s2 * k * std::cos(k * grid.nodes(j));
        }
        for (int j = 0; j <= n; ++j) {
            b.face_values(j, m) = s2 * std::sin(k * grid.faces(j));
            b.face_derivs(j, m) = s2 * k * std::cos(k * grid.faces(j));
        }
        b.face_values(0, m) = 0.0;
        b.face_values(n, m) = 0.0;
    }
    return b;
}

Vector project(const Vector& field, const GalerkinBasis& basis, const Grid1D& grid)
{
    if (field.size() != grid.n_cells) throw DomainError("project: field size does not match grid");
    return grid.h * (basis.values.transpose() * field);
}

namespace {
void check_coeffs(const Vector& c, const GalerkinBasis& basis)
{
    if (c.size() != basis.n_modes)
        throw DomainError("reconstruct: expected " + std::to_string(basis.n_modes) + " coefficients, got " +
                          std::to_string(c.size()));
}
} // namespace

Vector reconstruct(const Vector& c, const GalerkinBasis& basis)
{
    check_coeffs(c, basis);
    return basis.values * c;
}

Vector reconstruct_derivative(const Vector& c, const GalerkinBasis& basis)
{
    check_coeffs(c, basis);
    return basis.derivs * c;
}

Vector reconstruct_faces(const Vector& c, const GalerkinBasis& basis)
{
    check_coeffs(c, basis);
    return basis.face_values * c;
}

Vector reconstruct_face_derivative(const Vector& c, const GalerkinBasis& basis)
{
    check_coeffs(c, basis);
    return basis.face_derivs * c;
}

Matrix weighted_gram(const Vector& weight, const GalerkinBasis& basis, const Grid1D& grid)
{
    return grid.h * (basis.values.transpose() * weight.asDiagonal() * basis.values);
}

Vector central_difference(const Vector& f, const Grid1D& grid)
{
    const int n = grid.n_cells;
    Vector d(n);
    for (int j = 1; j + 1 < n; ++j) d(j) = (f(j + 1) - f(j - 1)) / (2.0 * grid.h);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * grid.h);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * grid.h);
    return d;
}

} // namespace bifluid
