#pragma once

#include "varns/field.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <vector>

namespace varns {

// Second-order finite differences on collocated nodes. Interior nodes use
// central stencils, Wall boundaries and the two time ends use one-sided
// second-order stencils, Periodic axes wrap around.

ScalarField gradient(const ScalarField& f, int axis);
ScalarField divergence(const VectorField& v);
/// Sum of second derivatives over all spatial axes. On a Wall axis with four
/// or more nodes the boundary rows use the 4-point one-sided stencil.
ScalarField laplacian(const ScalarField& f);
ScalarField second_derivative(const ScalarField& f, int axis);
/// Requires time_nodes >= 3.
ScalarField time_derivative(const ScalarField& f);

/// Quadrature weight of every spatial node: trapezoid on Wall axes, rectangle
/// rule on Periodic axes, product over axes.
std::vector<double> space_weights(const Grid& grid);
/// Trapezoid weights in time; a single weight of 1 for steady grids.
std::vector<double> time_weights(const Grid& grid);

double integrate_space(const ScalarField& f, int time);
/// Time trapezoid composed with integrate_space. Steady grids reduce to the
/// spatial integral.
double integrate_spacetime(const ScalarField& f);

/// One side of a Wall axis.
struct BoundaryFace {
    int axis = 0;
    int side = 0;                     ///< 0 = lower end, 1 = upper end
    double normal_sign = -1.0;        ///< outward normal is normal_sign * e_axis
    std::vector<std::size_t> nodes;   ///< spatial indices
    std::vector<double> weights;      ///< face quadrature weights
};

/// Faces of every Wall axis; empty for all-Periodic grids. In 1D a face is a
/// single node with weight 1.
std::vector<BoundaryFace> boundary_faces(const Grid& grid);

/// Surface integral of flux . n over all Wall faces at one time level.
double boundary_integral(const VectorField& flux, int time);

// Sparse matrix forms of the same stencils acting on the full space-time
// value vector.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix gradient_matrix(const Grid& grid, int axis);
SparseMatrix laplacian_matrix(const Grid& grid);
SparseMatrix time_derivative_matrix(const Grid& grid);

} // namespace varns
