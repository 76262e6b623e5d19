#pragma once

#include "varns/field.hpp"

#include <vector>

namespace varns {

/// Value of the dual functional J(u, p, w, r) and its pieces.
///
/// The Lagrangian density is
///   L = nu/2 (d_j u_i)^2 + 1/2 (w_i + u_i) u_j d_j w_i + u_i d_i p + 1/2 u_i d_t w_i
///     - nu/2 (d_j w_i)^2 - 1/2 (u_i + w_i) w_j d_j u_i - w_i d_i r - 1/2 w_i d_t u_i
/// and is evaluated node-wise as H(u, p, w) - H(w, r, u), so exchanging
/// (u, p) with (w, r) negates it exactly.
struct LagrangianReport {
    double J = 0.0;
    /// Spatial integral of L at each time node; J is their time trapezoid.
    std::vector<double> slices;
    double viscous = 0.0;
    double advective = 0.0;
    double pressure = 0.0;
    double temporal = 0.0;
    /// Space-time integral of |H(u,p,w)| + |H(w,r,u)|, the size of the two
    /// cancelling halves. Tolerances on J are relative to this.
    double magnitude = 0.0;
};

/// Steady grids (one time node) drop the time-derivative terms; unsteady grids
/// need at least three time nodes.
LagrangianReport evaluate_lagrangian(const FieldQuartet& state, double nu);

/// J(w, r, u, p).
double swap_functional(const FieldQuartet& state, double nu);

struct ELResiduals {
    ScalarField res_div_u;
    ScalarField res_div_w;
    VectorField res_u;
    VectorField res_w;

    double max_abs() const;
};

/// Pointwise Euler-Lagrange residuals
///   res_u_i = nu lap u_i - d_i p - d_t w_i - 1/2 (u_j + w_j)(d_j w_i + d_i w_j)
///   res_w_i = nu lap w_i - d_i r - d_t u_i - 1/2 (u_j + w_j)(d_j u_i + d_i u_j)
/// together with div u and div w.
ELResiduals el_residuals(const FieldQuartet& state, double nu);

/// Directional derivative of the discrete J along `direction`, assembled from
/// the A_i and B terms of the first variation. Because it differentiates the
/// same discrete sums that evaluate_lagrangian adds up, it equals the exact
/// derivative of the discrete functional.
///
/// Throws PreconditionError unless the direction is admissible: velocity
/// variations vanish on Wall faces, pressure variations agree there, and the
/// u- and w-variations agree at t = 0 and t = tau.
double first_variation(const FieldQuartet& state, const FieldQuartet& direction, double nu);

/// Same quantity in integrated-by-parts volume form,
///   int [(-res_u + 1/2 s div w) . du + (res_w - 1/2 s div u) . dw - div u dp + div w dr],
/// with s = u + w. Agrees with first_variation up to discretization error.
double first_variation_volume(const FieldQuartet& state, const FieldQuartet& direction, double nu);

/// Throws PreconditionError naming the violated condition.
void check_admissible_direction(const FieldQuartet& direction);

/// vbar = (u - w) / 2, qbar = (p - r) / 2.
struct DifferencePair {
    VectorField v_bar;
    ScalarField q_bar;
};

DifferencePair difference_fields(const FieldQuartet& state);

} // namespace varns
