#pragma once

#include "varns/field.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace varns {

/// Prescribed surface velocities. Both fields live on the full grid so that
/// tangential derivatives along a face can be taken; only their values on
/// Wall faces enter any formula.
struct SurfaceData {
    VectorField u_s;
    VectorField w_s;

    /// Checks grids against `grid` and the zero net flux of u_s through the
    /// boundary at every time level (tolerance 1e-10 relative). Throws
    /// DomainError on failure.
    void validate(const Grid& grid) const;
};

/// Surface density M_j at boundary nodes:
///   M_j = -u^s_j p + w^s_j r + (u_j |u|^2 + |u|^2 w_j)/4 - (w_j |w|^2 + |w|^2 u_j)/4
///       + nu [-(u_i - u^s_i) d_j u_i + (w_i - w^s_i) d_j w_i
///             + eps_ijk (w_k - w^s_k - u_k + u^s_k) d_i |u - u^s + w - w^s|]
/// Values off the boundary are zero. Where the magnitude vanishes the
/// permutation term is set to zero and the node is listed in
/// `singular_nodes` (space-time indices).
struct SurfaceDensity {
    VectorField M;
    std::vector<std::size_t> singular_nodes;
};

SurfaceDensity surface_density(const FieldQuartet& state, const SurfaceData& surface, double nu);

struct ExtendedReport {
    double J = 0.0;
    double surface_term = 0.0;
    double I = 0.0;
    std::size_t singular_nodes = 0;
};

/// I = J + time trapezoid of the boundary integral of M_j n_j.
ExtendedReport extended_functional(const FieldQuartet& state, const SurfaceData& surface, double nu);

struct BoundaryAuditRow {
    int face = 0;
    std::size_t node = 0; ///< space-time index
    double check_a = 0.0; ///< |n.(u - u^s)|
    double check_b = 0.0; ///< |n_i (u_i - u^s_i)(u_j - u^s_j) + nu n_i eps_ijk d_k |u - u^s||
    double check_c = 0.0; ///< |n.w|
    double check_d = 0.0; ///< |w|, zero when nu = 0
};

struct BoundaryAudit {
    std::vector<BoundaryAuditRow> rows;
    double max_a = 0.0, max_b = 0.0, max_c = 0.0, max_d = 0.0;
    double scale = 1.0;
    double tolerance = 0.0; ///< 1e-8 * scale
    bool viscous = true;    ///< check_d is asserted only when nu != 0
    bool passed = true;

    std::string csv() const;
};

/// Evaluates the boundary-condition recovery checks on every Wall node at
/// every time level. Vectors are padded to three components, so in 2D the
/// permutation term of check_b is the out-of-plane component of
/// n x grad |u - u^s|.
BoundaryAudit boundary_recovery_audit(const FieldQuartet& state, const SurfaceData& surface,
                                      double nu);

} // namespace varns
