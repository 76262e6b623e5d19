#pragma once

#include "varns/field.hpp"

#include <string>
#include <vector>

namespace varns {

/// Spatial integral of the Lagrangian without time-derivative terms. The state
/// must live on a steady grid.
double steady_functional(const FieldQuartet& state, double nu);

/// Radius of the smallest sphere enclosing the box: half its diagonal.
double enclosing_radius(const Grid& grid);

/// Constant in lambda = lambda_factor / R^2.
inline constexpr double lambda_factor = 20.0;

/// Sufficient condition for the difference field to vanish in steady flow:
///   lhs = (R^{1/2} / nu) * dirichlet_norm_sum^{1/2} <= threshold = R^{1/2} lambda^{1/4} 3^{3/4}
/// with dirichlet_norm_sum = 1/4 int (d_i (u_j + w_j))^2.
struct UniquenessCertificate {
    double lhs = 0.0;
    double threshold = 0.0;
    /// The rounded value quoted for the threshold in the literature, 3.
    double quoted_threshold = 3.0;
    double R = 0.0;
    double lambda = 0.0;
    double nu = 0.0;
    double dirichlet_norm_sum = 0.0;
    bool satisfied = true;
};

UniquenessCertificate uniqueness_certificate(const FieldQuartet& state, double nu);

/// One row of the inequality audit: the claim is lhs <= rhs.
struct InequalityRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; ///< rhs - lhs
    bool asserted = false;
    bool holds = true;
};

struct InequalityAudit {
    std::vector<InequalityRow> rows;
    double scale = 0.0;
    /// True when every asserted row has margin >= -1e-10 * scale.
    bool asserted_hold = true;
};

/// Evaluates both sides of the steady uniqueness inequality chain for the
/// difference field of `state`:
///   - Cauchy-Schwarz (asserted):   |int 1/2 vbar_i vbar_j d_i s_j| <= |vbar|_{L4}^2 * D^{1/2}
///   - interpolation step:          |vbar|_{L4}^2 <= 3^{-3/4} E^{1/4} G^{3/4}
///   - Serrin-form bound:           nu G <= 3^{-3/4} E^{1/4} G^{3/4} D^{1/2}
///   - Poincare step with lambda:   E <= G / lambda
///   - Payne-Weinberger form bound: nu G <= 3^{-3/4} lambda^{-1/4} G D^{1/2}
/// where s = u + w, E = int vbar^2, G = int |grad vbar|^2, D = 1/4 int |grad s|^2.
/// Only the Cauchy-Schwarz row is asserted; the others hold for continuum
/// stationary difference fields and are reported as diagnostics.
/// Requires a steady grid and vbar = 0 on Wall faces.
InequalityAudit inequality_chain_audit(const FieldQuartet& state, double nu);

/// Terms of the energy identity obtained by multiplying the summed steady
/// equations by (u + w)/2:
///   nu/4 int |grad s|^2 + 1/4 oint [p + r + |s|^2/4] s.n dS = 1/4 int s_i s_j d_i s_j
/// and of the closing estimate
///   1/4 {nu - 3^{-3/4}/(4 lambda^{1/4}) int |grad s|^2}^{1/2} int |grad s|^2 < |boundary term|.
struct SteadyBoundaryEstimate {
    double dirichlet_term = 0.0;
    double boundary_term = 0.0;
    double volume_term = 0.0;
    double identity_residual = 0.0; ///< dirichlet + boundary - volume
    double volume_bound = 0.0;      ///< 3^{-3/4} lambda^{-1/4} (1/4 int |grad s|^2)^{3/2}
    bool closing_applicable = false; ///< the braced factor is non-negative
    double closing_lhs = 0.0;
    double closing_rhs = 0.0;
    double closing_margin = 0.0;
    bool periodic_only = false;     ///< no walls, so the boundary term is zero
};

SteadyBoundaryEstimate steady_boundary_estimate(const FieldQuartet& state, double nu);

} // namespace varns
