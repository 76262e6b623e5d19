#pragma once

#include "varns/field.hpp"

#include <array>
#include <vector>

namespace varns {

/// Energy balance of the half-difference field vbar = (u - w)/2.
///
/// For fields obeying the difference equations with vbar = 0 on walls and
/// solenoidal u, w, the balance reads
///   dE/dt = rhs = 2 nu int (d_j vbar_i)^2 + int vbar_i vbar_j d_i(u_j + w_j),
/// with E = int vbar_i vbar_i.
struct EnergySeries {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> rhs;
    std::vector<double> dissipation; ///< 2 nu int |grad vbar|^2
    std::vector<double> forcing;     ///< int vbar_i vbar_j d_i (u_j + w_j)
    /// |dE/dt - rhs| at interior time nodes 1..T-2 (central differences).
    std::vector<double> identity_mismatch;
    /// Largest eigenvalue of 1/2 [d_i(u_j + w_j) + d_j(u_i + w_i)] over all nodes and times.
    double m = 0.0;
    /// Smallest eigenvalue of the same tensor over all nodes and times.
    double m_min = 0.0;
    /// max_t (|dissipation| + |forcing| + 2|m| E); tolerances are relative to it.
    double scale = 0.0;
};

/// Requires vbar = 0 (within 1e-12) on Wall faces; throws PreconditionError
/// naming the worst node otherwise.
EnergySeries energy_series(const FieldQuartet& state, double nu);

struct GronwallReport {
    /// rhs(t) + 2 m E(t) >= -tolerance at every time node.
    bool inequality_holds = true;
    double min_margin = 0.0;
    double tolerance = 0.0;
    /// E(t) exp(2 m t).
    std::vector<double> profile;
    double min_forward_difference = 0.0;
    bool profile_nondecreasing = true;
};

GronwallReport gronwall_audit(const EnergySeries& series);

/// Eigenvalues (ascending) of a symmetric 1x1, 2x2 or 3x3 matrix packed
/// row-major as a[dim * i + j], by closed-form formulas.
std::array<double, 3> symmetric_eigenvalues(const std::array<double, 9>& a, int dim);

} // namespace varns
