#include "varns/steady.hpp"

#include "varns/errors.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varns {
namespace {

void require_steady(const Grid& g) {
    if (!g.steady()) throw DomainError("steady quantities need a grid with a single time node");
}

/// 1/4 int sum_ij (d_i s_j)^2 with s = u + w.
double quarter_dirichlet(const VectorField& s) {
    const Grid& g = s.grid();
    ScalarField dens(g);
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) {
            const ScalarField d = gradient(s[j], i);
            for (std::size_t n = 0; n < g.size(); ++n) dens[n] += d[n] * d[n];
        }
    return 0.25 * integrate_space(dens, 0);
}

const double three_pow_m34 = std::pow(3.0, -0.75);

} // namespace

double steady_functional(const FieldQuartet& state, double nu) {
    state.check_consistent();
    require_steady(state.grid());
    return evaluate_lagrangian(state, nu).J;
}

double enclosing_radius(const Grid& g) {
    double sq = 0.0;
    for (int a = 0; a < g.dim(); ++a) sq += g.extent(a) * g.extent(a);
    return 0.5 * std::sqrt(sq);
}

UniquenessCertificate uniqueness_certificate(const FieldQuartet& state, double nu) {
    if (!(nu > 0.0)) throw DomainError("the uniqueness certificate needs nu > 0");
    state.check_consistent();
    const Grid& g = state.grid();
    require_steady(g);
    UniquenessCertificate c;
    c.nu = nu;
    c.R = enclosing_radius(g);
    c.lambda = lambda_factor / (c.R * c.R);
    c.dirichlet_norm_sum = quarter_dirichlet(state.u + state.w);
    c.lhs = std::sqrt(c.R) / nu * std::sqrt(c.dirichlet_norm_sum);
    c.threshold = std::sqrt(c.R) * std::pow(c.lambda, 0.25) * std::pow(3.0, 0.75);
    c.satisfied = c.lhs <= c.threshold;
    return c;
}

InequalityAudit inequality_chain_audit(const FieldQuartet& state, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    const Grid& g = state.grid();
    require_steady(g);
    const int d = g.dim();
    const VectorField vb = difference_fields(state).v_bar;
    if (g.has_wall()) {
        const double tol = 1e-12 * std::max({1.0, state.u.max_abs(), state.w.max_abs()});
        for (std::size_t s = 0; s < g.space_size(); ++s)
            if (g.on_wall(s))
                for (int i = 0; i < d; ++i)
                    if (std::abs(vb[i][s]) > tol)
                        throw PreconditionError("difference field does not vanish on the wall (node " +
                                                std::to_string(s) + ")");
    }
    const VectorField sum = state.u + state.w;

    ScalarField e2(g), e4(g), gv(g), cross(g);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const ScalarField dvi = gradient(vb[i], j);
            const ScalarField dsj = gradient(sum[j], i); // d_i s_j
            for (std::size_t n = 0; n < g.size(); ++n) {
                gv[n] += dvi[n] * dvi[n];
                cross[n] += 0.5 * vb[i][n] * vb[j][n] * dsj[n];
                const double vv = vb[i][n] * vb[j][n];
                e4[n] += vv * vv;
            }
        }
        for (std::size_t n = 0; n < g.size(); ++n) e2[n] += vb[i][n] * vb[i][n];
    }
    const double E = integrate_space(e2, 0);
    const double G = integrate_space(gv, 0);
    const double L4sq = std::sqrt(integrate_space(e4, 0));
    const double T = std::abs(integrate_space(cross, 0));
    const double D = quarter_dirichlet(sum);
    const double lambda = lambda_factor / std::pow(enclosing_radius(g), 2);

    InequalityAudit audit;
    auto add = [&](std::string name, double lhs, double rhs, bool asserted) {
        audit.rows.push_back({std::move(name), lhs, rhs, rhs - lhs, asserted, true});
    };
    add("schwarz", T, L4sq * std::sqrt(D), true);
    add("interpolation", L4sq, three_pow_m34 * std::pow(E, 0.25) * std::pow(G, 0.75), false);
    add("serrin", nu * G, three_pow_m34 * std::pow(E, 0.25) * std::pow(G, 0.75) * std::sqrt(D),
        false);
    add("poincare", E, G / lambda, false);
    add("payne_weinberger", nu * G, three_pow_m34 / std::pow(lambda, 0.25) * G * std::sqrt(D),
        false);

    audit.scale = std::max({std::abs(T), L4sq * std::sqrt(D), std::numeric_limits<double>::min()});
    for (auto& row : audit.rows) {
        const double row_scale = std::max({std::abs(row.lhs), std::abs(row.rhs),
                                           std::numeric_limits<double>::min()});
        row.holds = row.margin >= -1e-10 * row_scale;
        if (row.asserted && row.margin < -1e-10 * audit.scale) audit.asserted_hold = false;
    }
    return audit;
}

SteadyBoundaryEstimate steady_boundary_estimate(const FieldQuartet& state, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    const Grid& g = state.grid();
    require_steady(g);
    const int d = g.dim();
    const VectorField s = state.u + state.w;
    const double lambda = lambda_factor / std::pow(enclosing_radius(g), 2);

    ScalarField grad_sq(g), vol(g);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const ScalarField dsj = gradient(s[j], i); // d_i s_j
            for (std::size_t n = 0; n < g.size(); ++n) {
                grad_sq[n] += dsj[n] * dsj[n];
                vol[n] += s[i][n] * s[j][n] * dsj[n];
            }
        }
    const double grad_int = integrate_space(grad_sq, 0);

    VectorField flux(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        double s2 = 0.0;
        for (int j = 0; j < d; ++j) s2 += s[j][n] * s[j][n];
        const double bracket = state.p[n] + state.r[n] + 0.25 * s2;
        for (int i = 0; i < d; ++i) flux[i][n] = bracket * s[i][n];
    }

    SteadyBoundaryEstimate est;
    est.periodic_only = g.all_periodic();
    est.dirichlet_term = 0.25 * nu * grad_int;
    est.boundary_term = est.periodic_only ? 0.0 : 0.25 * boundary_integral(flux, 0);
    est.volume_term = 0.25 * integrate_space(vol, 0);
    est.identity_residual = est.dirichlet_term + est.boundary_term - est.volume_term;
    est.volume_bound = three_pow_m34 / std::pow(lambda, 0.25) * std::pow(0.25 * grad_int, 1.5);
    const double braced = nu - three_pow_m34 / (4.0 * std::pow(lambda, 0.25)) * grad_int;
    est.closing_applicable = braced >= 0.0;
    est.closing_rhs = std::abs(est.boundary_term);
    if (est.closing_applicable) {
        est.closing_lhs = 0.25 * std::sqrt(braced) * grad_int;
        est.closing_margin = est.closing_rhs - est.closing_lhs;
    } else {
        est.closing_lhs = std::numeric_limits<double>::quiet_NaN();
        est.closing_margin = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

} // namespace varns
