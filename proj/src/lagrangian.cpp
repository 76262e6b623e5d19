#include "varns/lagrangian.hpp"

#include "varns/errors.hpp"
#include "varns/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace varns {
namespace {

struct Derivatives {
    std::vector<std::vector<ScalarField>> grad; // grad[i][j] = d_j v_i
    std::vector<ScalarField> dt;                // d_t v_i, empty when steady
    std::vector<ScalarField> grad_q;            // d_j q
};

Derivatives derivatives(const VectorField& v, const ScalarField& q) {
    const Grid& g = v.grid();
    const int d = g.dim();
    Derivatives out;
    out.grad.resize(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.grad[i].push_back(gradient(v[i], j));
    if (!g.steady())
        for (int i = 0; i < d; ++i) out.dt.push_back(time_derivative(v[i]));
    for (int j = 0; j < d; ++j) out.grad_q.push_back(gradient(q, j));
    return out;
}

void check_unsteady_ok(const Grid& g) {
    if (g.time_nodes() == 2)
        throw DomainError("unsteady evaluation needs at least 3 time nodes (or 1 for steady)");
}

struct HalfTerms {
    double viscous, advective, pressure, temporal;
    double total() const { return viscous + advective + pressure + temporal; }
};

/// H(a, q, b) at node n: the half of L that carries (a, q) in the leading slot.
HalfTerms half_density(std::size_t n, const VectorField& a, const VectorField& b,
                       const Derivatives& da, const Derivatives& db, double nu) {
    const int d = a.dim();
    HalfTerms h{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
        double adv = 0.0;
        for (int j = 0; j < d; ++j) {
            const double g = da.grad[i][j][n];
            h.viscous += g * g;
            adv += a[j][n] * db.grad[i][j][n];
        }
        h.advective += (b[i][n] + a[i][n]) * adv;
        h.pressure += a[i][n] * da.grad_q[i][n];
        if (!db.dt.empty()) h.temporal += a[i][n] * db.dt[i][n];
    }
    h.viscous *= 0.5 * nu;
    h.advective *= 0.5;
    h.temporal *= 0.5;
    return h;
}

double weighted_sum(const Grid& g, const std::vector<double>& node_values) {
    const auto ws = space_weights(g);
    const auto wt = time_weights(g);
    const std::size_t S = g.space_size();
    double total = 0.0;
    for (int k = 0; k < g.time_nodes(); ++k) {
        double slice = 0.0;
        for (std::size_t s = 0; s < S; ++s) slice += ws[s] * node_values[k * S + s];
        total += wt[k] * slice;
    }
    return total;
}

double relative_tol_scale(const FieldQuartet& d) {
    return 1e-12 * std::max({1.0, d.u.max_abs(), d.w.max_abs(), d.p.max_abs(), d.r.max_abs()});
}

} // namespace

LagrangianReport evaluate_lagrangian(const FieldQuartet& state, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    const Grid& g = state.grid();
    check_unsteady_ok(g);
    const Derivatives du = derivatives(state.u, state.p);
    const Derivatives dw = derivatives(state.w, state.r);

    const std::size_t N = g.size(), S = g.space_size();
    std::vector<double> dens(N), visc(N), adv(N), pres(N), temp(N), mag(N);
    for (std::size_t n = 0; n < N; ++n) {
        const HalfTerms hu = half_density(n, state.u, state.w, du, dw, nu);
        const HalfTerms hw = half_density(n, state.w, state.u, dw, du, nu);
        dens[n] = hu.total() - hw.total();
        visc[n] = hu.viscous - hw.viscous;
        adv[n] = hu.advective - hw.advective;
        pres[n] = hu.pressure - hw.pressure;
        temp[n] = hu.temporal - hw.temporal;
        mag[n] = std::abs(hu.total()) + std::abs(hw.total());
    }

    LagrangianReport rep;
    const auto ws = space_weights(g);
    const auto wt = time_weights(g);
    for (int k = 0; k < g.time_nodes(); ++k) {
        double slice = 0.0;
        for (std::size_t s = 0; s < S; ++s) slice += ws[s] * dens[k * S + s];
        rep.slices.push_back(slice);
        rep.J += wt[k] * slice;
    }
    rep.viscous = weighted_sum(g, visc);
    rep.advective = weighted_sum(g, adv);
    rep.pressure = weighted_sum(g, pres);
    rep.temporal = weighted_sum(g, temp);
    rep.magnitude = weighted_sum(g, mag);
    return rep;
}

double swap_functional(const FieldQuartet& state, double nu) {
    return evaluate_lagrangian(state.swapped(), nu).J;
}

double ELResiduals::max_abs() const {
    return std::max({res_div_u.max_abs(), res_div_w.max_abs(), res_u.max_abs(), res_w.max_abs()});
}

namespace {

/// nu lap own_i - d_i q - d_t other_i - 1/2 s_j (d_j other_i + d_i other_j), s = u + w.
VectorField momentum_residual(const VectorField& own, const ScalarField& q, const VectorField& sum,
                              const Derivatives& d_other, double nu) {
    const Grid& g = own.grid();
    const int d = g.dim();
    VectorField res(g);
    for (int i = 0; i < d; ++i) {
        ScalarField ri = nu * laplacian(own[i]);
        ri -= d_other.dt.empty() ? ScalarField(g) : d_other.dt[i];
        ri -= gradient(q, i);
        for (std::size_t n = 0; n < g.size(); ++n) {
            double adv = 0.0;
            for (int j = 0; j < d; ++j)
                adv += sum[j][n] * (d_other.grad[i][j][n] + d_other.grad[j][i][n]);
            ri[n] -= 0.5 * adv;
        }
        res[i] = std::move(ri);
    }
    return res;
}

} // namespace

ELResiduals el_residuals(const FieldQuartet& state, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    check_unsteady_ok(state.grid());
    const Derivatives du = derivatives(state.u, state.p);
    const Derivatives dw = derivatives(state.w, state.r);
    const VectorField s = state.u + state.w;
    return {divergence(state.u), divergence(state.w),
            momentum_residual(state.u, state.p, s, dw, nu),
            momentum_residual(state.w, state.r, s, du, nu)};
}

void check_admissible_direction(const FieldQuartet& dir) {
    dir.check_consistent();
    const Grid& g = dir.grid();
    const double tol = relative_tol_scale(dir);
    const int d = g.dim();
    auto fail = [](const std::string& what, std::size_t s, int k) {
        std::ostringstream msg;
        msg << "inadmissible variation: " << what << " (space node " << s << ", time node " << k
            << ")";
        throw PreconditionError(msg.str());
    };
    for (int k = 0; k < g.time_nodes(); ++k) {
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            if (!g.on_wall(s)) continue;
            for (int i = 0; i < d; ++i)
                if (std::abs(dir.u[i].at(s, k)) > tol || std::abs(dir.w[i].at(s, k)) > tol)
                    fail("velocity variation nonzero on a wall", s, k);
            if (std::abs(dir.p.at(s, k) - dir.r.at(s, k)) > tol)
                fail("pressure variations differ on a wall", s, k);
        }
    }
    if (g.steady()) return;
    for (int k : {0, g.time_nodes() - 1})
        for (std::size_t s = 0; s < g.space_size(); ++s)
            for (int i = 0; i < d; ++i)
                if (std::abs(dir.u[i].at(s, k) - dir.w[i].at(s, k)) > tol)
                    fail("u- and w-variations differ at an end time", s, k);
}

namespace {

/// sum_i A_i(a, b, q) dir_i at node n.
/// A_i(u, w, p) = 1/2 [u_j d_j w_i + (w_j + u_j) d_i w_j] + d_i p + 1/2 d_t w_i - 1/2 w_j d_j u_i
double a_dot(std::size_t n, const VectorField& a, const VectorField& b, const Derivatives& da,
             const Derivatives& db, const VectorField& dir) {
    const int d = a.dim();
    double out = 0.0;
    for (int i = 0; i < d; ++i) {
        double ai = da.grad_q[i][n];
        for (int j = 0; j < d; ++j) {
            ai += 0.5 * (a[j][n] * db.grad[i][j][n] + (b[j][n] + a[j][n]) * db.grad[j][i][n]);
            ai -= 0.5 * b[j][n] * da.grad[i][j][n];
        }
        if (!db.dt.empty()) ai += 0.5 * db.dt[i][n];
        out += ai * dir[i][n];
    }
    return out;
}

/// B(a, b, q, da, db, dq) = nu d_j a_i d_j da_i + 1/2 (a_i + b_i) a_j d_j db_i
///                          + a_i d_i dq + 1/2 a_i d_t db_i
double b_term(std::size_t n, const VectorField& a, const VectorField& b, const Derivatives& da,
              const Derivatives& dda, const Derivatives& ddb, double nu) {
    const int d = a.dim();
    double out = 0.0;
    for (int i = 0; i < d; ++i) {
        double adv = 0.0;
        for (int j = 0; j < d; ++j) {
            out += nu * da.grad[i][j][n] * dda.grad[i][j][n];
            adv += a[j][n] * ddb.grad[i][j][n];
        }
        out += 0.5 * (a[i][n] + b[i][n]) * adv;
        out += a[i][n] * dda.grad_q[i][n];
        if (!ddb.dt.empty()) out += 0.5 * a[i][n] * ddb.dt[i][n];
    }
    return out;
}

void check_pair(const FieldQuartet& state, const FieldQuartet& direction, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    direction.check_consistent();
    if (!(state.grid() == direction.grid()))
        throw DomainError("state and direction live on different grids");
    check_unsteady_ok(state.grid());
    check_admissible_direction(direction);
}

} // namespace

double first_variation(const FieldQuartet& state, const FieldQuartet& dir, double nu) {
    check_pair(state, dir, nu);
    const Grid& g = state.grid();
    const Derivatives du = derivatives(state.u, state.p);
    const Derivatives dw = derivatives(state.w, state.r);
    const Derivatives ddu = derivatives(dir.u, dir.p);
    const Derivatives ddw = derivatives(dir.w, dir.r);
    std::vector<double> dens(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double a_part =
            a_dot(n, state.u, state.w, du, dw, dir.u) - a_dot(n, state.w, state.u, dw, du, dir.w);
        // ddu carries grad(dp) and ddw carries grad(dr).
        const double b_part = b_term(n, state.u, state.w, du, ddu, ddw, nu) -
                              b_term(n, state.w, state.u, dw, ddw, ddu, nu);
        dens[n] = a_part + b_part;
    }
    return weighted_sum(g, dens);
}

double first_variation_volume(const FieldQuartet& state, const FieldQuartet& dir, double nu) {
    check_pair(state, dir, nu);
    const Grid& g = state.grid();
    const ELResiduals res = el_residuals(state, nu);
    const int d = g.dim();
    std::vector<double> dens(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        double v = -res.res_div_u[n] * dir.p[n] + res.res_div_w[n] * dir.r[n];
        for (int k = 0; k < d; ++k) {
            const double s = state.u[k][n] + state.w[k][n];
            v += (-res.res_u[k][n] + 0.5 * s * res.res_div_w[n]) * dir.u[k][n];
            v += (res.res_w[k][n] - 0.5 * s * res.res_div_u[n]) * dir.w[k][n];
        }
        dens[n] = v;
    }
    return weighted_sum(g, dens);
}

DifferencePair difference_fields(const FieldQuartet& state) {
    state.check_consistent();
    return {0.5 * (state.u - state.w), 0.5 * (state.p - state.r)};
}

} // namespace varns
