#include "varns/energy.hpp"

#include "varns/errors.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace varns {

std::array<double, 3> symmetric_eigenvalues(const std::array<double, 9>& a, int dim) {
    if (dim == 1) return {a[0], a[0], a[0]};
    if (dim == 2) {
        const double mean = 0.5 * (a[0] + a[3]);
        const double half = 0.5 * (a[0] - a[3]);
        const double rad = std::hypot(half, a[1]);
        return {mean - rad, mean + rad, mean + rad};
    }
    if (dim != 3) throw DomainError("symmetric_eigenvalues supports dimensions 1 to 3");
    const double a00 = a[0], a01 = a[1], a02 = a[2], a11 = a[4], a12 = a[5], a22 = a[8];
    const double off = a01 * a01 + a02 * a02 + a12 * a12;
    if (off == 0.0) {
        std::array<double, 3> e{a00, a11, a22};
        std::sort(e.begin(), e.end());
        return e;
    }
    const double q = (a00 + a11 + a22) / 3.0;
    const double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
    const double p = std::sqrt((b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off) / 6.0);
    const double det = b00 * (b11 * b22 - a12 * a12) - a01 * (a01 * b22 - a12 * a02) +
                       a02 * (a01 * a12 - b11 * a02);
    const double half_det = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(half_det) / 3.0;
    const double hi = q + 2.0 * p * std::cos(phi);
    const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    return {lo, 3.0 * q - hi - lo, hi};
}

EnergySeries energy_series(const FieldQuartet& state, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    const Grid& g = state.grid();
    if (g.time_nodes() == 2) throw DomainError("energy series needs 1 or at least 3 time nodes");
    const int d = g.dim();
    const DifferencePair diff = difference_fields(state);
    const VectorField& vb = diff.v_bar;

    if (g.has_wall()) {
        const double tol = 1e-12 * std::max({1.0, state.u.max_abs(), state.w.max_abs()});
        double worst = 0.0;
        std::size_t worst_s = 0;
        int worst_k = 0;
        for (int k = 0; k < g.time_nodes(); ++k)
            for (std::size_t s = 0; s < g.space_size(); ++s) {
                if (!g.on_wall(s)) continue;
                for (int i = 0; i < d; ++i)
                    if (std::abs(vb[i].at(s, k)) > worst) {
                        worst = std::abs(vb[i].at(s, k));
                        worst_s = s;
                        worst_k = k;
                    }
            }
        if (worst > tol) {
            const auto idx = g.space_multi_index(worst_s);
            std::ostringstream msg;
            msg << "difference field does not vanish on the wall: |vbar| = " << worst << " at node (";
            for (int a = 0; a < d; ++a) msg << (a ? "," : "") << idx[a];
            msg << ") time index " << worst_k;
            throw PreconditionError(msg.str());
        }
    }

    const VectorField sum = state.u + state.w;
    std::vector<std::vector<ScalarField>> grad_s(d), grad_v(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            grad_s[i].push_back(gradient(sum[i], j)); // d_j s_i
            grad_v[i].push_back(gradient(vb[i], j));
        }

    ScalarField energy(g), dissip(g), forcing(g);
    double m = -std::numeric_limits<double>::infinity();
    double m_min = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < g.size(); ++n) {
        double e = 0.0, gv = 0.0, f = 0.0;
        std::array<double, 9> S{}; // row-major dim x dim block
        for (int i = 0; i < d; ++i) {
            e += vb[i][n] * vb[i][n];
            for (int j = 0; j < d; ++j) {
                gv += grad_v[i][j][n] * grad_v[i][j][n];
                f += vb[i][n] * vb[j][n] * grad_s[j][i][n]; // vbar_i vbar_j d_i s_j
                S[d * i + j] = 0.5 * (grad_s[j][i][n] + grad_s[i][j][n]);
            }
        }
        const auto ev = symmetric_eigenvalues(S, d);
        m = std::max(m, ev[2]);
        m_min = std::min(m_min, ev[0]);
        energy[n] = e;
        dissip[n] = 2.0 * nu * gv;
        forcing[n] = f;
    }

    EnergySeries out;
    out.m = m;
    out.m_min = m_min;
    for (int k = 0; k < g.time_nodes(); ++k) {
        out.times.push_back(g.time(k));
        out.E.push_back(integrate_space(energy, k));
        out.dissipation.push_back(integrate_space(dissip, k));
        out.forcing.push_back(integrate_space(forcing, k));
        out.rhs.push_back(out.dissipation.back() + out.forcing.back());
        out.scale = std::max(out.scale, std::abs(out.dissipation.back()) +
                                            std::abs(out.forcing.back()) +
                                            2.0 * std::abs(m) * out.E.back());
    }
    for (int k = 1; k + 1 < g.time_nodes(); ++k) {
        const double dEdt = (out.E[k + 1] - out.E[k - 1]) / (2.0 * g.dt());
        out.identity_mismatch.push_back(std::abs(dEdt - out.rhs[k]));
    }
    return out;
}

GronwallReport gronwall_audit(const EnergySeries& series) {
    GronwallReport rep;
    rep.tolerance = 1e-10 * std::max(series.scale, std::numeric_limits<double>::min());
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < series.E.size(); ++k) {
        const double margin = series.rhs[k] + 2.0 * series.m * series.E[k];
        rep.min_margin = std::min(rep.min_margin, margin);
        rep.profile.push_back(series.E[k] * std::exp(2.0 * series.m * series.times[k]));
    }
    rep.inequality_holds = rep.min_margin >= -rep.tolerance;
    rep.min_forward_difference = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < rep.profile.size(); ++k)
        rep.min_forward_difference =
            std::min(rep.min_forward_difference, rep.profile[k] - rep.profile[k - 1]);
    if (rep.profile.size() < 2) rep.min_forward_difference = 0.0;
    rep.profile_nondecreasing = rep.min_forward_difference >= -rep.tolerance;
    return rep;
}

} // namespace varns
