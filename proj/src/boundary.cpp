#include "varns/boundary.hpp"

#include "varns/errors.hpp"
#include "varns/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace varns {
namespace {

using Vec3 = std::array<double, 3>;

int levi_civita(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((i + 1) % 3 == j) ? 1 : -1;
}

Vec3 at(const VectorField& v, std::size_t n) {
    Vec3 out{0.0, 0.0, 0.0};
    for (int i = 0; i < v.dim(); ++i) out[i] = v[i][n];
    return out;
}

double norm_sq(const Vec3& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

/// grad[i][j] = d_j v_i, padded to 3x3 with zeros.
std::vector<std::array<ScalarField, 3>> gradients(const VectorField& v) {
    const Grid& g = v.grid();
    std::vector<std::array<ScalarField, 3>> out(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i][j] = (i < g.dim() && j < g.dim()) ? gradient(v[i], j) : ScalarField(g);
    return out;
}

std::array<ScalarField, 3> gradient3(const ScalarField& f) {
    const Grid& g = f.grid();
    std::array<ScalarField, 3> out;
    for (int j = 0; j < 3; ++j) out[j] = j < g.dim() ? gradient(f, j) : ScalarField(g);
    return out;
}

ScalarField magnitude(const VectorField& v) {
    ScalarField m(v.grid());
    for (std::size_t n = 0; n < m.size(); ++n) m[n] = std::sqrt(norm_sq(at(v, n)));
    return m;
}

void check_surface(const FieldQuartet& state, const SurfaceData& surface) {
    state.check_consistent();
    const Grid& g = state.grid();
    if (!g.has_wall()) return;
    surface.validate(g);
}

} // namespace

void SurfaceData::validate(const Grid& grid) const {
    if (u_s.dim() == 0 || w_s.dim() == 0) throw DomainError("surface data missing");
    if (!(u_s.grid() == grid) || !(w_s.grid() == grid))
        throw DomainError("surface data lives on a different grid");
    const double tol = 1e-10 * std::max(1.0, u_s.max_abs());
    for (int k = 0; k < grid.time_nodes(); ++k) {
        const double flux = boundary_integral(u_s, k);
        if (std::abs(flux) > tol) {
            std::ostringstream msg;
            msg << "surface velocity has net boundary flux " << flux << " at time index " << k;
            throw DomainError(msg.str());
        }
    }
}

SurfaceDensity surface_density(const FieldQuartet& state, const SurfaceData& surface, double nu) {
    if (nu < 0.0) throw DomainError("viscosity must be non-negative");
    state.check_consistent();
    const Grid& g = state.grid();
    SurfaceDensity out{VectorField(g), {}};
    if (!g.has_wall()) return out;
    surface.validate(g);
    const int d = g.dim();

    const VectorField du = state.u - surface.u_s;
    const VectorField dw = state.w - surface.w_s;
    const ScalarField mag = magnitude(du + dw);
    const auto grad_u = gradients(state.u);
    const auto grad_w = gradients(state.w);
    const auto grad_mag = gradient3(mag);

    std::vector<char> on_wall(g.space_size(), 0);
    for (std::size_t s = 0; s < g.space_size(); ++s) on_wall[s] = g.on_wall(s);

    for (int t = 0; t < g.time_nodes(); ++t)
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            if (!on_wall[s]) continue;
            const std::size_t n = g.index(s, t);
            const Vec3 u = at(state.u, n), w = at(state.w, n);
            const Vec3 us = at(surface.u_s, n), ws = at(surface.w_s, n);
            const Vec3 a = at(du, n), b = at(dw, n);
            const double uu = norm_sq(u), ww = norm_sq(w);
            const bool singular = mag[n] == 0.0;
            if (singular) out.singular_nodes.push_back(n);
            for (int j = 0; j < d; ++j) {
                const double pressure = ws[j] * state.r[n] - us[j] * state.p[n];
                const double cubic = 0.25 * ((u[j] * uu + uu * w[j]) - (w[j] * ww + ww * u[j]));
                double visc = 0.0;
                for (int i = 0; i < 3; ++i)
                    visc += b[i] * grad_w[i][j][n] - a[i] * grad_u[i][j][n];
                double perm = 0.0;
                if (!singular)
                    for (int i = 0; i < 3; ++i)
                        for (int k = 0; k < 3; ++k) {
                            const int e = levi_civita(i, j, k);
                            if (e != 0) perm += e * (b[k] - a[k]) * grad_mag[i][n];
                        }
                out.M[j][n] = pressure + cubic + nu * (visc + perm);
            }
        }
    return out;
}

ExtendedReport extended_functional(const FieldQuartet& state, const SurfaceData& surface,
                                   double nu) {
    ExtendedReport rep;
    rep.J = evaluate_lagrangian(state, nu).J;
    const Grid& g = state.grid();
    if (g.has_wall()) {
        const SurfaceDensity dens = surface_density(state, surface, nu);
        const auto wt = time_weights(g);
        for (int k = 0; k < g.time_nodes(); ++k)
            rep.surface_term += wt[k] * boundary_integral(dens.M, k);
        rep.singular_nodes = dens.singular_nodes.size();
    }
    rep.I = rep.J + rep.surface_term;
    return rep;
}

BoundaryAudit boundary_recovery_audit(const FieldQuartet& state, const SurfaceData& surface,
                                      double nu) {
    check_surface(state, surface);
    const Grid& g = state.grid();
    BoundaryAudit audit;
    audit.viscous = nu != 0.0;
    audit.scale = std::max({1.0, state.u.max_abs(), state.w.max_abs()});
    audit.tolerance = 1e-8 * audit.scale;
    if (!g.has_wall()) return audit;

    const VectorField du = state.u - surface.u_s;
    const auto grad_mag = gradient3(magnitude(du));
    const auto faces = boundary_faces(g);
    for (int t = 0; t < g.time_nodes(); ++t)
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const BoundaryFace& face = faces[f];
            Vec3 normal{0.0, 0.0, 0.0};
            normal[face.axis] = face.normal_sign;
            for (std::size_t s : face.nodes) {
                const std::size_t n = g.index(s, t);
                const Vec3 a = at(du, n), w = at(state.w, n);
                double na = 0.0, nw = 0.0;
                for (int i = 0; i < 3; ++i) {
                    na += normal[i] * a[i];
                    nw += normal[i] * w[i];
                }
                Vec3 lhs{};
                for (int j = 0; j < 3; ++j) {
                    double perm = 0.0;
                    for (int i = 0; i < 3; ++i)
                        for (int k = 0; k < 3; ++k) {
                            const int e = levi_civita(i, j, k);
                            if (e != 0) perm += e * normal[i] * grad_mag[k][n];
                        }
                    lhs[j] = na * a[j] + nu * perm;
                }
                BoundaryAuditRow row;
                row.face = static_cast<int>(f);
                row.node = n;
                row.check_a = std::abs(na);
                row.check_b = std::sqrt(norm_sq(lhs));
                row.check_c = std::abs(nw);
                row.check_d = audit.viscous ? std::sqrt(norm_sq(w)) : 0.0;
                audit.max_a = std::max(audit.max_a, row.check_a);
                audit.max_b = std::max(audit.max_b, row.check_b);
                audit.max_c = std::max(audit.max_c, row.check_c);
                audit.max_d = std::max(audit.max_d, row.check_d);
                audit.rows.push_back(row);
            }
        }
    audit.passed = audit.max_a <= audit.tolerance && audit.max_b <= audit.tolerance &&
                   audit.max_c <= audit.tolerance && audit.max_d <= audit.tolerance;
    return audit;
}

std::string BoundaryAudit::csv() const {
    io::CsvTable table({"face", "node", "check_a", "check_b", "check_c", "check_d"});
    for (const auto& r : rows)
        table.add_row({std::to_string(r.face), std::to_string(r.node), io::format_real(r.check_a),
                       io::format_real(r.check_b), io::format_real(r.check_c),
                       io::format_real(r.check_d)});
    return table.str();
}

} // namespace varns
