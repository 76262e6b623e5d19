#pragma once

#include "varns/field.hpp"
#include "varns/grid.hpp"
#include "varns/scenario.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace testing {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Surface velocity with no normal component on any wall: component i is
/// multiplied by a bump along axis i when that axis is a wall.
inline varns::VectorField tangential_field(const varns::Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    varns::VectorField v = varns::random_smooth_vector(g, rng);
    for (int i = 0; i < g.dim(); ++i) {
        if (g.boundary(i) != varns::Boundary::Wall) continue;
        const double L = g.extent(i);
        const int n = g.nodes(i);
        for (int t = 0; t < g.time_nodes(); ++t)
            for (std::size_t s = 0; s < g.space_size(); ++s) {
                const int k = g.space_multi_index(s)[i];
                const double x = g.coordinate(i, k);
                v[i].at(s, t) *= (k == 0 || k == n - 1) ? 0.0 : x * (L - x);
            }
    }
    return v;
}

/// Closed-form solution of y'' + 2a y' + b y = 0, y(0) = alpha, y(1) = beta,
/// from the complex roots of the characteristic polynomial.
inline double characteristic_solution(double a, double b, double alpha, double beta, double x) {
    using C = std::complex<double>;
    const C disc = std::sqrt(C(a * a - b, 0.0));
    const C r1 = -a + disc, r2 = -a - disc;
    if (std::abs(r1 - r2) < 1e-12) {
        // Repeated root: y = (c1 + c2 x) e^{r x}.
        const double r = -a;
        const double c1 = alpha;
        const double c2 = beta * std::exp(-r) - alpha;
        return (c1 + c2 * x) * std::exp(r * x);
    }
    // y = c1 e^{r1 x} + c2 e^{r2 x}
    const C e1 = std::exp(r1), e2 = std::exp(r2);
    const C c2 = (C(beta) - C(alpha) * e1) / (e2 - e1);
    const C c1 = C(alpha) - c2;
    return (c1 * std::exp(r1 * x) + c2 * std::exp(r2 * x)).real();
}

inline double max_abs_diff(const varns::ScalarField& a, const varns::ScalarField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

/// Straight-line evaluation of J on a 2D periodic space-time grid: central
/// differences in space, second-order one-sided differences at the end times,
/// rectangle rule in space and trapezoid in time. A single time node drops
/// the time-derivative terms.
inline double brute_force_J(const varns::FieldQuartet& q, double nu) {
    const varns::Grid& g = q.grid();
    const int nx = g.nodes(0), ny = g.nodes(1), T = g.time_nodes();
    const double hx = g.spacing(0), hy = g.spacing(1), dt = g.dt();
    auto at = [&](const varns::ScalarField& f, int i, int j, int k) {
        i = (i + nx) % nx;
        j = (j + ny) % ny;
        return f[static_cast<std::size_t>(k) * nx * ny + static_cast<std::size_t>(i) * ny + j];
    };
    auto dx = [&](const varns::ScalarField& f, int i, int j, int k) {
        return (at(f, i + 1, j, k) - at(f, i - 1, j, k)) / (2 * hx);
    };
    auto dy = [&](const varns::ScalarField& f, int i, int j, int k) {
        return (at(f, i, j + 1, k) - at(f, i, j - 1, k)) / (2 * hy);
    };
    auto dtf = [&](const varns::ScalarField& f, int i, int j, int k) {
        if (k == 0) return (-3 * at(f, i, j, 0) + 4 * at(f, i, j, 1) - at(f, i, j, 2)) / (2 * dt);
        if (k == T - 1) return (3 * at(f, i, j, k) - 4 * at(f, i, j, k - 1) + at(f, i, j, k - 2)) / (2 * dt);
        return (at(f, i, j, k + 1) - at(f, i, j, k - 1)) / (2 * dt);
    };
    // H(a, q, b) = nu/2 |grad a|^2 + 1/2 (b_i + a_i) a_j d_j b_i + a_i d_i q + 1/2 a_i d_t b_i
    auto H = [&](const varns::VectorField& a, const varns::ScalarField& pq, const varns::VectorField& b, int i, int j, int k) {
        double v = 0.0;
        for (int c = 0; c < 2; ++c) {
            v += 0.5 * nu * (std::pow(dx(a[c], i, j, k), 2) + std::pow(dy(a[c], i, j, k), 2));
            const double adv = at(a[0], i, j, k) * dx(b[c], i, j, k) + at(a[1], i, j, k) * dy(b[c], i, j, k);
            v += 0.5 * (at(b[c], i, j, k) + at(a[c], i, j, k)) * adv;
            if (T > 1) v += 0.5 * at(a[c], i, j, k) * dtf(b[c], i, j, k);
        }
        v += at(a[0], i, j, k) * dx(pq, i, j, k) + at(a[1], i, j, k) * dy(pq, i, j, k);
        return v;
    };
    double J = 0.0;
    for (int k = 0; k < T; ++k) {
        const double wt = T == 1 ? 1.0 : (k == 0 || k == T - 1) ? 0.5 * dt : dt;
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                J += wt * hx * hy * (H(q.u, q.p, q.w, i, j, k) - H(q.w, q.r, q.u, i, j, k));
    }
    return J;
}

} // namespace testing
