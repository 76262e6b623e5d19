#include "varns/scenario.hpp"

#include "varns/errors.hpp"
#include "varns/operators.hpp"

#include <cmath>
#include <numbers>

namespace varns {

ScalarField random_smooth_scalar(const Grid& g, std::mt19937_64& rng, int modes, double amplitude) {
    std::uniform_int_distribution<int> wave(1, 2);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    ScalarField out(g);
    const double tau = g.tau() > 0.0 ? g.tau() : 1.0;
    for (int m = 0; m < modes; ++m) {
        std::array<double, 3> k{}, ph{};
        for (int a = 0; a < g.dim(); ++a) {
            k[a] = 2.0 * std::numbers::pi * wave(rng) / g.extent(a);
            ph[a] = phase(rng);
        }
        const double c = amplitude * coeff(rng) / modes;
        const double omega = 2.0 * std::numbers::pi * coeff(rng) / tau;
        const double pt = phase(rng);
        const int dim = g.dim();
        out += ScalarField::sample(g, [&](const std::array<double, 3>& x, double t) {
            double v = c * (1.0 + 0.3 * std::sin(omega * t + pt));
            for (int a = 0; a < dim; ++a) v *= std::sin(k[a] * x[a] + ph[a]) + 0.5;
            return v;
        });
    }
    return out;
}

VectorField random_smooth_vector(const Grid& g, std::mt19937_64& rng, int modes, double amplitude) {
    std::vector<ScalarField> comps;
    for (int i = 0; i < g.dim(); ++i) comps.push_back(random_smooth_scalar(g, rng, modes, amplitude));
    return VectorField(std::move(comps));
}

ScalarField wall_bump(const Grid& g) {
    const int dim = g.dim();
    std::array<bool, 3> wall{};
    std::array<double, 3> L{};
    for (int a = 0; a < dim; ++a) {
        wall[a] = g.boundary(a) == Boundary::Wall;
        L[a] = g.extent(a);
    }
    ScalarField b = ScalarField::sample(g, [&](const std::array<double, 3>& x, double) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a)
            if (wall[a]) v *= 4.0 * x[a] * (L[a] - x[a]) / (L[a] * L[a]);
        return v;
    });
    // Exact zeros on the walls regardless of rounding in the coordinates.
    for (int t = 0; t < g.time_nodes(); ++t)
        for (std::size_t s = 0; s < g.space_size(); ++s)
            if (g.on_wall(s)) b.at(s, t) = 0.0;
    return b;
}

ScalarField time_bump(const Grid& g) {
    ScalarField b(g, 1.0);
    if (g.steady()) return b;
    const double tau = g.tau();
    for (int t = 0; t < g.time_nodes(); ++t) {
        const double tt = g.time(t);
        const double v = (t == 0 || t == g.time_nodes() - 1) ? 0.0 : 4.0 * tt * (tau - tt) / (tau * tau);
        for (std::size_t s = 0; s < g.space_size(); ++s) b.at(s, t) = v;
    }
    return b;
}

VectorField discrete_curl(const VectorField& A) {
    const Grid& g = A.grid();
    if (g.dim() == 2) {
        std::vector<ScalarField> c{gradient(A[0], 1), -1.0 * gradient(A[0], 0)};
        return VectorField(std::move(c));
    }
    if (g.dim() == 3) {
        std::vector<ScalarField> c;
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            c.push_back(gradient(A[k], j) - gradient(A[j], k));
        }
        return VectorField(std::move(c));
    }
    throw DomainError("discrete curl needs a 2D or 3D grid");
}

FieldQuartet random_quartet(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FieldQuartet q;
    q.u = random_smooth_vector(g, rng);
    q.p = random_smooth_scalar(g, rng);
    q.w = random_smooth_vector(g, rng);
    q.r = random_smooth_scalar(g, rng);
    return q;
}

FieldQuartet random_difference_quartet(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VectorField mean = g.dim() == 1 ? random_smooth_vector(g, rng)
                                    : discrete_curl(random_smooth_vector(g, rng));
    if (g.dim() == 1) {
        // The only solenoidal 1D fields are constants in space.
        for (std::size_t n = 0; n < mean[0].size(); ++n) mean[0][n] = 0.7;
    }
    VectorField diff = random_smooth_vector(g, rng, 3, 0.5);
    const ScalarField bump = wall_bump(g);
    for (int i = 0; i < g.dim(); ++i) diff[i] = hadamard(diff[i], bump);
    FieldQuartet q;
    q.u = mean + diff;
    q.w = mean - diff;
    q.p = random_smooth_scalar(g, rng);
    q.r = random_smooth_scalar(g, rng);
    return q;
}

FieldQuartet random_admissible_direction(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const ScalarField bump = wall_bump(g);
    const ScalarField tb = time_bump(g);
    FieldQuartet d;
    d.u = random_smooth_vector(g, rng);
    const VectorField extra = random_smooth_vector(g, rng);
    d.w = d.u;
    for (int i = 0; i < g.dim(); ++i) {
        d.u[i] = hadamard(d.u[i], bump);
        // w differs from u only away from the end times.
        d.w[i] = d.u[i] + hadamard(hadamard(extra[i], bump), tb);
    }
    d.p = random_smooth_scalar(g, rng);
    d.r = d.p + hadamard(random_smooth_scalar(g, rng), bump);
    return d;
}

} // namespace varns
