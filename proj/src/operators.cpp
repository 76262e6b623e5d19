#include "varns/operators.hpp"

#include "varns/errors.hpp"

#include <array>
#include <string>

namespace varns {
namespace {

struct Tap {
    int offset; // absolute position along the line
    double coeff;
};

using Stencil = std::vector<Tap>;

int wrap(int i, int n) { return ((i % n) + n) % n; }

Stencil first_derivative_stencil(int n, int i, Boundary b, double h) {
    const double c = 1.0 / (2.0 * h);
    if (b == Boundary::Periodic) return {{wrap(i - 1, n), -c}, {wrap(i + 1, n), c}};
    if (i == 0) return {{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}};
    if (i == n - 1) return {{n - 1, 3.0 * c}, {n - 2, -4.0 * c}, {n - 3, c}};
    return {{i - 1, -c}, {i + 1, c}};
}

Stencil second_derivative_stencil(int n, int i, Boundary b, double h) {
    const double c = 1.0 / (h * h);
    if (b == Boundary::Periodic) return {{wrap(i - 1, n), c}, {i, -2.0 * c}, {wrap(i + 1, n), c}};
    if (i == 0) {
        if (n >= 4) return {{0, 2.0 * c}, {1, -5.0 * c}, {2, 4.0 * c}, {3, -c}};
        return {{0, c}, {1, -2.0 * c}, {2, c}};
    }
    if (i == n - 1) {
        if (n >= 4) return {{n - 1, 2.0 * c}, {n - 2, -5.0 * c}, {n - 3, 4.0 * c}, {n - 4, -c}};
        return {{n - 1, c}, {n - 2, -2.0 * c}, {n - 3, c}};
    }
    return {{i - 1, c}, {i, -2.0 * c}, {i + 1, c}};
}

enum class Order { First, Second };

Stencil axis_stencil(const Grid& g, int axis, int i, Order order) {
    return order == Order::First
               ? first_derivative_stencil(g.nodes(axis), i, g.boundary(axis), g.spacing(axis))
               : second_derivative_stencil(g.nodes(axis), i, g.boundary(axis), g.spacing(axis));
}

/// Visits every (row, column, coefficient) of a spatial axis operator.
template <class Fn>
void for_each_axis_tap(const Grid& g, int axis, Order order, Fn&& fn) {
    const std::size_t stride = g.stride(axis);
    const std::size_t S = g.space_size();
    for (std::size_t s = 0; s < S; ++s) {
        const int i = g.space_multi_index(s)[axis];
        const std::size_t base = s - static_cast<std::size_t>(i) * stride;
        for (const Tap& t : axis_stencil(g, axis, i, order))
            fn(s, base + static_cast<std::size_t>(t.offset) * stride, t.coeff);
    }
}

ScalarField apply_axis(const ScalarField& f, int axis, Order order) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim())
        throw DomainError("axis " + std::to_string(axis) + " out of range for a " +
                          std::to_string(g.dim()) + "D grid");
    ScalarField out(g);
    const std::size_t S = g.space_size();
    for_each_axis_tap(g, axis, order, [&](std::size_t row, std::size_t col, double c) {
        for (int k = 0; k < g.time_nodes(); ++k) out[k * S + row] += c * f[k * S + col];
    });
    return out;
}

void check_time(const Grid& g) {
    if (g.time_nodes() < 3) throw DomainError("time derivative needs at least 3 time nodes");
}

std::vector<double> axis_weights(const Grid& g, int axis) {
    const int n = g.nodes(axis);
    const double h = g.spacing(axis);
    std::vector<double> w(static_cast<std::size_t>(n), h);
    if (g.boundary(axis) == Boundary::Wall) {
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
    }
    return w;
}

} // namespace

ScalarField gradient(const ScalarField& f, int axis) { return apply_axis(f, axis, Order::First); }

ScalarField second_derivative(const ScalarField& f, int axis) {
    return apply_axis(f, axis, Order::Second);
}

ScalarField divergence(const VectorField& v) {
    ScalarField out(v.grid());
    for (int i = 0; i < v.dim(); ++i) out += gradient(v[i], i);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid());
    for (int a = 0; a < f.grid().dim(); ++a) out += second_derivative(f, a);
    return out;
}

ScalarField time_derivative(const ScalarField& f) {
    const Grid& g = f.grid();
    check_time(g);
    ScalarField out(g);
    const int T = g.time_nodes();
    const std::size_t S = g.space_size();
    for (int k = 0; k < T; ++k) {
        const Stencil st = first_derivative_stencil(T, k, Boundary::Wall, g.dt());
        for (const Tap& t : st)
            for (std::size_t s = 0; s < S; ++s) out[k * S + s] += t.coeff * f[t.offset * S + s];
    }
    return out;
}

std::vector<double> space_weights(const Grid& g) {
    std::vector<double> w(g.space_size(), 1.0);
    for (int a = 0; a < g.dim(); ++a) {
        const auto wa = axis_weights(g, a);
        for (std::size_t s = 0; s < w.size(); ++s) w[s] *= wa[g.space_multi_index(s)[a]];
    }
    return w;
}

std::vector<double> time_weights(const Grid& g) {
    const int T = g.time_nodes();
    if (T == 1) return {1.0};
    std::vector<double> w(static_cast<std::size_t>(T), g.dt());
    w.front() = 0.5 * g.dt();
    w.back() = 0.5 * g.dt();
    return w;
}

double integrate_space(const ScalarField& f, int time) {
    const Grid& g = f.grid();
    if (time < 0 || time >= g.time_nodes()) throw DomainError("time index out of range");
    const auto w = space_weights(g);
    const auto vals = f.slice(time);
    double sum = 0.0;
    for (std::size_t s = 0; s < w.size(); ++s) sum += w[s] * vals[s];
    return sum;
}

double integrate_spacetime(const ScalarField& f) {
    const auto wt = time_weights(f.grid());
    double sum = 0.0;
    for (int k = 0; k < f.grid().time_nodes(); ++k) sum += wt[k] * integrate_space(f, k);
    return sum;
}

std::vector<BoundaryFace> boundary_faces(const Grid& g) {
    std::vector<BoundaryFace> faces;
    std::array<std::vector<double>, Grid::max_dim> w;
    for (int a = 0; a < g.dim(); ++a) w[a] = axis_weights(g, a);
    for (int a = 0; a < g.dim(); ++a) {
        if (g.boundary(a) != Boundary::Wall) continue;
        for (int side = 0; side < 2; ++side) {
            BoundaryFace face;
            face.axis = a;
            face.side = side;
            face.normal_sign = side == 0 ? -1.0 : 1.0;
            const int fixed = side == 0 ? 0 : g.nodes(a) - 1;
            for (std::size_t s = 0; s < g.space_size(); ++s) {
                const auto idx = g.space_multi_index(s);
                if (idx[a] != fixed) continue;
                double weight = 1.0;
                for (int b = 0; b < g.dim(); ++b)
                    if (b != a) weight *= w[b][idx[b]];
                face.nodes.push_back(s);
                face.weights.push_back(weight);
            }
            faces.push_back(std::move(face));
        }
    }
    return faces;
}

double boundary_integral(const VectorField& flux, int time) {
    const Grid& g = flux.grid();
    if (time < 0 || time >= g.time_nodes()) throw DomainError("time index out of range");
    double sum = 0.0;
    for (const auto& face : boundary_faces(g)) {
        const auto vals = flux[face.axis].slice(time);
        for (std::size_t k = 0; k < face.nodes.size(); ++k)
            sum += face.normal_sign * face.weights[k] * vals[face.nodes[k]];
    }
    return sum;
}

namespace {

SparseMatrix axis_matrix(const Grid& g, int axis, Order order) {
    if (axis < 0 || axis >= g.dim()) throw DomainError("axis out of range");
    const std::size_t S = g.space_size();
    std::vector<Eigen::Triplet<double>> trips;
    for_each_axis_tap(g, axis, order, [&](std::size_t row, std::size_t col, double c) {
        for (int k = 0; k < g.time_nodes(); ++k)
            trips.emplace_back(static_cast<int>(k * S + row), static_cast<int>(k * S + col), c);
    });
    SparseMatrix m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

} // namespace

SparseMatrix gradient_matrix(const Grid& g, int axis) { return axis_matrix(g, axis, Order::First); }

SparseMatrix laplacian_matrix(const Grid& g) {
    SparseMatrix m = axis_matrix(g, 0, Order::Second);
    for (int a = 1; a < g.dim(); ++a) m += axis_matrix(g, a, Order::Second);
    return m;
}

SparseMatrix time_derivative_matrix(const Grid& g) {
    check_time(g);
    const int T = g.time_nodes();
    const std::size_t S = g.space_size();
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < T; ++k)
        for (const Tap& t : first_derivative_stencil(T, k, Boundary::Wall, g.dt()))
            for (std::size_t s = 0; s < S; ++s)
                trips.emplace_back(static_cast<int>(k * S + s), static_cast<int>(t.offset * S + s),
                                   t.coeff);
    SparseMatrix m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

} // namespace varns
