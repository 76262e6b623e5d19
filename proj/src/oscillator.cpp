#include "varns/oscillator.hpp"

#include "varns/operators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace varns {
namespace {

constexpr double resonance_tol = 1e-9;

Grid line_grid(int n) { return Grid::uniform(1, 1.0, n, Boundary::Wall); }

ScalarField as_field(const Grid& g, const std::vector<double>& y) { return ScalarField(g, y); }

void check_lengths(const std::vector<double>& y1, const std::vector<double>& y2,
                   const OscillatorProblem& pb) {
    if (pb.n < 4) throw DomainError("oscillator problems need n >= 4");
    if (static_cast<int>(y1.size()) != pb.n || static_cast<int>(y2.size()) != pb.n)
        throw DomainError("node arrays must have problem.n entries");
}

} // namespace

std::optional<int> OscillatorProblem::resonance() const {
    const double disc = b - a * a;
    if (disc <= 0.0) return std::nullopt;
    const double ratio = std::sqrt(disc) / std::numbers::pi;
    const double m = std::round(ratio);
    if (m >= 1.0 && std::abs(ratio - m) < resonance_tol) return static_cast<int>(m);
    return std::nullopt;
}

std::vector<double> OscillatorProblem::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = i * spacing();
    return x;
}

ResonanceError::ResonanceError(int m)
    : DomainError("resonant oscillator: b - a^2 = m^2 pi^2 with m = " + std::to_string(m)), m_(m) {}

double oscillator_functional(const std::vector<double>& y1, const std::vector<double>& y2,
                             const OscillatorProblem& pb) {
    check_lengths(y1, y2, pb);
    const Grid g = line_grid(pb.n);
    const ScalarField f1 = as_field(g, y1), f2 = as_field(g, y2);
    const ScalarField d1 = gradient(f1, 0), d2 = gradient(f2, 0);
    ScalarField integrand(g);
    for (int i = 0; i < pb.n; ++i) {
        const double first = d1[i] * d1[i] - 2.0 * pb.a * d2[i] * y1[i] - pb.b * y1[i] * y1[i];
        const double second = d2[i] * d2[i] - 2.0 * pb.a * d1[i] * y2[i] - pb.b * y2[i] * y2[i];
        integrand[i] = 0.5 * (first - second);
    }
    return integrate_space(integrand, 0);
}

OscillatorSolution solve_oscillator_vp(const OscillatorProblem& pb) {
    if (pb.n < 4) throw DomainError("oscillator problems need n >= 4");
    if (auto m = pb.resonance()) throw ResonanceError(*m);

    // Unknown ordering: y1 at nodes 0..n-1, then y2.
    const int n = pb.n;
    const double h = pb.spacing();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
    for (int field = 0; field < 2; ++field) {
        const int self = field * n, other = (1 - field) * n;
        A(self, self) = 1.0;
        rhs(self) = pb.alpha;
        A(self + n - 1, self + n - 1) = 1.0;
        rhs(self + n - 1) = pb.beta;
        for (int i = 1; i < n - 1; ++i) {
            const int row = self + i;
            A(row, self + i - 1) += 1.0 / (h * h);
            A(row, self + i) += -2.0 / (h * h) + pb.b;
            A(row, self + i + 1) += 1.0 / (h * h);
            A(row, other + i - 1) += -pb.a / h;
            A(row, other + i + 1) += pb.a / h;
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15)) throw NumericalError("oscillator system is numerically singular");
    const Eigen::VectorXd y = lu.solve(rhs);
    if (!y.allFinite()) throw NumericalError("oscillator solve produced non-finite values");

    OscillatorSolution sol;
    sol.x = pb.nodes();
    sol.rcond = rcond;
    sol.y1.assign(y.data(), y.data() + n);
    sol.y2.assign(y.data() + n, y.data() + 2 * n);
    // Dirichlet rows are identities, so the end values are exact.
    sol.y1.front() = sol.y2.front() = pb.alpha;
    sol.y1.back() = sol.y2.back() = pb.beta;
    sol.y_mean.resize(n);
    sol.y_diff.resize(n);
    for (int i = 0; i < n; ++i) {
        sol.y_mean[i] = 0.5 * (sol.y1[i] + sol.y2[i]);
        sol.y_diff[i] = 0.5 * (sol.y1[i] - sol.y2[i]);
    }
    sol.functional_value = oscillator_functional(sol.y1, sol.y2, pb);
    return sol;
}

double galerkin_identity_residual(const std::vector<double>& y1, const std::vector<double>& y2,
                                  const OscillatorProblem& pb) {
    check_lengths(y1, y2, pb);
    const double tol = 1e-12 * (1.0 + std::abs(pb.alpha) + std::abs(pb.beta));
    const double end0 = 0.5 * (y1.front() - y2.front());
    const double end1 = 0.5 * (y1.back() - y2.back());
    if (std::abs(end0) > tol || std::abs(end1) > tol)
        throw PreconditionError("half difference must vanish at both end nodes");

    const Grid g = line_grid(pb.n);
    ScalarField mean(g), diff(g);
    for (int i = 0; i < pb.n; ++i) {
        mean[i] = 0.5 * (y1[i] + y2[i]);
        diff[i] = 0.5 * (y1[i] - y2[i]);
    }
    const ScalarField d1 = gradient(mean, 0), d2 = laplacian(mean);
    ScalarField weighted(g);
    for (int i = 0; i < pb.n; ++i)
        weighted[i] = diff[i] * (d2[i] + 2.0 * pb.a * d1[i] + pb.b * mean[i]);
    return std::abs(oscillator_functional(y1, y2, pb) + 2.0 * integrate_space(weighted, 0));
}

double oscillator_exact(const OscillatorProblem& pb, double x) {
    // y = e^{-ax} (A c(x) + B s(x)) with c, s the even/odd fundamental pair of
    // z'' = (a^2 - b) z.
    const double disc = pb.b - pb.a * pb.a;
    auto c = [&](double t) {
        if (disc > 0) return std::cos(std::sqrt(disc) * t);
        if (disc < 0) return std::cosh(std::sqrt(-disc) * t);
        return 1.0;
    };
    auto s = [&](double t) {
        if (disc > 0) return std::sin(std::sqrt(disc) * t);
        if (disc < 0) return std::sinh(std::sqrt(-disc) * t);
        return t;
    };
    const double A = pb.alpha;
    const double B = (pb.beta * std::exp(pb.a) - A * c(1.0)) / s(1.0);
    return std::exp(-pb.a * x) * (A * c(x) + B * s(x));
}

} // namespace varns
