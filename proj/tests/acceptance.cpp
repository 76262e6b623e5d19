#include "support.hpp"

#include "varns/boundary.hpp"
#include "varns/energy.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"
#include "varns/oscillator.hpp"
#include "varns/solver.hpp"
#include "varns/steady.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace varns;
using testing::two_pi;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// 1. Oscillator recovery.
Verdict oscillator_recovery() {
    Verdict v;
    std::vector<double> errors;
    double worst_gap = 0.0;
    for (int intervals : {64, 128, 256, 512}) {
        const OscillatorProblem pb{1.0, 20.0, 0.0, 1.0, intervals + 1};
        const OscillatorSolution sol = solve_oscillator_vp(pb);
        double err = 0.0, peak = 0.0, gap = 0.0;
        for (std::size_t i = 0; i < sol.x.size(); ++i) {
            err = std::max(err, std::abs(sol.y_mean[i] - testing::characteristic_solution(1.0, 20.0, 0.0, 1.0, sol.x[i])));
            peak = std::max(peak, std::abs(sol.y_mean[i]));
            gap = std::max(gap, std::abs(sol.y_diff[i]));
        }
        errors.push_back(err);
        worst_gap = std::max(worst_gap, gap / peak);
        v.require(gap <= 1e-8 * peak, "max|ybar| <= 1e-8 max|y_mean| at n=" + std::to_string(intervals));
    }
    v.detail << "orders";
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double order = std::log2(errors[k - 1] / errors[k]);
        v.detail << " " << order;
        v.require(within(order, 2.0, 0.2), "order 2 +- 0.2");
    }
    v.detail << "; max|ybar|/max|y_mean| " << worst_gap;
    for (int m : {1, 2}) {
        const double b = 1.0 + m * m * std::numbers::pi * std::numbers::pi;
        int reported = 0;
        try {
            solve_oscillator_vp({1.0, b, 0.0, 1.0, 65});
        } catch (const ResonanceError& e) {
            reported = e.m();
        }
        v.detail << "; resonance m=" << m << " -> " << reported;
        v.require(reported == m, "resonance rejected with m=" + std::to_string(m));
    }
    return v;
}

// 2. Galerkin identity.
Verdict galerkin_identity() {
    Verdict v;
    const OscillatorProblem base{1.0, 20.0, 0.0, 1.0, 0};
    struct PairSpec {
        std::function<double(double)> mean, diff;
    };
    const std::vector<PairSpec> pairs{
        {[](double x) { return std::sin(1.3 * x) + x * x; },
         [](double x) { return 0.4 * std::sin(std::numbers::pi * x) * std::exp(x); }},
        {[](double x) { return std::cos(2.0 * x) * std::exp(-x); }, [](double x) { return x * (1.0 - x); }},
        {[](double x) { return 1.0 + x; }, [](double x) { return std::sin(2.0 * std::numbers::pi * x) * (1.0 + x); }}};
    v.detail << "ratios";
    for (const auto& p : pairs) {
        std::vector<double> res;
        // Pairs with a small leading error term need fine grids to be asymptotic.
        for (int n : {513, 1025, 2049, 4097}) {
            OscillatorProblem pb = base;
            pb.n = n;
            std::vector<double> y1(n), y2(n);
            for (int i = 0; i < n; ++i) {
                const double x = static_cast<double>(i) / (n - 1);
                y1[i] = p.mean(x) + p.diff(x);
                y2[i] = p.mean(x) - p.diff(x);
            }
            y2.front() = y1.front();
            y2.back() = y1.back();
            res.push_back(galerkin_identity_residual(y1, y2, pb));
        }
        for (std::size_t k = 1; k < res.size(); ++k) {
            const double ratio = res[k - 1] / res[k];
            v.detail << " " << ratio;
            v.require(within(ratio, 4.0, 0.8), "ratio 4 +- 20%");
        }
    }
    return v;
}

// 3. Antisymmetry and fixed point for J, J^s and I.
Verdict antisymmetry() {
    Verdict v;
    const Grid unsteady = Grid::uniform(2, 1.0, 9, Boundary::Wall, 5, 0.1);
    const Grid steady = Grid::uniform(3, 1.0, 6, Boundary::Wall);
    const Grid mixed(2, {1.0, two_pi, 1.0}, {9, 8, 1}, {Boundary::Wall, Boundary::Periodic, Boundary::Wall}, 4, 0.1);
    double worst_swap = 0.0, worst_fixed = 0.0;
    int trials = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FieldQuartet q = random_quartet(unsteady, seed);
        const double J = evaluate_lagrangian(q, 0.2).J;
        worst_swap = std::max(worst_swap, std::abs(J + swap_functional(q, 0.2)) / std::abs(J));

        const FieldQuartet s = random_quartet(steady, seed);
        const double Js = steady_functional(s, 0.2);
        worst_swap = std::max(worst_swap, std::abs(Js + steady_functional(s.swapped(), 0.2)) / std::abs(Js));

        const FieldQuartet m = random_quartet(mixed, seed);
        const SurfaceData surf{testing::tangential_field(mixed, seed), testing::tangential_field(mixed, seed + 50)};
        const double I = extended_functional(m, surf, 0.2).I;
        const double Iswap = extended_functional(m.swapped(), {surf.w_s, surf.u_s}, 0.2).I;
        worst_swap = std::max(worst_swap, std::abs(I + Iswap) / std::abs(I));

        for (FieldQuartet f : {q, s, m}) {
            f.w = f.u;
            f.r = f.p;
            const double scale = evaluate_lagrangian(f, 0.2).magnitude;
            double value = evaluate_lagrangian(f, 0.2).J;
            if (f.grid().steady()) value = steady_functional(f, 0.2);
            if (f.grid() == mixed) value = extended_functional(f, {surf.u_s, surf.u_s}, 0.2).I;
            worst_fixed = std::max(worst_fixed, std::abs(value) / scale);
        }
        trials += 3;
    }
    v.detail << trials << " quartets; max |J+Jswap|/|J| " << worst_swap << "; max |J(u,p,u,p)|/scale "
             << worst_fixed;
    v.require(worst_swap <= 1e-12, "swap antisymmetry 1e-12");
    v.require(worst_fixed <= 1e-13, "fixed point 1e-13");
    return v;
}

// 4. Gradient check.
Verdict gradient_check() {
    Verdict v;
    const Grid g = Grid::uniform(2, 1.0, 9, Boundary::Wall, 5, 0.1);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const FieldQuartet q = random_quartet(g, seed);
        const FieldQuartet d = random_admissible_direction(g, seed + 100);
        const double eps = 1e-5;
        const double fd =
            (evaluate_lagrangian(q + eps * d, 0.2).J - evaluate_lagrangian(q + (-eps) * d, 0.2).J) / (2 * eps);
        worst = std::max(worst, std::abs(first_variation(q, d, 0.2) - fd) / std::abs(fd));
    }
    v.detail << "6 pairs; max relative error " << worst;
    v.require(worst <= 1e-6, "relative error 1e-6");
    return v;
}

// 5. Manufactured Euler-Lagrange residual.
Verdict manufactured_residual() {
    Verdict v;
    std::vector<double> norms;
    for (int level = 0; level < 3; ++level) {
        const int scale = 1 << level;
        const Grid g = Grid::uniform(2, two_pi, 16 * scale, Boundary::Periodic, 10 * scale + 1, 0.02 / scale);
        const ELResiduals res = el_residuals(taylor_green(0.1, g), 0.1);
        double sq = 0.0;
        for (int i = 0; i < 2; ++i) {
            sq += integrate_spacetime(hadamard(res.res_u[i], res.res_u[i]));
            sq += integrate_spacetime(hadamard(res.res_w[i], res.res_w[i]));
        }
        norms.push_back(std::sqrt(sq));
    }
    v.detail << "ratios";
    for (std::size_t k = 1; k < norms.size(); ++k) {
        const double ratio = norms[k - 1] / norms[k];
        v.detail << " " << ratio;
        v.require(within(ratio, 4.0, 0.8), "ratio 4 +- 20%");
    }
    return v;
}

// 6. Energy identity and pointwise bound.
Verdict energy_identity() {
    Verdict v;
    const double nu = 0.2, A = 1.0, sigma = (10.0 * nu - A) / 6.0;
    std::vector<double> mismatch;
    for (int level = 0; level < 3; ++level) {
        const int scale = 1 << level;
        const Grid g = Grid::uniform(2, two_pi, 16 * scale, Boundary::Periodic, 9, 0.1 / scale);
        VectorField U(g), V(g);
        U[0] = ScalarField::sample(g, [&](const auto& x, double) { return A * std::sin(x[1]); });
        V[0] = ScalarField::sample(g, [&](const auto& x, double t) { return std::exp(sigma * t) * std::cos(x[0] + x[1]); });
        V[1] = ScalarField::sample(g, [&](const auto& x, double t) {
            return -std::exp(sigma * t) * (std::cos(x[0] + x[1]) + std::cos(x[0]));
        });
        const EnergySeries es = energy_series({U + V, ScalarField(g), U - V, ScalarField(g)}, nu);
        mismatch.push_back(*std::max_element(es.identity_mismatch.begin(), es.identity_mismatch.end()));
    }
    v.detail << "mismatch orders";
    for (std::size_t k = 1; k < mismatch.size(); ++k) {
        const double order = std::log2(mismatch[k - 1] / mismatch[k]);
        v.detail << " " << order;
        v.require(within(order, 2.0, 0.3), "second-order mismatch decay");
    }
    const std::vector<Grid> grids{Grid::uniform(2, 1.0, 9, Boundary::Wall, 5, 0.1),
                                  Grid::uniform(3, 1.0, 6, Boundary::Wall, 3, 0.1),
                                  Grid::uniform(2, two_pi, 12, Boundary::Periodic, 4, 0.2)};
    int trials = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const Grid& g : grids)
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const EnergySeries es = energy_series(random_difference_quartet(g, seed), 0.05);
            for (std::size_t k = 0; k < es.E.size(); ++k) {
                const double margin = (es.rhs[k] + 2.0 * es.m * es.E[k]) / es.scale;
                worst = std::min(worst, margin);
                v.require(margin >= -1e-10, "rhs + 2mE >= -1e-10 scale");
            }
            ++trials;
        }
    v.detail << "; " << trials << " randomized trials, min (rhs+2mE)/scale " << worst;
    return v;
}

// 7. Dual Newton uniqueness test.
Verdict dual_newton() {
    Verdict v;
    const double nu = 0.5;
    const Grid g = Grid::uniform(2, two_pi, 8, Boundary::Periodic, 6, 0.1);
    SolveConfig c;
    c.nu = nu;
    c.max_newton = 25;
    const FieldQuartet tg = taylor_green(nu, g);
    FieldQuartet seed = tg;
    std::mt19937_64 rng(7);
    const ScalarField phi = random_smooth_scalar(g, rng);
    for (int i = 0; i < 2; ++i) seed.w[i] = tg.u[i] + 0.1 * hadamard(tg.u[i], phi);
    const Trajectory tr = newton_dual(seed, extract_slice(tg.u, 0), c, g);
    v.detail << "iterations " << tr.iterations << "; u_w_gap " << tr.u_w_gap << "; |J|/scale "
             << std::abs(tr.J) / tr.J_scale;
    v.require(tr.converged, "converged");
    v.require(tr.iterations <= 25, "within 25 iterations");
    v.require(tr.u_w_gap <= 1e-8, "u_w_gap <= 1e-8");
    v.require(std::abs(tr.J) <= 1e-10 * tr.J_scale, "|J| <= 1e-10 scale");
    return v;
}

// 8. Steady certificate.
Verdict steady_certificate() {
    Verdict v;
    const Grid g = Grid::uniform(2, 1.0, 12, Boundary::Wall);
    const UniquenessCertificate zero = uniqueness_certificate(FieldQuartet::zeros(g), 0.5);
    v.require(zero.lhs == 0.0 && zero.satisfied, "zero fields satisfied with lhs 0");

    const FieldQuartet q = random_quartet(g, 17);
    const double base = uniqueness_certificate(q, 1.0).lhs;
    double worst_amp = 0.0, worst_nu = 0.0;
    for (double c : {0.5, 2.0, 10.0}) {
        const FieldQuartet s{c * q.u, q.p, c * q.w, q.r};
        worst_amp = std::max(worst_amp, std::abs(uniqueness_certificate(s, 1.0).lhs - c * base) / (c * base));
    }
    for (double nu : {0.1, 0.37, 4.0})
        worst_nu = std::max(worst_nu, std::abs(uniqueness_certificate(q, nu).lhs - base / nu) / (base / nu));
    v.require(worst_amp <= 1e-14, "lhs linear in amplitude");
    v.require(worst_nu <= 1e-14, "lhs scales as 1/nu");

    const std::vector<Grid> grids{g, Grid::uniform(3, 1.0, 7, Boundary::Wall),
                                  Grid::uniform(2, two_pi, 12, Boundary::Periodic)};
    double worst_margin = std::numeric_limits<double>::infinity();
    int trials = 0;
    for (const Grid& gg : grids)
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const InequalityAudit a = inequality_chain_audit(random_difference_quartet(gg, seed), 0.05);
            for (const auto& r : a.rows)
                if (r.name == "schwarz") worst_margin = std::min(worst_margin, r.margin / a.scale);
            ++trials;
        }
    v.require(worst_margin >= -1e-10, "Schwarz margin >= -1e-10 scale");
    char threshold[64];
    std::snprintf(threshold, sizeof threshold, "%.17g", zero.threshold);
    v.detail << "threshold " << threshold << " (quoted " << zero.quoted_threshold << "); amplitude dev " << worst_amp
             << "; 1/nu dev " << worst_nu << "; " << trials << " Schwarz trials, min margin/scale " << worst_margin;
    return v;
}

// 9. Boundary recovery.
Verdict boundary_recovery() {
    Verdict v;
    const Grid g = Grid::uniform(2, 1.0, 11, Boundary::Wall, 3, 0.1);
    const SurfaceData surf{testing::tangential_field(g, 7), testing::tangential_field(g, 57)};
    std::mt19937_64 rng(7);
    const ScalarField bump = wall_bump(g);
    FieldQuartet q = random_quartet(g, 7);
    const VectorField a = random_smooth_vector(g, rng), b = random_smooth_vector(g, rng);
    for (int i = 0; i < 2; ++i) {
        q.u[i] = surf.u_s[i] + hadamard(bump, a[i]);
        q.w[i] = hadamard(bump, b[i]);
    }
    const BoundaryAudit exact = boundary_recovery_audit(q, surf, 0.5);
    const double worst = std::max({exact.max_a, exact.max_b, exact.max_c, exact.max_d});
    v.require(worst <= 1e-12, "all checks <= 1e-12");
    v.detail << "exact max check " << worst << "; audit/eps";

    const VectorField du = random_smooth_vector(g, rng), dw = random_smooth_vector(g, rng);
    std::vector<std::array<double, 4>> slopes;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        FieldQuartet p = q;
        p.u = p.u + eps * du;
        p.w = p.w + eps * dw;
        const BoundaryAudit au = boundary_recovery_audit(p, surf, 0.5);
        slopes.push_back({au.max_a / eps, au.max_b / eps, au.max_c / eps, au.max_d / eps});
        v.detail << " (" << slopes.back()[0] << ", " << slopes.back()[1] << ", " << slopes.back()[2] << ", "
                 << slopes.back()[3] << ")";
    }
    for (int c = 0; c < 4; ++c) {
        v.require(slopes[0][c] > 0.0, "perturbation visible in every check");
        for (const auto& s : slopes) v.require(std::abs(s[c] / slopes[0][c] - 1.0) <= 0.05, "linear within 5%");
    }
    return v;
}

// 10. Solver verification.
Verdict solver_verification() {
    Verdict v;
    const double nu = 0.1, tau = 0.5;
    std::vector<double> err, ke_err;
    for (int level = 0; level < 3; ++level) {
        const int n = 16 << level;
        const double dt = 0.1 / (1 << level);
        const int T = static_cast<int>(std::lround(tau / dt)) + 1;
        const Grid g = Grid::uniform(2, two_pi, n, Boundary::Periodic, T, dt);
        SolveConfig c;
        c.nu = nu;
        const FieldQuartet exact = taylor_green(nu, g);
        const Trajectory tr = march_reduced(extract_slice(exact.u, 0), c, g);
        double num = 0.0, den = 0.0, ke0 = 0.0, ke1 = 0.0;
        for (int i = 0; i < 2; ++i)
            for (std::size_t s = 0; s < g.space_size(); ++s) {
                const double e = tr.state.u[i].at(s, T - 1) - exact.u[i].at(s, T - 1);
                num += e * e;
                den += std::pow(exact.u[i].at(s, T - 1), 2);
                ke0 += std::pow(tr.state.u[i].at(s, 0), 2);
                ke1 += std::pow(tr.state.u[i].at(s, T - 1), 2);
            }
        err.push_back(std::sqrt(num / den));
        ke_err.push_back(std::abs(ke1 / ke0 - std::exp(-4.0 * nu * tau)));
    }
    v.detail << "error orders";
    for (std::size_t k = 1; k < err.size(); ++k) {
        const double order = std::log2(err[k - 1] / err[k]);
        v.detail << " " << order;
        v.require(within(order, 2.0, 0.3), "L2 error order 2 +- 0.3");
    }
    v.detail << "; energy-decay orders";
    for (std::size_t k = 1; k < ke_err.size(); ++k) {
        const double order = std::log2(ke_err[k - 1] / ke_err[k]);
        v.detail << " " << order;
        v.require(within(order, 2.0, 0.3), "energy decay order 2 +- 0.3");
    }
    v.detail << "; finest |KE ratio - exp(-4 nu t)| " << ke_err.back();
    return v;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"oscillator recovery", oscillator_recovery},
        {"Galerkin identity", galerkin_identity},
        {"functional antisymmetry and fixed point", antisymmetry},
        {"gradient check", gradient_check},
        {"manufactured Euler-Lagrange residual", manufactured_residual},
        {"energy identity and bound", energy_identity},
        {"dual Newton uniqueness", dual_newton},
        {"steady certificate", steady_certificate},
        {"boundary recovery", boundary_recovery},
        {"solver verification", solver_verification}};
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        failures += !v.pass;
        std::printf("AC%zu %s %s: %s\n", k + 1, v.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
