#include "support.hpp"

#include "varns/oscillator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace varns;

namespace {

double max_error(const OscillatorProblem& pb) {
    const OscillatorSolution sol = solve_oscillator_vp(pb);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.x.size(); ++i)
        err = std::max(err, std::abs(sol.y_mean[i] -
                                     testing::characteristic_solution(pb.a, pb.b, pb.alpha, pb.beta, sol.x[i])));
    return err;
}

struct Pair {
    std::vector<double> y1, y2;
};

Pair smooth_pair(int n, double shift) {
    Pair p;
    const double h = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double x = i * h;
        const double mean = std::sin(1.3 * x + shift) + x * x;
        const double diff = 0.4 * std::sin(std::numbers::pi * x) * std::exp(x);
        p.y1.push_back(mean + diff);
        p.y2.push_back(mean - diff);
    }
    // The pinned ends must agree exactly.
    p.y2.front() = p.y1.front();
    p.y2.back() = p.y1.back();
    return p;
}

double galerkin(int n, const OscillatorProblem& base, double shift) {
    OscillatorProblem pb = base;
    pb.n = n;
    const Pair p = smooth_pair(n, shift);
    return galerkin_identity_residual(p.y1, p.y2, pb);
}

} // namespace

TEST_SUITE("oscillator-vp") {

TEST_CASE("resonance is detected with the right mode number") {
    for (int m : {1, 2, 3}) {
        const double a = 0.5 * m;
        OscillatorProblem pb{a, a * a + m * m * std::numbers::pi * std::numbers::pi, 0.0, 1.0, 33};
        REQUIRE(pb.resonance().has_value());
        CHECK(*pb.resonance() == m);
        CHECK_FALSE(pb.well_posed());
        try {
            solve_oscillator_vp(pb);
            FAIL("expected a resonance error");
        } catch (const ResonanceError& e) {
            CHECK(e.m() == m);
        }
    }
    CHECK(OscillatorProblem{1.0, 20.0, 0.0, 1.0, 33}.well_posed());
    CHECK(OscillatorProblem{2.0, 1.0, 0.0, 1.0, 33}.well_posed());
}

TEST_CASE("closed form in the library agrees with the complex-root oracle") {
    for (const auto& pb : {OscillatorProblem{1.0, 20.0, 0.0, 1.0}, OscillatorProblem{2.0, 1.0, 0.5, -1.0},
                           OscillatorProblem{1.0, 1.0, 1.0, 2.0}, OscillatorProblem{0.0, 4.0, 1.0, 0.0}})
        for (double x : {0.0, 0.2, 0.5, 0.9, 1.0})
            CHECK(oscillator_exact(pb, x) ==
                  doctest::Approx(testing::characteristic_solution(pb.a, pb.b, pb.alpha, pb.beta, x)).epsilon(1e-12));
}

TEST_CASE("underdamped, overdamped and critical cases converge at second order") {
    for (auto pb : {OscillatorProblem{1.0, 20.0, 0.0, 1.0}, OscillatorProblem{3.0, 2.0, 1.0, 0.5},
                    OscillatorProblem{1.5, 2.25, -1.0, 1.0}}) {
        pb.n = 33;
        const double e1 = max_error(pb);
        pb.n = 65;
        const double e2 = max_error(pb);
        pb.n = 129;
        const double e3 = max_error(pb);
        CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("the two fields coincide and hit the boundary values") {
    const OscillatorSolution sol = solve_oscillator_vp({1.0, 20.0, 0.25, 1.0, 65});
    CHECK(sol.y1.front() == 0.25);
    CHECK(sol.y2.back() == 1.0);
    double peak = 0.0, gap = 0.0;
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        peak = std::max(peak, std::abs(sol.y_mean[i]));
        gap = std::max(gap, std::abs(sol.y_diff[i]));
        CHECK(sol.y_mean[i] == doctest::Approx(0.5 * (sol.y1[i] + sol.y2[i])));
    }
    CHECK(gap <= 1e-8 * peak);
    CHECK(sol.rcond > 0.0);
}

TEST_CASE("functional is antisymmetric and vanishes on equal fields") {
    const OscillatorProblem pb{1.0, 20.0, 0.0, 1.0, 41};
    const Pair p = smooth_pair(pb.n, 0.3);
    const double j = oscillator_functional(p.y1, p.y2, pb);
    CHECK(j != 0.0);
    CHECK(oscillator_functional(p.y2, p.y1, pb) == doctest::Approx(-j).epsilon(1e-14));
    CHECK(oscillator_functional(p.y1, p.y1, pb) == 0.0);
}

TEST_CASE("Galerkin identity residual decays at second order") {
    const OscillatorProblem pb{1.0, 20.0, 0.0, 1.0, 0};
    for (double shift : {0.0, 0.7}) {
        const double r1 = galerkin(33, pb, shift), r2 = galerkin(65, pb, shift), r3 = galerkin(129, pb, shift);
        CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
        CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.2));
    }
}

TEST_CASE("Galerkin identity rejects pairs whose difference does not vanish at the ends") {
    const OscillatorProblem pb{1.0, 20.0, 0.0, 1.0, 17};
    Pair p = smooth_pair(pb.n, 0.0);
    p.y2.back() += 0.1;
    CHECK_THROWS_AS(galerkin_identity_residual(p.y1, p.y2, pb), PreconditionError);
    CHECK_THROWS_AS(oscillator_functional(std::vector<double>(3), std::vector<double>(3), pb), DomainError);
}

} // TEST_SUITE
