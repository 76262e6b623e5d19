#include "support.hpp"

#include "varns/errors.hpp"
#include "varns/lagrangian.hpp"
#include "varns/operators.hpp"
#include "varns/solver.hpp"
#include "varns/steady.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace varns;
using testing::two_pi;

namespace {

constexpr double pi = std::numbers::pi;

FieldQuartet scaled(const FieldQuartet& q, double c) {
    return {c * q.u, q.p, c * q.w, q.r};
}

/// u = U + vbar, w = U - vbar on [0, pi]^2 with U = (y, 0) and
/// vbar = (sin x sin y, sin x sin y).
FieldQuartet box_state(int n) {
    const Grid g = Grid::uniform(2, pi, n, Boundary::Wall);
    VectorField U(g), V(g);
    U[0] = ScalarField::sample(g, [](const auto& x, double) { return x[1]; });
    const ScalarField b = ScalarField::sample(g, [](const auto& x, double) { return std::sin(x[0]) * std::sin(x[1]); });
    V[0] = b;
    V[1] = b;
    for (std::size_t s = 0; s < g.space_size(); ++s)
        if (g.on_wall(s)) V[0][s] = V[1][s] = 0.0;
    return {U + V, ScalarField(g), U - V, ScalarField(g)};
}

const InequalityRow& row(const InequalityAudit& a, const std::string& name) {
    for (const auto& r : a.rows)
        if (r.name == name) return r;
    throw std::runtime_error("missing row " + name);
}

} // namespace

TEST_SUITE("steady-certificate") {

TEST_CASE("steady functional: fixed point, swap and dual implementation") {
    const Grid g = Grid::uniform(2, two_pi, 16, Boundary::Periodic);
    FieldQuartet q = random_quartet(g, 3);
    const double J = steady_functional(q, 0.3);
    CHECK(steady_functional(q.swapped(), 0.3) == doctest::Approx(-J).epsilon(1e-12));
    CHECK(J == doctest::Approx(testing::brute_force_J(q, 0.3)).epsilon(1e-12));

    const Grid tg_grid = Grid::uniform(2, two_pi, 24, Boundary::Periodic, 3, 0.1);
    FieldQuartet tg = taylor_green(0.1, tg_grid);
    FieldQuartet slice{extract_slice(tg.u, 1), extract_slice(tg.p, 1), VectorField(g.steady_slice()), ScalarField()};
    slice.w = VectorField(slice.u.grid());
    slice.r = ScalarField(slice.u.grid());
    CHECK(steady_functional(slice, 0.1) == doctest::Approx(testing::brute_force_J(slice, 0.1)).epsilon(1e-12));

    FieldQuartet fixed = q;
    fixed.w = fixed.u;
    fixed.r = fixed.p;
    CHECK(std::abs(steady_functional(fixed, 0.3)) <= 1e-13 * evaluate_lagrangian(fixed, 0.3).magnitude);
    CHECK_THROWS_AS(steady_functional(random_quartet(tg_grid, 1), 0.1), DomainError);
}

TEST_CASE("enclosing radius of boxes") {
    CHECK(enclosing_radius(Grid::uniform(2, 1.0, 5, Boundary::Wall)) == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(enclosing_radius(Grid::uniform(3, 1.0, 5, Boundary::Wall)) == doctest::Approx(std::sqrt(3.0) / 2));
    const Grid rect(2, {2.0, 1.0, 1.0}, {5, 5, 1}, {Boundary::Wall, Boundary::Wall, Boundary::Wall});
    CHECK(enclosing_radius(rect) == doctest::Approx(std::sqrt(5.0) / 2));
}

TEST_CASE("certificate on zero fields, threshold constant and lambda") {
    const Grid g = Grid::uniform(2, 1.0, 9, Boundary::Wall);
    const UniquenessCertificate c = uniqueness_certificate(FieldQuartet::zeros(g), 0.5);
    CHECK(c.lhs == 0.0);
    CHECK(c.satisfied);
    CHECK(c.lambda == doctest::Approx(20.0 / (c.R * c.R)).epsilon(1e-15));
    const double constant = std::pow(20.0, 0.25) * std::pow(3.0, 0.75);
    CHECK(c.threshold == doctest::Approx(constant).epsilon(1e-14));
    CHECK(c.threshold == doctest::Approx(4.82057051366791).epsilon(1e-13));
    CHECK(c.quoted_threshold == 3.0);
    // The threshold does not depend on the box.
    const Grid big = Grid::uniform(3, 7.0, 5, Boundary::Wall);
    CHECK(uniqueness_certificate(FieldQuartet::zeros(big), 0.5).threshold == doctest::Approx(constant).epsilon(1e-14));
    CHECK_THROWS_AS(uniqueness_certificate(FieldQuartet::zeros(g), 0.0), DomainError);
}

TEST_CASE("certificate lhs is homogeneous in amplitude and scales as 1/nu") {
    const Grid g = Grid::uniform(2, 1.0, 12, Boundary::Wall);
    const FieldQuartet q = random_quartet(g, 17);
    const UniquenessCertificate base = uniqueness_certificate(q, 1.0);
    for (double c : {0.5, 2.0, 10.0, -3.0})
        CHECK(uniqueness_certificate(scaled(q, c), 1.0).lhs == doctest::Approx(std::abs(c) * base.lhs).epsilon(1e-14));
    for (double nu : {0.1, 0.37, 4.0})
        CHECK(uniqueness_certificate(q, nu).lhs == doctest::Approx(base.lhs / nu).epsilon(1e-14));
    bool was_satisfied = true;
    for (double c = 0.0; c < 20.0; c += 0.25) {
        const bool now = uniqueness_certificate(scaled(q, c), 1.0).satisfied;
        CHECK((was_satisfied || !now));
        was_satisfied = now;
    }
    CHECK_FALSE(was_satisfied);
}

TEST_CASE("dirichlet norm sum of a linear shear") {
    const Grid g = Grid::uniform(2, 1.0, 9, Boundary::Wall);
    VectorField u(g);
    u[0] = ScalarField::sample(g, [](const auto& x, double) { return x[1]; });
    const FieldQuartet q{u, ScalarField(g), u, ScalarField(g)};
    // s = 2u, d_y s_x = 2, so 1/4 int 4 = 1.
    const UniquenessCertificate c = uniqueness_certificate(q, 0.5);
    CHECK(c.dirichlet_norm_sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.lhs == doctest::Approx(std::sqrt(c.R) / 0.5).epsilon(1e-13));
}

TEST_CASE("inequality audit: zero difference") {
    const Grid g = Grid::uniform(2, 1.0, 9, Boundary::Wall);
    FieldQuartet q = random_quartet(g, 1);
    q.w = q.u;
    const InequalityAudit a = inequality_chain_audit(q, 0.1);
    CHECK(a.asserted_hold);
    for (const auto& r : a.rows) CHECK(r.margin >= 0.0);
}

TEST_CASE("inequality audit: closed-form integrals on the pi box") {
    const InequalityAudit a = inequality_chain_audit(box_state(129), 1.0);
    const InequalityRow& s = row(a, "schwarz");
    CHECK(s.asserted);
    CHECK(s.lhs == doctest::Approx(pi * pi / 4).epsilon(1e-3));
    CHECK(s.rhs == doctest::Approx(3 * pi * pi / 4).epsilon(1e-3));
    CHECK(s.margin == doctest::Approx(pi * pi / 2).epsilon(1e-3));
    CHECK(row(a, "interpolation").lhs == doctest::Approx(3 * pi / 4).epsilon(1e-3));
    // E = 2 (pi/2)^2, G = 2 * 2 (pi/2)^2.
    CHECK(row(a, "poincare").lhs == doctest::Approx(pi * pi / 2).epsilon(1e-3));
    CHECK(row(a, "serrin").lhs == doctest::Approx(pi * pi).epsilon(1e-3));
    for (const auto& r : a.rows) CHECK(r.asserted == (r.name == "schwarz"));
}

TEST_CASE("inequality audit: Schwarz margin on randomized steady trials") {
    const std::vector<Grid> grids{Grid::uniform(2, 1.0, 12, Boundary::Wall), Grid::uniform(3, 1.0, 7, Boundary::Wall),
                                  Grid::uniform(2, two_pi, 12, Boundary::Periodic)};
    for (const Grid& g : grids)
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const InequalityAudit a = inequality_chain_audit(random_difference_quartet(g, seed), 0.05);
            CHECK(a.asserted_hold);
            CHECK(row(a, "schwarz").margin >= -1e-10 * a.scale);
        }
}

TEST_CASE("inequality audit preconditions") {
    const Grid g = Grid::uniform(2, 1.0, 7, Boundary::Wall);
    CHECK_THROWS_AS(inequality_chain_audit(random_quartet(g, 2), 0.1), PreconditionError);
    CHECK_THROWS_AS(inequality_chain_audit(FieldQuartet::zeros(g.with_time(3, 0.1)), 0.1), DomainError);
}

TEST_CASE("steady boundary estimate") {
    const Grid g = Grid::uniform(2, 1.0, 9, Boundary::Wall);
    const SteadyBoundaryEstimate z = steady_boundary_estimate(FieldQuartet::zeros(g), 0.1);
    CHECK(z.dirichlet_term == 0.0);
    CHECK(z.boundary_term == 0.0);
    CHECK(z.volume_term == 0.0);
    CHECK_FALSE(z.periodic_only);

    // Periodic Taylor-Green slice: no boundary term, Dirichlet term nu int |grad v|^2 = 4 pi^2 nu,
    // volume term 2 int v.grad(|v|^2) = 0.
    const Grid tg = Grid::uniform(2, two_pi, 64, Boundary::Periodic, 3, 0.01);
    const FieldQuartet q = taylor_green(0.1, tg);
    const FieldQuartet slice{extract_slice(q.u, 0), extract_slice(q.p, 0), extract_slice(q.w, 0), extract_slice(q.r, 0)};
    const SteadyBoundaryEstimate e = steady_boundary_estimate(slice, 0.1);
    CHECK(e.periodic_only);
    CHECK(e.boundary_term == 0.0);
    // Central differences of sin(x) carry the factor sin(h)/h.
    const double h = tg.spacing(0), damp = std::pow(std::sin(h) / h, 2);
    CHECK(e.dirichlet_term == doctest::Approx(0.4 * pi * pi * damp).epsilon(1e-12));
    CHECK(std::abs(e.volume_term) < 1e-10);
    CHECK(e.identity_residual == doctest::Approx(e.dirichlet_term - e.volume_term));

    // Cavity-style data: finite numbers, no sign contract.
    const Grid cav = Grid::uniform(2, 1.0, 16, Boundary::Wall);
    const VectorField lid = cavity_lid(cav, 1.0);
    const SteadyBoundaryEstimate c = steady_boundary_estimate({lid, ScalarField(cav), lid, ScalarField(cav)}, 1.0);
    CHECK(std::isfinite(c.dirichlet_term));
    CHECK(std::isfinite(c.boundary_term));
    CHECK(std::isfinite(c.volume_bound));
    CHECK(c.closing_applicable == std::isfinite(c.closing_lhs));
}

} // TEST_SUITE
