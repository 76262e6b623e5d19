#pragma once

#include "varns/field.hpp"
#include "varns/steady.hpp"

#include <string>
#include <vector>

namespace varns {

struct SolveConfig {
    double nu = 0.1;
    /// Threshold on the root-mean-square of the (constrained) residual vector.
    double newton_tol = 1e-10;
    int max_newton = 25;
    /// Number of viscosity halvings from 10 nu down to nu; 0 solves at nu directly.
    int continuation_steps = 0;
    /// Crank-Nicolson is the only scheme.
    std::string time_scheme = "CrankNicolson";
    /// Convergence threshold of the Picard loop inside one marching step.
    double linear_tol = 1e-12;
    int max_picard = 50;
    int max_pseudo_steps = 5000;

    /// Throws DomainError when a field is out of range.
    void validate() const;
};

struct IterationRecord {
    int iter = 0;
    double residual = 0.0;
    double u_w_gap = 0.0;
    double J = 0.0;
};

struct Trajectory {
    FieldQuartet state;
    std::vector<IterationRecord> history;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    /// |u - w|_2 / |u|_2 of the final state.
    double u_w_gap = 0.0;
    double J = 0.0;
    /// Magnitude of the two halves of J; |J| is judged against it.
    double J_scale = 0.0;
    std::string message;

    /// CSV `iter,residual,u_w_gap,J`.
    std::string history_csv() const;
};

/// Decaying Taylor-Green vortex on [0, 2pi)^2:
///   u = w = (-cos x sin y, sin x cos y) e^{-2 nu t}
///   P = -(cos 2x + cos 2y)/4 e^{-4 nu t},  p = r = P - |u|^2/2.
FieldQuartet taylor_green(double nu, const Grid& grid);

/// Physical pressure P = p + |u|^2/2.
ScalarField physical_pressure(const VectorField& u, const ScalarField& p);

/// Time march of the reduced equations d_t v + v.grad v = -grad P + nu lap v,
/// div v = 0 on a 2D periodic grid. Crank-Nicolson in time with the advecting
/// velocity at the step midpoint, Picard iteration per step and an
/// incremental pressure projection. Pressure is normalised to zero mean on
/// each stencil parity class. Returns u = w, p = r = P - |v|^2/2.
Trajectory march_reduced(const VectorField& initial, const SolveConfig& config, const Grid& grid);

/// Newton iteration on the monolithic space-time discrete Euler-Lagrange
/// system for (u, p, w, r) on a periodic grid.
///   t = 0        : u = w = initial, p = r = c
///   0 < t < tau  : both momentum rows, div u, div w
///   t = tau      : u = w, sum of momentum rows, div u, p = r
/// where c is the mean seed pressure and one node per pressure parity class
/// carries p = c (and r = c) instead of its divergence row. Steps are halved
/// until the residual decreases.
Trajectory newton_dual(const FieldQuartet& seed, const VectorField& initial,
                       const SolveConfig& config, const Grid& grid);

struct SteadyResult {
    FieldQuartet state;
    bool converged = false;
    int steps = 0;
    double residual = 0.0;
    std::vector<IterationRecord> history;
    UniquenessCertificate certificate;
    std::string message;
};

/// Steady reduced equations nu lap v - grad P - v.grad v = 0, div v = 0, with
/// v prescribed on Wall faces by `boundary` (values elsewhere ignored).
/// Pseudo-transient continuation: backward-Euler pseudo steps with full Newton
/// linearisation and a step size that grows as the residual falls. Pressure
/// rows on walls extrapolate linearly along the inward normal.
SteadyResult steady_solve(const VectorField& boundary, const SolveConfig& config,
                          const Grid& grid);

/// Lid-driven cavity data: tangential velocity speed * 16 xi^2 (1 - xi)^2 on
/// the upper face of the last axis, xi = x_0 / extent_0; zero elsewhere.
VectorField cavity_lid(const Grid& grid, double speed);

} // namespace varns
