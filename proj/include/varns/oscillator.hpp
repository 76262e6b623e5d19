#pragma once

#include "varns/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varns {

/// y'' + 2a y' + b y = 0 on [0, 1] with y(0) = alpha, y(1) = beta, sampled on
/// n equally spaced nodes.
struct OscillatorProblem {
    double a = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double beta = 1.0;
    int n = 65;

    /// The integer m with b - a^2 = m^2 pi^2 (m >= 1), if any, within 1e-9 on
    /// sqrt(b - a^2) / pi.
    std::optional<int> resonance() const;
    bool well_posed() const { return !resonance().has_value(); }
    double spacing() const { return 1.0 / (n - 1); }
    std::vector<double> nodes() const;
};

/// Raised by solve_oscillator_vp when b - a^2 = m^2 pi^2.
class ResonanceError : public DomainError {
public:
    explicit ResonanceError(int m);
    int m() const { return m_; }

private:
    int m_;
};

struct OscillatorSolution {
    std::vector<double> x;
    std::vector<double> y1;
    std::vector<double> y2;
    std::vector<double> y_mean;
    std::vector<double> y_diff;
    double functional_value = 0.0;
    /// Reciprocal condition estimate of the assembled system.
    double rcond = 0.0;
};

/// Two-field functional
///   J = 1/2 int [(y1'^2 - 2a y2' y1 - b y1^2) - (y2'^2 - 2a y1' y2 - b y2^2)] dx
/// with second-order differences and trapezoid quadrature.
double oscillator_functional(const std::vector<double>& y1, const std::vector<double>& y2,
                             const OscillatorProblem& problem);

/// Solves the coupled Euler-Lagrange pair
///   y1'' + 2a y2' + b y1 = 0,   y2'' + 2a y1' + b y2 = 0
/// with both fields pinned to (alpha, beta) at the ends.
OscillatorSolution solve_oscillator_vp(const OscillatorProblem& problem);

/// |J(y1, y2) + 2 int ybar (y'' + 2a y' + b y) dx| with y the mean and ybar
/// the half difference. ybar must vanish at both end nodes.
double galerkin_identity_residual(const std::vector<double>& y1, const std::vector<double>& y2,
                                  const OscillatorProblem& problem);

/// Closed-form solution of the boundary value problem at x.
double oscillator_exact(const OscillatorProblem& problem, double x);

} // namespace varns
