#pragma once

#include "varns/field.hpp"

#include <cstdint>
#include <random>

namespace varns {

/// Sum of `modes` random products of sines with random phases. Wave numbers
/// are integers per period, so the field is smooth and periodic where the
/// axis is; time dependence is a random slow modulation.
ScalarField random_smooth_scalar(const Grid& grid, std::mt19937_64& rng, int modes = 3,
                                 double amplitude = 1.0);
VectorField random_smooth_vector(const Grid& grid, std::mt19937_64& rng, int modes = 3,
                                 double amplitude = 1.0);

/// prod over Wall axes of 4 x (L - x) / L^2: one at the centre, zero on walls.
ScalarField wall_bump(const Grid& grid);

/// t (tau - t) / (tau/2)^2 at every node; zero at both end times.
ScalarField time_bump(const Grid& grid);

/// Discrete curl of a potential: in 2D (d_1 psi, -d_0 psi) from component 0 of
/// `potential`; in 3D curl A. The stencils commute, so the discrete
/// divergence vanishes to rounding.
VectorField discrete_curl(const VectorField& potential);

/// Independent smooth random fields for all four unknowns.
FieldQuartet random_quartet(const Grid& grid, std::uint64_t seed);

/// u = U + vbar, w = U - vbar with U discretely solenoidal and vbar zero on
/// every Wall face; p and r are independent smooth fields.
FieldQuartet random_difference_quartet(const Grid& grid, std::uint64_t seed);

/// Random direction admissible for the first variation: velocity parts vanish
/// on walls, pressure parts agree on walls, u- and w-parts agree at both end
/// times.
FieldQuartet random_admissible_direction(const Grid& grid, std::uint64_t seed);

} // namespace varns
