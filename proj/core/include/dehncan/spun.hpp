#pragma once

#include <array>
#include <cstdint>

#include "dehncan/config.hpp"

namespace dehncan {

// Complete hyperbolic structure on the solid torus triangulated by two
// spun tetrahedra Delta, Delta'.  The boundary has three edges with
// exterior dihedral angles a, b, c (a + b + c = pi, a, c in [0, pi),
// b in (0, pi)) which the meridian crosses n_a, n_b = n_a + n_c, n_c times.
//
// The tetrahedron angles are
//   delta_x  = (pi - x)/2 + (alpha|beta|gamma),
//   delta'_x = (pi - x)/2 - (alpha|beta|gamma),
// with alpha + beta + gamma = 0; completeness of the spun end pins
// (alpha, beta, gamma) to a segment (the meridian rotation condition
// 2(n_c alpha - n_a gamma) = 2 pi), and the volume is maximized along the
// segment.  At the maximizer the meridian scaling holonomy eta equals 1.
struct SpunTorusResult {
    double alpha = 0, beta = 0, gamma = 0;
    std::array<double, 3> delta{};        // angles of Delta (order a, b, c)
    std::array<double, 3> delta_prime{};  // angles of Delta'
    double eta_mu = 0;                    // meridian scaling holonomy at the max
    double volume = 0;                    // V0(Delta) + V0(Delta')
    double s = 0;                         // position along the segment
};

// Existence gate: a n_a + b n_b + c n_c > 2 pi.
bool spun_feasible(double a, double b, double c, std::int64_t na, std::int64_t nc);

// Solves for the critical point by bisection on the sign of dV/ds
// (V is strictly concave along the segment with infinite boundary
// derivatives).  Throws infeasible_error when the gate fails.
SpunTorusResult spun_torus_solve(double a, double b, double c, std::int64_t na,
                                 std::int64_t nc, const Config& cfg = {});

}  // namespace dehncan
