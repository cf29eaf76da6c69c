#pragma once

#include <vector>

#include "dehncan/angles.hpp"
#include "dehncan/config.hpp"
#include "dehncan/farey.hpp"

namespace dehncan {

// Volume of an ideal hyperbolic tetrahedron with dihedral angles x, y, z
// (x + y + z = pi): L(x) + L(y) + L(z), the sum of Lobachevsky values.
double tet_volume(const TetAngles& t);

// Total volume of the angle structure z (full vector z_0..z_N).
double total_volume(const FareyPath& path, const BoundaryAngles& b,
                    const std::vector<double>& z);

// Gradient of the total volume with respect to the free coordinates
// z_2..z_{N-1} (empty when N == 2).
std::vector<double> volume_gradient(const FareyPath& path, const BoundaryAngles& b,
                                    const std::vector<double>& z);

struct VolumeResult {
    std::vector<double> z_star;  // full vector z_0..z_N at the maximizer
    double value = 0;            // maximal volume
    double grad_norm = 0;        // sup-norm of the free gradient at z_star
    int iterations = 0;
};

// Maximizes the (strictly concave) volume functional over the open polytope
// of positive angle structures by a feasible-start damped Newton iteration:
// steps are clipped to 90% of the distance to the boundary and Armijo
// backtracked; falls back to the gradient direction if the Newton system is
// not an ascent direction.  Throws infeasible_error when no positive angle
// structure exists and convergence_error when the iteration cap is hit.
// cfg.precision == extended runs the same iteration in long double.
VolumeResult maximize(const FareyPath& path, const BoundaryAngles& b,
                      const Config& cfg = {});

}  // namespace dehncan
