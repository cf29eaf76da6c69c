#pragma once

#include <cstdint>
#include <vector>

#include "dehncan/angles.hpp"
#include "dehncan/canonical.hpp"
#include "dehncan/config.hpp"
#include "dehncan/develop.hpp"
#include "dehncan/farey.hpp"

namespace dehncan {

// Dehn fillings of one cusp of the Whitehead link complement.
//
// A filling class is a primitive integer pair (k, l) on the filled cusp;
// (k, l) and (-k, -l) name the same filling, and flipping the sign of l
// gives the mirror manifold (equal volume, mirrored triangulation).  All
// classes are hyperbolic except the five exceptional ones below and their
// negatives.
//
// The construction splits by the parity of l:
//   * odd l: the filled manifold is a triangulated solid torus over the
//     Farey path from the seed triangle to m = l / (2k), with boundary
//     angle pattern (0, theta, pi - theta) -- two boundary edges flatten,
//     and the exterior angle theta becomes a free shape parameter;
//   * even l: the manifold is a doubled solid torus over the path to
//     m = (l/2) / k: N isometric tetrahedron pairs plus one closing
//     tetrahedron whose meridian edge pinches the last cross-section.
// In both cases the complete hyperbolic structure is the critical point of
// the (strictly concave) total volume over the joint variables
// (theta, interior z coordinates), found here by damped Newton ascent.

// The non-hyperbolic filling classes: +-(0,1), +-(1,0), +-(1,1), +-(1,-1),
// +-(1,2), +-(1,-2).  Input (k, l) must be primitive.
bool exceptional_filling(std::int64_t k, std::int64_t l);

enum class Parity { odd, even };

// Combinatorial set-up of the filled triangulation.
struct FillingSetup {
    std::int64_t k = 0, l = 0;  // sign-normalized: k > 0, or k == 0 and l > 0
    Parity parity = Parity::odd;
    Slope m;        // meridian slope in the dispatch chart
    FareyPath path; // seed triangle chosen so that q carries slope +-1 or p does
    bool theta_on_q = false;  // (theta_p, theta_q) = (0, theta) when true
    double theta_max = 0.0;   // supremum of the feasible theta interval (0, max)
};

// Builds the set-up: sign normalization, parity split, meridian slope,
// dispatch of the seed triangle by the position of m among the breakpoints
// -2, -1, -1/2, 0, 1/2, 1, 2, and the feasible theta interval.  Throws
// infeasible_error for non-primitive or exceptional classes.
FillingSetup filling_setup(std::int64_t k, std::int64_t l);

// Boundary angles for a given theta in (0, theta_max).
BoundaryAngles filling_angles(const FillingSetup& s, double theta);

// A critical point of the volume over (theta, z).
struct FillingVolume {
    double theta = 0.0;
    std::vector<double> z;  // z_0..z_N (odd) or z_0..z_{N+1} (even)
    double value = 0.0;     // volume of the filled manifold
    double grad_norm = 0.0; // sup-norm of the joint gradient at the maximizer
    int iterations = 0;
};

// Maximizes the total volume -- odd: sum over the N-1 solid-torus
// tetrahedra; even: twice the pair volumes plus the closing tetrahedron --
// over theta and the free z coordinates, by the same feasible-start damped
// Newton iteration as the fixed-angle solid-torus solver.  Throws
// convergence_error when the iteration cap is hit.
FillingVolume maximize_filling(const FillingSetup& s, const Config& cfg = {});

// The full pipeline for one filling: set-up, volume maximization,
// development of the cusp cross-section and canonicity certification
// (interface faces, core or pinched faces, boundary faces).
struct FillingResult {
    FillingSetup setup;
    FillingVolume vol;
    DevelopedCusp dev;
    CanonicityCertificate cert;
};

FillingResult whitehead_fill(std::int64_t k, std::int64_t l,
                             const Config& cfg = {});

}  // namespace dehncan
