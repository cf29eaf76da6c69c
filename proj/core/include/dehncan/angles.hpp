#pragma once

#include <vector>

#include "dehncan/farey.hpp"

namespace dehncan {

// Exterior dihedral angles of the pleated boundary torus along the three
// boundary edges, keyed to the (post-swap) labels of the path:
// theta_p, theta_q >= 0, 0 < theta_r < pi, sum = pi.
struct BoundaryAngles {
    double p = 0, q = 0, r = 0;
};

// Dihedral angles of tetrahedron i: x at its two edges of slope xi[i]
// (right end of e_i), y at the two edges of slope eta[i] (left end), z at
// its edges of slope rho[i] and nu[i].  x + y + z = pi.
struct TetAngles {
    double x = 0, y = 0, z = 0;
};

// The angle table for one tetrahedron given the letters of the two adjacent
// interfaces and the triple (a, b, c) = (z_{i-1}, z_i, z_{i+1}):
//   RR: x = (a - 2b + c)/2,  y = pi - (a + c)/2
//   LL: the same two values with x and y exchanged
//   RL: x = (a - b - c)/2,   y = pi - (a + b - c)/2
//   LR: exchanged.
// z = b in all cases.
TetAngles letterpair_angles(char prev, char cur, double a, double b, double c);

// Existence test for positive angle structures:
//   (m /\ p) theta_p + (m /\ q) theta_q + (m /\ r) theta_r > 2 pi.
struct FeasibilityReport {
    bool feasible = false;
    double margin = 0;  // left side minus 2 pi
};
FeasibilityReport feasible(const FareyPath& path, const BoundaryAngles& b);

// The pinched-coordinate vector z_0..z_N: z_0 = pi + theta_q,
// z_1 = pi - theta_r, z_N = 0, with z_2..z_{N-1} free.
std::vector<double> pinned_z(const FareyPath& path, const BoundaryAngles& b);

// Angles of tetrahedron i (1 <= i <= N-1) for the given z-vector.
TetAngles tet_angles(const FareyPath& path, const std::vector<double>& z, int i);
std::vector<TetAngles> all_tet_angles(const FareyPath& path,
                                      const std::vector<double>& z);

// Margins of the open polytope of positive angle structures at z.  Each
// entry is the amount by which a strict inequality holds (negative =
// violated).  strictly_feasible() requires every margin > 0.
struct ConstraintReport {
    double min_tet_angle;   // min over all tetrahedron dihedral angles
    double min_hinge;       // min over hinge i of z_{i-1} - z_i - z_{i+1}
    double min_convexity;   // min over non-hinge i of z_{i-1} + z_{i+1} - 2 z_i
    double min_range;       // min over 2 <= i <= N-1 of min(z_i, pi - z_i)
    double z2_headroom;     // (pi - theta_q) - z_2
    bool strictly_feasible() const;
};
ConstraintReport residuals(const FareyPath& path, const BoundaryAngles& b,
                           const std::vector<double>& z);

// A strictly feasible starting point: a convex decreasing profile when the
// word has a single syllable, otherwise a convex decreasing prefix to the
// first hinge followed by a steep (ratio 3) geometric tail.  The result
// passes residuals() strictly; throws infeasible_error when no positive
// angle structure exists.
std::vector<double> initial_point(const FareyPath& path, const BoundaryAngles& b);

// --- doubled triangulation (even fillings) ---------------------------------
//
// The even filling triangulates with N *pairs* of tetrahedra sharing their
// angles plus one closing tetrahedron, on the extended coordinate vector
// z_0..z_{N+1} (z_0 = pi + theta_q, z_1 = theta; z_N and z_{N+1} are free
// and positive, unlike the solid torus where z_N is pinned to 0).

// The end of the last path edge e_N that receives the pi - (a+c)/2 angle of
// the closing pair (and the z_{N+1} angle of the closing tetrahedron): the
// non-pivot end nu_{N-1} when N >= 2; for N == 1 the boundary angle sums
// pin it to q.  The other end of e_N acts as the pivot of the last layer.
Slope closing_zeta_slope(const FareyPath& path);

// Angles of pair i (1 <= i <= N, both tetrahedra of the pair are isometric).
// For i < N this is the solid-torus table; for i = N, with
// (a, b, c) = (z_{N-1}, z_N, z_{N+1}):
//   z = b,  pi - (a+c)/2 at the closing zeta slope,  (a-2b+c)/2 at the pivot,
// the x/y split following which of xi_N / eta_N carries which slope.
TetAngles even_pair_angles(const FareyPath& path, const std::vector<double>& z,
                           int i);

// Angles of the closing tetrahedron, in the slot convention
//   x at its two edges of slope xi_N, y at its two edges of slope eta_N,
//   z at its two edges of meridian slope (note: *two* edges for z as well):
//   z_{N+1} at the closing zeta slope, z_N - z_{N+1} at the pivot,
//   pi - z_N at the meridian.
TetAngles even_last_angles(const FareyPath& path, const std::vector<double>& z);

}  // namespace dehncan
