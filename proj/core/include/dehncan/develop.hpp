#pragma once

#include <complex>
#include <vector>

#include "dehncan/angles.hpp"
#include "dehncan/farey.hpp"

namespace dehncan {

using cplx = std::complex<double>;

// Shape parameter of an ideal tetrahedron at the edge slot carrying the
// given dihedral angle, with the cyclic convention x -> y -> z:
//   shape('x') = (sin y / sin z) e^{ix},
//   shape('y') = (sin z / sin x) e^{iy},
//   shape('z') = (sin x / sin y) e^{iz}.
// The product of the three is -1; around an interior edge class of a
// geometric solution the product of incident shapes is exactly 1.
cplx tet_shape(const TetAngles& t, char slot);

// One interface between consecutive tetrahedra: the cusp cross-section of
// the pleated torus separating Delta_i from Delta_{i+1} (or, for the last
// index, the folded surface where Delta_{N-1} is glued to itself).  The
// cross-section is a centrally symmetric hexagon whose vertex pairs carry
// the slopes pivot (at +-1 after normalization), rho_{i+1} (the zeta pair)
// and nu_i (the zeta' pair).  The shape of the hexagon is determined by the
// prescribed angles of the two adjacent tetrahedra alone, so each layer is
// computed in closed form in its own frame; consistency of neighbouring
// frames is a *check*, not an input (see chain_residuals).
struct InterfaceLayer {
    int index = 0;        // i in 1..N-1 (1..N for even fillings)
    char letter = 'L';    // word letter of the Farey triangle T_i
    bool collapsed = false;  // last layer: hexagon degenerates to a broken line
    bool pinched = false;    // even filling last layer: zeta' pair merges into
                             // the puncture (zeta' -> 0 at the critical point)

    Slope pivot;        // slope of the +-1 vertex pair
    Slope zeta_slope;   // slope of the zeta pair (rho_{i+1}; m' when collapsed)
    Slope zeta_p_slope; // slope of the zeta' pair (nu_i)

    // True vertex positions in this layer's frame (pivot pair at -1 and +1).
    // For an 'R' layer the counterclockwise order is (-1, zeta', zeta, 1);
    // zeta_n / zeta_p_n are the mirror image (-conj) normalized so that
    // (-1, zeta_n, zeta_p_n, 1) is counterclockwise, which the closed-form
    // certificates assume.  For an 'L' layer the two coincide.
    cplx zeta, zeta_p;
    cplx zeta_n, zeta_p_n;

    // Multiply frame coordinates by this to land in the base frame (the
    // frame of layer 1).  The shared vertex pair determines each step only
    // up to the central symmetry; the sign is resolved by which antipode the
    // next layer's zeta vertex lands on.
    cplx frame_scale{1.0, 0.0};

    // Horoball diameters with the cusp horoball normalized to height 1 in
    // *this layer's own frame*: products of the two hexagon side lengths
    // adjacent to each vertex.  In the base frame, with the cusp horoball at
    // height 1 there, the same horoball has diameter |frame_scale|^2 times
    // the stored value (one factor for the coordinate scale, one for the
    // cusp-ball renormalization).
    double diam_pivot = 0, diam_zeta = 0, diam_zeta_p = 0;
};

// Angle sums and shape products around one edge class of the triangulation.
// Classes are slopes of the path, except that the fold identifies the two
// ends of the last Farey edge e_N into a single class.  In the doubled
// (even filling) triangulation every slope carries two parallel edge
// classes except the meridian, whose two classes are identified by
// construction; the checks then aggregate both classes of a slope and the
// target doubles accordingly (multiplicity below).
struct EdgeClassCheck {
    std::vector<Slope> slopes;    // one slope, or two when merged by the fold
    bool boundary = false;        // contains p, q or r
    int multiplicity = 1;         // parallel classes aggregated into this check
    double angle_sum = 0;         // sum of incident dihedral angles
    double angle_target = 0;      // multiplicity * (2 pi or pi - theta)
    cplx shape_product{1.0, 0.0}; // product of incident tet shapes
};

// Full development of the cusp cross-section together with every
// consistency residual the triangulation admits.  At the critical point of
// the volume functional all residuals vanish (up to roundoff); away from it
// they measure the holonomy defect of the would-be hyperbolic structure.
struct DevelopedCusp {
    std::vector<InterfaceLayer> layers;  // N-1 entries, layers[i-1] = interface i

    // Outermost cross-section H_0 (the boundary pleated torus), base frame,
    // counterclockwise: slopes (pivot_1, r, rho_2, pivot_1, r, rho_2).
    std::vector<cplx> outer_hexagon;

    // |position predicted by layer i - position computed at layer i+1| for
    // the shared vertex pair, scaled; entry i-1 compares layers i, i+1.
    // These are exactly the complex gluing consistencies of the interior
    // edge classes, localized between consecutive layers.
    std::vector<double> chain_residuals;

    std::vector<EdgeClassCheck> edge_classes;

    double fold_residual = 0;      // chain residual into the collapsed layer
    double meridian_residual = 0;  // deck-transformation combination vs +-id
    double max_chain_residual = 0;
    double max_interior_angle_error = 0;   // vs 2 pi
    double max_boundary_angle_error = 0;   // vs pi - theta
    double max_shape_product_error = 0;    // interior classes, |product - 1|
};

// Develops the cusp cross-section for the angle assignment z (a full
// z_0..z_N vector as produced by pinned_z / maximize).  The meridian
// residual is measured by developing two deck transformations around edge
// slopes and cancelling the core-curve part using the intersection numbers
// with the meridian; with a single Farey fan (one pivot slope) the two
// transformations represent the same group element and are compared
// directly, and for N == 2 (no pair of interfaces at all) the residual
// falls back to the meridian scaling holonomy |eta - 1| of the equivalent
// two-tetrahedron spun structure.
DevelopedCusp develop(const FareyPath& path, const BoundaryAngles& b,
                      const std::vector<double>& z);

// Develops the cusp cross-section of the doubled (even filling)
// triangulation for the angle assignment z_0..z_{N+1}: each of the N
// tetrahedron pairs contributes one interface layer exactly as in the
// solid torus, and the closing tetrahedron makes the last layer a pinched
// one, its zeta' pair converging to the puncture.  fold_residual is the
// pinch closure |zeta'_N| (not imposed, it emerges at the critical point)
// and meridian_residual is the deviation of the shape product around the
// meridian edge class from 1.
DevelopedCusp develop_even(const FareyPath& path, const BoundaryAngles& b,
                           const std::vector<double>& z);

}  // namespace dehncan
