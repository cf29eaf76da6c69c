#pragma once

// Convexity certificates for the Epstein-Penner (Delaunay) canonicity of the
// developed solid torus.
//
// Lift each cusp-diagram vertex w with horoball diameter d to the lightlike
// vector (2 Re w, 2 Im w, 1 - |w|^2, 1 + |w|^2) / d of Minkowski space R^{3,1}
// (the cusp itself lifts to (0, 0, -1, 1)).  A face of the decomposition is
// strictly convex exactly when the segment joining the lifts of the two
// tetrahedron apices opposite the face crosses the cone spanned by the lifts
// of the three face vertices beyond the affine span: writing
//
//     alpha v_a + beta v_b + gamma v_c  =  lambda v_P + (1 - lambda) v_Q
//
// for face vertices a, b, c and opposite apices P, Q, the face is convex if
// and only if alpha + beta + gamma > 1.  The margin recorded below is that
// sum minus one, evaluated three ways: by closed forms in the hexagon
// coordinates (primary), by an independent trigonometric factorization
// (margin_trig; for the core face, an algebraically factored route), and by a
// generic linear solve of the 4x4 system (margin_ls), which guards against
// transcription errors in the closed forms.

#include <string>
#include <vector>

#include "dehncan/develop.hpp"

namespace dehncan {

// The four face orbits a certificate can cover:
//   * interior: the face pair between the two tetrahedra of a regular
//     interface layer;
//   * core: the folded self-gluing face of the collapsed last layer of a
//     solid-torus development (odd fillings and the bare solid torus);
//   * pinched: the faces of the extra tetrahedron closing up the pinched
//     last layer of an even filling (same linear system as interior, with
//     the zeta' vertex pair merged into the puncture);
//   * boundary: the face orbit along the flattened boundary edge of a
//     filled manifold, certified from the outermost cross-section.
enum class FaceKind { interior, core, pinched, boundary };

// Certificate for one face orbit.  Interior interfaces certify both faces
// shared by consecutive tetrahedra at once; the collapsed last interface
// certifies the folded self-gluing face in front of the core.
struct FaceCertificate {
    int interface_index = 0;  // layer index (1-based; 0 for boundary faces)
    FaceKind kind = FaceKind::interior;

    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double lambda = 0.5;  // position parameter along the apex segment

    double margin = 0.0;       // closed-form alpha + beta + gamma - 1
    double margin_trig = 0.0;  // second, independently rounded route
    double margin_ls = 0.0;    // generic 4x4 solve of the same system
    double ls_residual = 0.0;  // defect of that solve (solver sanity)

    // Interior and core faces only: the deck map across the layer must turn
    // the way the layer's word letter announces.  Pinched and boundary faces
    // carry no deck map; their hand_ok is vacuously true and the letters '-'.
    double hand_im = 0.0;   // Im hand of the interface deck map (true picture)
    char handedness = 'L';  // 'L' if hand_im > 0, else 'R'
    char expected = 'L';    // letter carried by the layer
    bool hand_ok = false;   // handedness == expected, decisively signed

    // Boundary faces only: extraction diagnostics from the outermost
    // cross-section.  flat_residual is the deviation from pi of the hexagon
    // angle at the flattened vertex (an exact linear identity, so roundoff
    // sized); square_residual is the mismatch of the two half-sides meeting
    // there, which vanishes exactly when the boundary gluing closes up.
    double flat_residual = 0.0;
    double square_residual = 0.0;
};

enum class Verdict { canonical, indeterminate, non_canonical };

std::string to_string(Verdict v);

struct CertifyConfig {
    double margin_floor = 1e-9;  // margins in [-floor, floor] are inconclusive
    double holonomy_tol = 1e-6;  // gluing residual ceiling for a positive verdict
};

struct CanonicityCertificate {
    std::vector<FaceCertificate> faces;
    double min_margin = 0.0;
    double max_two_route_error = 0.0;  // closed form vs trigonometric route
    double max_ls_error = 0.0;         // closed form vs linear solve
    double max_holonomy_residual = 0.0;
    bool all_hands_match = false;
    double margin_floor = 1e-9;
    Verdict verdict = Verdict::indeterminate;

    bool canonical() const { return verdict == Verdict::canonical; }
};

// Certificate of the face pair between the two tetrahedra of a non-collapsed
// interface layer.
FaceCertificate interior_face_certificate(const InterfaceLayer& layer);

// Certificate of the folded face of the collapsed (last) layer.
FaceCertificate core_face_certificate(const InterfaceLayer& layer);

// Certificate of the faces of the closing tetrahedron of a pinched (even
// filling) last layer.  The face vertices are the pivot pair and the merged
// zeta' pair at the puncture; the system is the interior one evaluated at
// the developed layer, whose zeta' sits at the pinch (its distance to the
// puncture is the fold residual of the development, not an input here).
FaceCertificate pinched_face_certificate(const InterfaceLayer& layer);

// Certificate of the boundary face orbit of a filled manifold, extracted
// from the outermost cross-section hexagon (counterclockwise, centrally
// symmetric about 0).  One vertex pair of the hexagon is flat (interior
// angle pi, the vertex pair of the zero boundary angle); with f the flat
// vertex and a, c its counterclockwise neighbours, the similarity-invariant
// shape zeta = (c - a) / (a + c) rebuilds the standard picture: cusp at
// infinity, face (infinity, 1, -1) with horoball diameters 2|zeta| at +-1,
// opposite apices at +-(zeta + 1) with diameters |zeta|^2.  Closed forms:
//   alpha = gamma = 1 / |zeta|,  beta = (|zeta + 1|^2 - 1) / |zeta|^2,
// margin = 2 (|zeta| + Re zeta) / |zeta|^2 > 0 strictly (|Re zeta| < |zeta|
// away from degeneracy), cross-checked by the factored route
// 4 cos^2(arg(zeta)/2) / |zeta| and by the generic linear solve.
FaceCertificate boundary_face_certificate(const std::vector<cplx>& outer_hexagon);

// Certify every interface layer of a developed cusp cross-section and
// aggregate the verdict: canonical iff all margins clear the floor, the
// gluing residuals are below the tolerance and every deck map has the
// handedness announced by its letter; non-canonical iff some margin is
// decisively negative; indeterminate otherwise.  Collapsed layers get the
// core certificate, pinched layers the pinched one.
CanonicityCertificate certify(const DevelopedCusp& dev,
                              const CertifyConfig& cfg = {});

// certify() plus the boundary face orbit: the full certificate of a Dehn
// filled manifold, whose boundary faces are glued up and must be certified
// alongside the interface faces.  The square residual of the boundary
// extraction joins the holonomy residuals.
CanonicityCertificate certify_filled(const DevelopedCusp& dev,
                                     const CertifyConfig& cfg = {});

}  // namespace dehncan
