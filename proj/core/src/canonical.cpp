#include "dehncan/canonical.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dehncan {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Lightlike lift of a cusp-diagram vertex with horoball diameter d.
Vec4 lightlike(cplx w, double d) {
    return Vec4{2.0 * w.real(), 2.0 * w.imag(), 1.0 - std::norm(w),
                1.0 + std::norm(w)} /
           d;
}

const Vec4 kInfinity{0.0, 0.0, -1.0, 1.0};

// Shift an angle into the half-open window (base - 2*pi, base].
double into_window(double angle, double base) {
    while (angle <= base - 2.0 * kPi) angle += 2.0 * kPi;
    while (angle > base) angle -= 2.0 * kPi;
    return angle;
}

// Handedness of the deck map across a layer, computed in the true (possibly
// mirrored) picture.  In the layer's own mirror-normalized coordinates
// hand = 4 / ((zeta + 1)(1 - zeta')); a mirrored layer conjugates the map,
// flipping the imaginary part.
void fill_handedness(const InterfaceLayer& layer, FaceCertificate& f) {
    cplx ac = (layer.zeta_n + 1.0) * (1.0 - layer.zeta_p_n);
    if (ac == cplx{0.0, 0.0})
        throw std::domain_error("canonical: degenerate interface hexagon");
    cplx hand = 4.0 / ac;
    f.hand_im = (layer.letter == 'L') ? hand.imag() : -hand.imag();
    f.handedness = (f.hand_im > 0.0) ? 'L' : 'R';
    f.expected = layer.letter;
    f.hand_ok = (f.handedness == f.expected) && std::abs(f.hand_im) >= 1e-12;
}

// Solve  alpha c0 + beta c1 + gamma c2 - lambda c3 = rhs  exactly and report
// the combination sum, the position parameter and the solve defect.
void fill_linear_route(const Vec4& c0, const Vec4& c1, const Vec4& c2,
                       const Vec4& c3, const Vec4& rhs, FaceCertificate& f) {
    Mat4 A;
    A.col(0) = c0;
    A.col(1) = c1;
    A.col(2) = c2;
    A.col(3) = -c3;
    Vec4 x = A.colPivHouseholderQr().solve(rhs);
    f.margin_ls = x(0) + x(1) + x(2) - 1.0;
    f.lambda = x(3);
    f.ls_residual = (A * x - rhs).cwiseAbs().maxCoeff();
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::canonical: return "canonical";
        case Verdict::indeterminate: return "indeterminate";
        case Verdict::non_canonical: return "non_canonical";
    }
    return "indeterminate";
}

namespace {

// Shared system of the interior and pinched kinds: the face through the
// pivot pair and the cusp, with apices at zeta and zeta'.
void fill_interior_routes(const InterfaceLayer& layer, FaceCertificate& f) {
    // Margins are mirror-invariant, so work in the normalized coordinates
    // (-1, zeta, zeta', 1) with the cusp at infinity.  The five horoballs in
    // play have diameters 1 (cusp), ac (both pivot vertices), ab (zeta) and
    // bc (zeta'), where a, b, c are the side lengths of the half-hexagon.
    const cplx zn = layer.zeta_n;
    const cplx zpn = layer.zeta_p_n;
    const double eta = zn.imag();
    const double etap = zpn.imag();
    const double a = std::abs(zn + 1.0);
    const double b = std::abs(zpn - zn);
    const double c = std::abs(1.0 - zpn);
    const double h = etap - eta;
    if (a == 0.0 || b == 0.0 || c == 0.0 || h == 0.0)
        throw std::domain_error("canonical: degenerate interface hexagon");

    // Closed forms for the apex-segment midpoint combination
    //   alpha v_zeta + beta v_zeta' + gamma v_inf = lambda v_1 + (1-lambda) v_-1.
    f.alpha = b * etap / (c * h);
    f.beta = -b * eta / (a * h);
    f.gamma = (etap * (1.0 - std::norm(zn)) - eta * (1.0 - std::norm(zpn))) /
              (a * c * h);
    f.margin = f.alpha + f.beta + f.gamma - 1.0;

    // Independent route: the same sum factors over the side directions
    //   a e^{iA} = zeta + 1,  b e^{iB} = zeta' - zeta,  c e^{iC} = 1 - zeta',
    // with B taken as the smallest positive representative and A, C pulled
    // into (B - pi, B].  Convexity is exactly the sign of -sin((A + C) / 2).
    double B = std::arg(zpn - zn);
    if (B <= 0.0) B += 2.0 * kPi;
    const double A = into_window(std::arg(zn + 1.0), B);
    const double C = into_window(std::arg(1.0 - zpn), B);
    const double Z = -4.0 * a * b * c * std::sin(0.5 * (A + C)) *
                     std::cos(0.5 * (B - A)) * std::cos(0.5 * (B - C));
    f.margin_trig = Z / (a * c * h);

    fill_linear_route(lightlike(zn, a * b), lightlike(zpn, b * c), kInfinity,
                      lightlike(cplx{1.0, 0.0}, a * c) -
                          lightlike(cplx{-1.0, 0.0}, a * c),
                      lightlike(cplx{-1.0, 0.0}, a * c), f);
}

}  // namespace

FaceCertificate interior_face_certificate(const InterfaceLayer& layer) {
    FaceCertificate f;
    f.interface_index = layer.index;
    f.kind = FaceKind::interior;
    fill_interior_routes(layer, f);
    fill_handedness(layer, f);
    return f;
}

FaceCertificate pinched_face_certificate(const InterfaceLayer& layer) {
    FaceCertificate f;
    f.interface_index = layer.index;
    f.kind = FaceKind::pinched;
    // Same linear system in the developed layer; at the exact pinch
    // (zeta' = 0) the closed forms reduce to alpha = 0, beta = |zeta| / a,
    // gamma = 1 / a, margin = (1 + |zeta|) / |zeta + 1| - 1 > 0 by the
    // strict triangle inequality in (0, -1, zeta).  No deck map crosses a
    // pinched layer, so there is no handedness to check.
    fill_interior_routes(layer, f);
    f.hand_im = 0.0;
    f.handedness = f.expected = '-';
    f.hand_ok = true;
    return f;
}

FaceCertificate core_face_certificate(const InterfaceLayer& layer) {
    FaceCertificate f;
    f.interface_index = layer.index;
    f.kind = FaceKind::core;

    // The collapsed hexagon is the broken line (zeta, -1, 1, -zeta); the last
    // tetrahedron and its half-turn image are glued along the face through
    // the pivot pair, with apices at +-zeta.  Horoball diameters: 2a at the
    // pivot pair and a^2 at +-zeta, a = |zeta + 1|.
    const cplx zn = layer.zeta_n;
    const double a = std::abs(zn + 1.0);
    if (a == 0.0 || zn.imag() == 0.0)
        throw std::domain_error("canonical: degenerate core interface");

    // Closed forms for (v_zeta + v_-zeta) / 2 = alpha v_inf + beta v_1 + gamma v_-1.
    f.alpha = (std::norm(zn) - 1.0) / (a * a);
    f.beta = 1.0 / a;
    f.gamma = 1.0 / a;
    f.margin = f.alpha + f.beta + f.gamma - 1.0;

    // Same quantity, factored: the margin is positive exactly by the strict
    // triangle inequality |zeta| + 1 > |zeta + 1| in the triangle (0, -1, zeta).
    const double r = std::abs(zn);
    f.margin_trig = (r - (a - 1.0)) * (r + (a - 1.0)) / (a * a);

    fill_linear_route(kInfinity, lightlike(cplx{1.0, 0.0}, 2.0 * a),
                      lightlike(cplx{-1.0, 0.0}, 2.0 * a),
                      lightlike(zn, a * a) - lightlike(-zn, a * a),
                      lightlike(-zn, a * a), f);
    fill_handedness(layer, f);
    return f;
}

FaceCertificate boundary_face_certificate(const std::vector<cplx>& hex) {
    if (hex.size() != 6)
        throw std::invalid_argument("boundary certificate: need a hexagon");

    FaceCertificate f;
    f.interface_index = 0;
    f.kind = FaceKind::boundary;
    f.hand_im = 0.0;
    f.handedness = f.expected = '-';
    f.hand_ok = true;

    // Locate the flat vertex pair (interior angle pi); by the boundary angle
    // identities the hexagon is exactly flat at the vertex pair of the zero
    // boundary angle, for any positive angle structure.
    int flat = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) {
        cplx v = hex[k];
        cplx prev = hex[(k + 5) % 6];
        cplx next = hex[(k + 1) % 6];
        double ang = std::arg((prev - v) / (next - v));
        if (ang < 0.0) ang += 2.0 * kPi;
        double defect = std::abs(ang - kPi);
        if (defect < best) {
            best = defect;
            flat = k;
        }
    }
    f.flat_residual = best;

    const cplx fv = hex[flat];
    const cplx a = hex[(flat + 5) % 6];
    const cplx c = hex[(flat + 1) % 6];
    const double half1 = std::abs(fv - a);
    const double half2 = std::abs(c - fv);
    f.square_residual = std::abs(half1 - half2) / (half1 + half2);

    // Similarity-invariant shape of the two translated hexagons meeting
    // along the flat edge; the antipodal flat vertex gives the same value.
    const cplx zeta = (c - a) / (a + c);
    const double r = std::abs(zeta);
    if (r == 0.0) throw std::domain_error("boundary certificate: degenerate");

    // lambda v_{zeta+1} + (1-lambda) v_{-zeta-1} = alpha v_1 + beta v_inf
    // + gamma v_-1 with the diameters of the header comment.
    f.alpha = 1.0 / r;
    f.gamma = 1.0 / r;
    f.beta = (std::norm(zeta + 1.0) - 1.0) / (r * r);
    f.margin = f.alpha + f.beta + f.gamma - 1.0;

    // Factored route: margin = 2 (|zeta| + Re zeta) / |zeta|^2, positive by
    // the strict triangle inequality in (0, zeta, -1) folded into half-angle
    // form.
    const double phi = std::arg(zeta);
    const double cph = std::cos(0.5 * phi);
    f.margin_trig = 4.0 * cph * cph / r;

    fill_linear_route(lightlike(cplx{1.0, 0.0}, 2.0 * r), kInfinity,
                      lightlike(cplx{-1.0, 0.0}, 2.0 * r),
                      lightlike(zeta + 1.0, r * r) -
                          lightlike(-zeta - 1.0, r * r),
                      lightlike(-zeta - 1.0, r * r), f);
    return f;
}

namespace {

void absorb_face(CanonicityCertificate& out, FaceCertificate f) {
    out.min_margin = std::min(out.min_margin, f.margin);
    out.max_two_route_error =
        std::max(out.max_two_route_error, std::abs(f.margin - f.margin_trig));
    out.max_ls_error =
        std::max(out.max_ls_error,
                 std::max(std::abs(f.margin - f.margin_ls), f.ls_residual));
    out.all_hands_match = out.all_hands_match && f.hand_ok;
    out.faces.push_back(std::move(f));
}

void settle_verdict(CanonicityCertificate& out, const CertifyConfig& cfg) {
    if (out.min_margin <= -cfg.margin_floor) {
        out.verdict = Verdict::non_canonical;
    } else if (out.min_margin > cfg.margin_floor &&
               out.max_holonomy_residual <= cfg.holonomy_tol &&
               out.all_hands_match) {
        out.verdict = Verdict::canonical;
    } else {
        out.verdict = Verdict::indeterminate;
    }
}

}  // namespace

CanonicityCertificate certify(const DevelopedCusp& dev,
                              const CertifyConfig& cfg) {
    if (dev.layers.empty())
        throw std::invalid_argument("certify: empty development");

    CanonicityCertificate out;
    out.margin_floor = cfg.margin_floor;
    out.faces.reserve(dev.layers.size() + 1);

    out.min_margin = std::numeric_limits<double>::infinity();
    out.all_hands_match = true;
    for (const InterfaceLayer& layer : dev.layers) {
        absorb_face(out, layer.collapsed ? core_face_certificate(layer)
                    : layer.pinched     ? pinched_face_certificate(layer)
                                        : interior_face_certificate(layer));
    }

    out.max_holonomy_residual = std::max(
        {dev.max_chain_residual, dev.fold_residual, dev.meridian_residual,
         dev.max_shape_product_error, dev.max_interior_angle_error,
         dev.max_boundary_angle_error});

    settle_verdict(out, cfg);
    return out;
}

CanonicityCertificate certify_filled(const DevelopedCusp& dev,
                                     const CertifyConfig& cfg) {
    CanonicityCertificate out = certify(dev, cfg);
    FaceCertificate bf = boundary_face_certificate(dev.outer_hexagon);
    out.max_holonomy_residual = std::max(
        {out.max_holonomy_residual, bf.square_residual, bf.flat_residual});
    absorb_face(out, bf);
    settle_verdict(out, cfg);
    return out;
}

}  // namespace dehncan
