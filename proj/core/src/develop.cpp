#include "dehncan/develop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dehncan/spun.hpp"

namespace dehncan {

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx polar(double r, double phi) { return std::polar(r, phi); }

// 2x2 complex matrices acting as Mobius transformations.
struct Mat2 {
    cplx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
};

Mat2 mul(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

Mat2 inverse_det1(const Mat2& m) {
    // inverse of a det-1 matrix
    return {m.d, -m.b, -m.c, m.a};
}

Mat2 mat_pow(Mat2 m, std::int64_t e) {
    if (e < 0) {
        m = inverse_det1(m);
        e = -e;
    }
    Mat2 r;
    while (e > 0) {
        if (e & 1) r = mul(r, m);
        m = mul(m, m);
        e >>= 1;
    }
    return r;
}

double dist_to_pm_identity(const Mat2& m) {
    double dp = std::max(std::max(std::abs(m.a - 1.0), std::abs(m.d - 1.0)),
                         std::max(std::abs(m.b), std::abs(m.c)));
    double dm = std::max(std::max(std::abs(m.a + 1.0), std::abs(m.d + 1.0)),
                         std::max(std::abs(m.b), std::abs(m.c)));
    return std::min(dp, dm);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("develop: ") + what);
}

// The deck transformation around the pivot edge of a layer, developed in the
// base frame and normalized to determinant 1.  In the layer's own frame the
// map is pinned by where it sends the pivot pair and the zeta vertex:
//   L layer: f(-1) = inf, f(inf) = 1,  f(zeta) = zeta'
//            => f(u) = 1 + K/(u+1),   K = (zeta+1)(zeta'-1),
//   R layer: f(1)  = inf, f(inf) = -1, f(zeta) = zeta'
//            => f(u) = -1 + K/(u-1),  K = (zeta'+1)(zeta-1),
// the R form being the mirror image (-conj) of the L form.
Mat2 deck_matrix(const InterfaceLayer& L) {
    Mat2 f;
    if (L.letter == 'L') {
        cplx K = (L.zeta + 1.0) * (L.zeta_p - 1.0);
        f = {1.0, 1.0 + K, 1.0, 1.0};
    } else {
        cplx K = (L.zeta_p + 1.0) * (L.zeta - 1.0);
        f = {-1.0, 1.0 + K, 1.0, -1.0};
    }
    cplx s = L.frame_scale;  // conjugate by u -> s u
    f.b *= s;
    f.c /= s;
    cplx root = std::sqrt(f.a * f.d - f.b * f.c);
    f.a /= root;
    f.b /= root;
    f.c /= root;
    f.d /= root;
    return f;
}

// Mirror image of a counterclockwise polygon, re-ordered counterclockwise.
std::vector<cplx> mirror_polygon(const std::vector<cplx>& poly) {
    std::vector<cplx> out;
    out.reserve(poly.size());
    out.push_back(-std::conj(poly[0]));
    for (std::size_t k = poly.size(); k-- > 1;) out.push_back(-std::conj(poly[k]));
    return out;
}

}  // namespace

cplx tet_shape(const TetAngles& t, char slot) {
    switch (slot) {
        case 'x': return polar(std::sin(t.y) / std::sin(t.z), t.x);
        case 'y': return polar(std::sin(t.z) / std::sin(t.x), t.y);
        case 'z': return polar(std::sin(t.x) / std::sin(t.y), t.z);
        default: throw std::invalid_argument("tet_shape: slot must be x, y or z");
    }
}

DevelopedCusp develop(const FareyPath& path, const BoundaryAngles& b,
                      const std::vector<double>& z) {
    const int N = path.N();
    require(N >= 2, "path length must be at least 2");
    require(static_cast<int>(z.size()) == N + 1, "z must have N+1 entries");

    std::vector<TetAngles> tet(N);  // tet[i] = angles of Delta_i, i in 1..N-1
    for (int i = 1; i <= N - 1; ++i) tet[i] = tet_angles(path, z, i);

    DevelopedCusp out;
    out.layers.reserve(N - 1);

    // --- per-layer closed forms -------------------------------------------
    //
    // In the mirror-normalized frame the hexagon reads counterclockwise
    // (-1, zeta, zeta', 1, -zeta, -zeta').  Two of the four cusp triangles of
    // the adjacent tetrahedra have all three vertices among these slots:
    //
    //   * the "tent" of Delta_i, ccw (zeta, 1, zeta'), apex angle z_i at
    //     zeta', base angles those of Delta_i at the slopes of 1 and zeta;
    //   * the corner of Delta_{i+1}, ccw (-1, zeta, zeta'), apex angle
    //     z_{i+1} at zeta, base angles those of Delta_{i+1}.
    //
    // Writing u = zeta' - zeta, the two prescribed shapes pin
    //   zeta' = 1 + (sin B0 / sin B1) e^{i z_i} u,
    //   zeta  = -1 - (sin A+ / sin A-) e^{i z_{i+1}} u,
    // and subtracting gives u = 2 / (1 - S) with
    //   S = (sin B0 / sin B1) e^{i z_i} + (sin A+ / sin A-) e^{i z_{i+1}}.
    // At the folded last layer the corner equation is replaced by the fold
    // identification zeta' = -1, so u = -2 (sin B1 / sin B0) e^{-i z_i}.
    for (int i = 1; i <= N - 1; ++i) {
        InterfaceLayer L;
        L.index = i;
        L.letter = path.word[i];
        L.collapsed = (i == N - 1);
        L.pivot = path.pivot[i];
        L.zeta_slope = path.rho[i + 1];
        L.zeta_p_slope = path.nu[i];

        require(L.pivot == path.xi[i] || L.pivot == path.eta[i],
                "pivot must be an end of e_i");
        require(L.zeta_slope == path.xi[i] || L.zeta_slope == path.eta[i],
                "rho_{i+1} must be the other end of e_i");

        const TetAngles& ti = tet[i];
        double tent_at_pivot = (L.pivot == path.xi[i]) ? ti.x : ti.y;
        double tent_at_zeta = (L.zeta_slope == path.xi[i]) ? ti.x : ti.y;
        double sB = std::sin(tent_at_zeta) / std::sin(tent_at_pivot);

        if (L.collapsed) {
            cplx u = -2.0 * polar(1.0 / sB, -ti.z);
            L.zeta_p_n = -1.0;
            L.zeta_n = L.zeta_p_n - u;
        } else {
            const TetAngles& tn = tet[i + 1];
            require(L.pivot == path.xi[i + 1] || L.pivot == path.eta[i + 1],
                    "pivot must be an end of e_{i+1}");
            double corner_at_pivot = (L.pivot == path.xi[i + 1]) ? tn.x : tn.y;
            double corner_at_zeta_p =
                (L.zeta_p_slope == path.xi[i + 1]) ? tn.x : tn.y;
            double sA = std::sin(corner_at_zeta_p) / std::sin(corner_at_pivot);

            cplx S = polar(sB, ti.z) + polar(sA, tn.z);
            cplx u = 2.0 / (1.0 - S);
            L.zeta_p_n = 1.0 + polar(sB, ti.z) * u;
            L.zeta_n = -1.0 - polar(sA, tn.z) * u;
        }

        if (L.letter == 'L') {
            L.zeta = L.zeta_n;
            L.zeta_p = L.zeta_p_n;
        } else {
            L.zeta = -std::conj(L.zeta_n);
            L.zeta_p = -std::conj(L.zeta_p_n);
        }

        double ea = std::abs(L.zeta_n + 1.0);
        double eb = std::abs(L.zeta_p_n - L.zeta_n);
        double ec = std::abs(1.0 - L.zeta_p_n);
        L.diam_pivot = ea * ec;
        L.diam_zeta = ea * eb;
        L.diam_zeta_p = eb * ec;

        out.layers.push_back(L);
    }

    // --- frame chaining and consistency residuals --------------------------
    //
    // Consecutive layers share the vertex pairs of the slopes pivot_{i+1}
    // and rho_{i+2}: at a hinge the pivot moves to the zeta' pair of layer i
    // (frame divisor zeta'_i), otherwise it stays at +-1 (divisor 1).  The
    // predicted position of the next zeta vertex against its locally
    // computed value is exactly the gluing consistency of one interior edge
    // class; the last entry (into the collapsed layer) is the fold closure.
    for (int i = 1; i <= N - 2; ++i) {
        InterfaceLayer& cur = out.layers[i - 1];
        InterfaceLayer& nxt = out.layers[i];
        bool hinge = path.hinge[i + 1];
        if (hinge) {
            require(nxt.pivot == cur.zeta_p_slope && nxt.zeta_slope == cur.pivot,
                    "hinge must move the pivot to the previous nu");
        } else {
            require(nxt.pivot == cur.pivot && nxt.zeta_slope == cur.zeta_p_slope,
                    "fan must keep the pivot");
        }
        // The shared vertex pair only determines the frame change up to the
        // central symmetry u -> -u; resolve the sign by which antipode the
        // next layer's zeta actually lands on, since a sign slip would
        // conjugate every later deck matrix by the half-turn.
        cplx predicted = hinge ? 1.0 / cur.zeta_p : cur.zeta_p;
        double dplus = std::abs(nxt.zeta - predicted);
        double dminus = std::abs(nxt.zeta + predicted);
        double sign = (dplus <= dminus) ? 1.0 : -1.0;
        out.chain_residuals.push_back(std::min(dplus, dminus) /
                                      (1.0 + std::abs(nxt.zeta) +
                                       std::abs(predicted)));
        nxt.frame_scale =
            cur.frame_scale * sign * (hinge ? cur.zeta_p : cplx{1.0, 0.0});
    }
    if (!out.chain_residuals.empty()) {
        out.max_chain_residual = *std::max_element(out.chain_residuals.begin(),
                                                   out.chain_residuals.end());
        out.fold_residual = out.chain_residuals.back();
    }

    // --- outermost cross-section H_0 ---------------------------------------
    //
    // Un-cut the corner of Delta_1: the apex of slope r sits outside layer 1
    // across its cut edge (-1 -> zeta), forming the ccw triangle
    // (-1, r, zeta) with apex angle z_1.  For a ccw triangle (P1, P2, P3)
    // with angles psi_k at P_k, the law of sines gives
    //   P2 = P1 + (P3 - P1) (sin psi_3 / sin psi_2) e^{-i psi_1}.
    {
        const InterfaceLayer& L1 = out.layers.front();
        const TetAngles& t1 = tet[1];
        double at_pivot = (L1.pivot == path.xi[1]) ? t1.x : t1.y;
        double at_zeta = (L1.zeta_slope == path.xi[1]) ? t1.x : t1.y;
        cplx base = L1.zeta_n - (-1.0);
        cplx apex = -1.0 + base * polar(std::sin(at_zeta) / std::sin(t1.z),
                                        -at_pivot);
        std::vector<cplx> h0{-1.0, apex, L1.zeta_n, 1.0, -apex, -L1.zeta_n};
        out.outer_hexagon = (L1.letter == 'L') ? h0 : mirror_polygon(h0);
    }

    // --- edge classes: angle sums and shape products ------------------------
    //
    // Incidences of an edge class (a path slope, with the two ends of e_N
    // identified by the fold): the x angle of Delta_i lands twice on xi_i,
    // the y angle twice on eta_i, and the z angle once on each of rho_i
    // (corner apex) and nu_i (tent apex).
    {
        std::vector<Slope> slopes{path.p, path.q, path.r};
        for (int i = 1; i <= N - 1; ++i) slopes.push_back(path.nu[i]);
        auto id_of = [&](const Slope& s) {
            for (std::size_t k = 0; k < slopes.size(); ++k)
                if (slopes[k] == s) return static_cast<int>(k);
            throw std::logic_error("develop: slope outside the path vertex set");
        };
        std::vector<int> parent(slopes.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int k) {
            while (parent[k] != k) k = parent[k] = parent[parent[k]];
            return k;
        };
        parent[find(id_of(path.xi[N]))] = find(id_of(path.eta[N]));

        std::vector<double> angle(slopes.size(), 0.0);
        std::vector<cplx> prod(slopes.size(), cplx{1.0, 0.0});
        auto add = [&](const Slope& s, double a, cplx sh) {
            int k = find(id_of(s));
            angle[k] += a;
            prod[k] *= sh;
        };
        for (int i = 1; i <= N - 1; ++i) {
            const TetAngles& t = tet[i];
            cplx sx = tet_shape(t, 'x'), sy = tet_shape(t, 'y'),
                 sz = tet_shape(t, 'z');
            add(path.xi[i], 2 * t.x, sx * sx);
            add(path.eta[i], 2 * t.y, sy * sy);
            add(path.rho[i], t.z, sz);
            add(path.nu[i], t.z, sz);
        }

        for (std::size_t k = 0; k < slopes.size(); ++k) {
            if (find(static_cast<int>(k)) != static_cast<int>(k)) continue;
            EdgeClassCheck ec;
            for (std::size_t l = 0; l < slopes.size(); ++l)
                if (find(static_cast<int>(l)) == static_cast<int>(k))
                    ec.slopes.push_back(slopes[l]);
            double theta = -1;
            for (const Slope& s : ec.slopes) {
                if (s == path.p) theta = b.p;
                if (s == path.q) theta = b.q;
                if (s == path.r) theta = b.r;
            }
            ec.boundary = theta >= 0;
            ec.angle_target = ec.boundary ? kPi - theta : 2 * kPi;
            ec.angle_sum = angle[k];
            ec.shape_product = prod[k];
            double aerr = std::abs(ec.angle_sum - ec.angle_target);
            if (ec.boundary) {
                out.max_boundary_angle_error =
                    std::max(out.max_boundary_angle_error, aerr);
            } else {
                out.max_interior_angle_error =
                    std::max(out.max_interior_angle_error, aerr);
                out.max_shape_product_error =
                    std::max(out.max_shape_product_error,
                             std::abs(ec.shape_product - 1.0));
            }
            out.edge_classes.push_back(std::move(ec));
        }
    }

    // --- meridian holonomy --------------------------------------------------
    //
    // Every interface deck map is a power of the holonomy of the core
    // curve.  The core exponent nu(x) attached to an edge of slope x is
    // additive along the path: each new vertex inherits the sum of the
    // exponents of the two ends of the edge it cones over, and the
    // meridian itself gets exponent zero.  Running that integer recursion
    // from symbolic values (n_left, n_right) at the two ends of the first
    // interface edge and imposing nu(meridian) = 0 pins every pivot
    // exponent up to one overall scale, which cancels below.  For two
    // interface maps F_i = phi^{nu_i} and F_j = phi^{nu_j} the combination
    // F_i^{nu_j / g} F_j^{-nu_i / g}  (g = gcd(nu_i, nu_j))
    // is the holonomy of a curve whose homology class is a multiple of the
    // meridian, so it must be +-identity exactly at the complete structure.
    // With a single pivot slope all exponents coincide and the two matrices
    // develop the same group element, so they are compared directly; N == 2
    // offers no pair at all, and the residual falls back to the meridian
    // scaling holonomy of the equivalent spun solid torus.
    if (N == 2) {
        SpunTorusResult sp =
            spun_torus_solve(b.p, b.r, b.q, wedge(path.m, path.p),
                             wedge(path.m, path.q));
        out.meridian_residual = std::abs(sp.eta_mu - 1.0);
    } else {
        int j = -1;
        for (int k = 2; k <= N - 1; ++k) {
            if (!(path.pivot[k] == path.pivot[1])) {
                j = k;
                break;
            }
        }
        if (j < 0) {
            Mat2 m = mul(deck_matrix(out.layers.front()),
                         inverse_det1(deck_matrix(out.layers.back())));
            out.meridian_residual = dist_to_pm_identity(m);
        } else {
            // Coefficients of nu over the base pair (n_left, n_right).
            std::map<Slope, std::array<std::int64_t, 2>,
                     bool (*)(const Slope&, const Slope&)>
                coeff(&slope_less);
            coeff[path.eta[1]] = {1, 0};
            coeff[path.xi[1]] = {0, 1};
            for (int i = 1; i <= N; ++i) {
                const auto& cx = coeff.at(path.xi[i]);
                const auto& ce = coeff.at(path.eta[i]);
                coeff[path.nu[i]] = {cx[0] + ce[0], cx[1] + ce[1]};
            }
            const auto& cm = coeff.at(path.nu[N]);
            std::int64_t g0 = std::gcd(cm[0], cm[1]);
            require(g0 > 0, "develop: degenerate meridian exponent");
            auto nu_of = [&](const Slope& s) {
                const auto& c = coeff.at(s);
                return (c[0] * cm[1] - c[1] * cm[0]) / g0;
            };
            std::int64_t wi = nu_of(path.pivot[1]), wj = nu_of(path.pivot[j]);
            require(wi != 0 && wj != 0, "develop: zero pivot exponent");
            // The closed-form deck maps are written in mirror-normalized
            // frames, so the step direction around the pivot toggles exactly
            // where the word switches from R to L.  Fold that toggle into
            // the exponent of the second layer so both matrices are powers
            // of the core holonomy measured in the same direction.
            std::int64_t eps = 1;
            for (int k = 2; k <= j; ++k) {
                if (path.word[k - 1] == 'R' && path.word[k] == 'L') eps = -eps;
            }
            wj *= eps;
            std::int64_t g = std::gcd(wi, wj);
            Mat2 m = mul(mat_pow(deck_matrix(out.layers[0]), wj / g),
                         mat_pow(deck_matrix(out.layers[j - 1]), -wi / g));
            out.meridian_residual = dist_to_pm_identity(m);
        }
    }

    return out;
}

DevelopedCusp develop_even(const FareyPath& path, const BoundaryAngles& b,
                           const std::vector<double>& z) {
    const int N = path.N();
    require(N >= 1, "path length must be at least 1");
    require(static_cast<int>(z.size()) == N + 2, "z must have N+2 entries");

    // tet[i] = angles shared by both tetrahedra of pair i (1..N);
    // tet[N+1] = the closing tetrahedron.
    std::vector<TetAngles> tet(N + 2);
    for (int i = 1; i <= N; ++i) tet[i] = even_pair_angles(path, z, i);
    tet[N + 1] = even_last_angles(path, z);

    const Slope zslope = closing_zeta_slope(path);
    const Slope zpivot = (path.xi[N] == zslope) ? path.eta[N] : path.xi[N];

    DevelopedCusp out;
    out.layers.reserve(N);

    // --- per-layer closed forms -------------------------------------------
    //
    // Layers 1..N-1 are exactly the solid-torus interfaces (tent of pair i,
    // corner of pair i+1).  Layer N is the pinched interface: the tent is
    // the cusp triangle of pair N and the corner belongs to the closing
    // tetrahedron, whose apex angle z_{N+1} sits at the zeta vertex and
    // whose angle pi - z_N faces the zeta' pair.  Nothing pins zeta' to the
    // puncture; |zeta'_N| -> 0 emerges at the critical point and is reported
    // as the fold residual.
    for (int i = 1; i <= N; ++i) {
        InterfaceLayer L;
        L.index = i;

        if (i < N) {
            L.letter = path.word[i];
            L.pivot = path.pivot[i];
            L.zeta_slope = path.rho[i + 1];
            L.zeta_p_slope = path.nu[i];
            require(L.pivot == path.xi[i] || L.pivot == path.eta[i],
                    "pivot must be an end of e_i");
            require(L.zeta_slope == path.xi[i] || L.zeta_slope == path.eta[i],
                    "rho_{i+1} must be the other end of e_i");

            const TetAngles& ti = tet[i];
            double tent_at_pivot = (L.pivot == path.xi[i]) ? ti.x : ti.y;
            double tent_at_zeta = (L.zeta_slope == path.xi[i]) ? ti.x : ti.y;
            double sB = std::sin(tent_at_zeta) / std::sin(tent_at_pivot);

            const TetAngles& tn = tet[i + 1];
            require(L.pivot == path.xi[i + 1] || L.pivot == path.eta[i + 1],
                    "pivot must be an end of e_{i+1}");
            double corner_at_pivot = (L.pivot == path.xi[i + 1]) ? tn.x : tn.y;
            double corner_at_zeta_p =
                (L.zeta_p_slope == path.xi[i + 1]) ? tn.x : tn.y;
            double sA = std::sin(corner_at_zeta_p) / std::sin(corner_at_pivot);

            cplx S = polar(sB, ti.z) + polar(sA, tn.z);
            cplx u = 2.0 / (1.0 - S);
            L.zeta_p_n = 1.0 + polar(sB, ti.z) * u;
            L.zeta_n = -1.0 - polar(sA, tn.z) * u;

            if (L.letter == 'L') {
                L.zeta = L.zeta_n;
                L.zeta_p = L.zeta_p_n;
            } else {
                L.zeta = -std::conj(L.zeta_n);
                L.zeta_p = -std::conj(L.zeta_p_n);
            }
        } else {
            L.pinched = true;
            L.letter = 'L';  // re-resolved by the closing chain step (N >= 2)
            L.pivot = zpivot;
            L.zeta_slope = zslope;
            L.zeta_p_slope = path.nu[N];

            const TetAngles& ti = tet[N];
            double tent_at_pivot = (L.pivot == path.xi[N]) ? ti.x : ti.y;
            double tent_at_zeta = (L.zeta_slope == path.xi[N]) ? ti.x : ti.y;
            double sB = std::sin(tent_at_zeta) / std::sin(tent_at_pivot);

            const TetAngles& tn = tet[N + 1];
            double corner_at_pivot = (L.pivot == path.xi[N]) ? tn.x : tn.y;
            double apex = (L.zeta_slope == path.xi[N]) ? tn.x : tn.y;
            double sA = std::sin(tn.z) / std::sin(corner_at_pivot);

            cplx S = polar(sB, ti.z) + polar(sA, apex);
            cplx u = 2.0 / (1.0 - S);
            L.zeta_p_n = 1.0 + polar(sB, ti.z) * u;
            L.zeta_n = -1.0 - polar(sA, apex) * u;
        }

        double ea = std::abs(L.zeta_n + 1.0);
        double eb = std::abs(L.zeta_p_n - L.zeta_n);
        double ec = std::abs(1.0 - L.zeta_p_n);
        L.diam_pivot = ea * ec;
        L.diam_zeta = ea * eb;
        L.diam_zeta_p = eb * ec;

        out.layers.push_back(L);
    }

    // --- frame chaining ------------------------------------------------------
    //
    // Steps between regular layers follow the solid-torus rule.  The closing
    // step (into the pinched layer) always keeps the pivot: the last edge
    // e_N joins the pivot to the previous nu, so the pinched layer's zeta
    // pair is predicted at the previous zeta' directly.  The pinched layer
    // carries no word letter; its mirror state is resolved here by which of
    // the two mirror images matches the prediction (for N == 1 there is no
    // constraint and the normalized picture is kept).
    for (int i = 1; i <= N - 1; ++i) {
        InterfaceLayer& cur = out.layers[i - 1];
        InterfaceLayer& nxt = out.layers[i];
        if (i < N - 1) {
            bool hinge = path.hinge[i + 1];
            if (hinge) {
                require(nxt.pivot == cur.zeta_p_slope &&
                            nxt.zeta_slope == cur.pivot,
                        "hinge must move the pivot to the previous nu");
            } else {
                require(nxt.pivot == cur.pivot &&
                            nxt.zeta_slope == cur.zeta_p_slope,
                        "fan must keep the pivot");
            }
            cplx predicted = hinge ? 1.0 / cur.zeta_p : cur.zeta_p;
            double dplus = std::abs(nxt.zeta - predicted);
            double dminus = std::abs(nxt.zeta + predicted);
            double sign = (dplus <= dminus) ? 1.0 : -1.0;
            out.chain_residuals.push_back(
                std::min(dplus, dminus) /
                (1.0 + std::abs(nxt.zeta) + std::abs(predicted)));
            nxt.frame_scale =
                cur.frame_scale * sign * (hinge ? cur.zeta_p : cplx{1.0, 0.0});
        } else {
            require(nxt.pivot == cur.pivot && nxt.zeta_slope == cur.zeta_p_slope,
                    "closing step must keep the pivot");
            cplx predicted = cur.zeta_p;
            double best = std::numeric_limits<double>::infinity();
            double sign = 1.0;
            char letter = 'L';
            for (char cand : {'L', 'R'}) {
                cplx zt = (cand == 'L') ? nxt.zeta_n : -std::conj(nxt.zeta_n);
                double dplus = std::abs(zt - predicted);
                double dminus = std::abs(zt + predicted);
                if (std::min(dplus, dminus) < best) {
                    best = std::min(dplus, dminus);
                    sign = (dplus <= dminus) ? 1.0 : -1.0;
                    letter = cand;
                }
            }
            nxt.letter = letter;
            out.chain_residuals.push_back(
                best / (1.0 + std::abs(nxt.zeta_n) + std::abs(predicted)));
            nxt.frame_scale = cur.frame_scale * sign;
        }
    }
    {
        InterfaceLayer& LN = out.layers.back();
        if (LN.letter == 'L') {
            LN.zeta = LN.zeta_n;
            LN.zeta_p = LN.zeta_p_n;
        } else {
            LN.zeta = -std::conj(LN.zeta_n);
            LN.zeta_p = -std::conj(LN.zeta_p_n);
        }
        out.fold_residual = std::abs(LN.zeta_p_n);
    }
    if (!out.chain_residuals.empty())
        out.max_chain_residual = *std::max_element(out.chain_residuals.begin(),
                                                   out.chain_residuals.end());

    // --- outermost cross-section H_0 ----------------------------------------
    //
    // Identical to the solid torus: un-cut the corner of pair 1.
    {
        const InterfaceLayer& L1 = out.layers.front();
        const TetAngles& t1 = tet[1];
        double at_pivot = (L1.pivot == path.xi[1]) ? t1.x : t1.y;
        double at_zeta = (L1.zeta_slope == path.xi[1]) ? t1.x : t1.y;
        cplx base = L1.zeta_n - (-1.0);
        cplx apex = -1.0 + base * polar(std::sin(at_zeta) / std::sin(t1.z),
                                        -at_pivot);
        std::vector<cplx> h0{-1.0, apex, L1.zeta_n, 1.0, -apex, -L1.zeta_n};
        out.outer_hexagon = (L1.letter == 'L') ? h0 : mirror_polygon(h0);
    }

    // --- edge classes --------------------------------------------------------
    //
    // The doubled triangulation lives over an index-two lattice, so every
    // path slope carries two parallel edge classes (swapped by the puncture
    // translation; both receive identical contributions, so each row
    // aggregates the pair with multiplicity 2 and doubled angle targets).
    // The closing tetrahedron caps the last pair by folding: the walk around
    // any edge class it touches passes through its link triangles with
    // reversed orientation, so its shapes enter those class products
    // conjugated.  Per class of the last edge pair this reads
    //     (pair half-product) * s_N^2 = conj(closing shape),
    // and around the identified meridian edge the two closing corners give
    //     closing z-shape = -conj(pair-N z-shape),
    // which is the equation that kills the meridian.
    {
        std::vector<Slope> slopes{path.p, path.q, path.r};
        for (int i = 1; i <= N; ++i) slopes.push_back(path.nu[i]);
        auto id_of = [&](const Slope& s) {
            for (std::size_t k = 0; k < slopes.size(); ++k)
                if (slopes[k] == s) return static_cast<int>(k);
            throw std::logic_error("develop: slope outside the path vertex set");
        };
        std::vector<double> angle(slopes.size(), 0.0);
        // half[k]: contributions to ONE of the slope's two parallel classes
        // (the other class receives the identical value).
        std::vector<cplx> half(slopes.size(), cplx{1.0, 0.0});
        auto add = [&](const Slope& s, double a, cplx half_sh) {
            int k = id_of(s);
            angle[k] += a;
            half[k] *= half_sh;
        };
        for (int i = 1; i <= N; ++i) {
            const TetAngles& t = tet[i];
            cplx sx = tet_shape(t, 'x'), sy = tet_shape(t, 'y'),
                 sz = tet_shape(t, 'z');
            add(path.xi[i], 4 * t.x, sx * sx);
            add(path.eta[i], 4 * t.y, sy * sy);
            add(path.rho[i], 2 * t.z, sz);
            add(path.nu[i], 2 * t.z, sz);
        }
        const TetAngles& tc = tet[N + 1];
        cplx cx = tet_shape(tc, 'x'), cy = tet_shape(tc, 'y'),
             cz = tet_shape(tc, 'z');
        angle[id_of(path.xi[N])] += 2 * tc.x;
        angle[id_of(path.eta[N])] += 2 * tc.y;
        angle[id_of(path.nu[N])] += 2 * tc.z;

        const cplx s5z = tet_shape(tet[N], 'z');
        for (std::size_t k = 0; k < slopes.size(); ++k) {
            const Slope& s = slopes[k];
            bool meridian = (s == path.m);
            EdgeClassCheck ec;
            ec.slopes.push_back(s);
            ec.multiplicity = meridian ? 1 : 2;
            double theta = -1;
            if (s == path.p) theta = b.p;
            if (s == path.q) theta = b.q;
            if (s == path.r) theta = b.r;
            ec.boundary = theta >= 0;
            ec.angle_target = ec.boundary ? 2.0 * (kPi - theta)
                              : meridian  ? 2.0 * kPi
                                          : 4.0 * kPi;
            ec.angle_sum = angle[k];
            if (meridian) {
                // merged class: pair-N z-corner vs the folded closing corner
                ec.shape_product = -cz / std::conj(s5z);
            } else if (s == path.xi[N]) {
                ec.shape_product = half[k] / std::conj(cx);
            } else if (s == path.eta[N]) {
                ec.shape_product = half[k] / std::conj(cy);
            } else {
                ec.shape_product = half[k];
            }
            double aerr = std::abs(ec.angle_sum - ec.angle_target);
            if (ec.boundary) {
                out.max_boundary_angle_error =
                    std::max(out.max_boundary_angle_error, aerr);
            } else if (meridian) {
                out.max_interior_angle_error =
                    std::max(out.max_interior_angle_error, aerr);
                out.meridian_residual = std::abs(ec.shape_product - 1.0);
            } else {
                out.max_interior_angle_error =
                    std::max(out.max_interior_angle_error, aerr);
                out.max_shape_product_error =
                    std::max(out.max_shape_product_error,
                             std::abs(ec.shape_product - 1.0));
            }
            out.edge_classes.push_back(std::move(ec));
        }
    }

    return out;
}

}  // namespace dehncan
