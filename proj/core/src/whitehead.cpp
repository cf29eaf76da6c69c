#include "dehncan/whitehead.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "dehncan/errors.hpp"
#include "dehncan/lobachevsky.hpp"
#include "dehncan/volume.hpp"

namespace dehncan {

namespace {

constexpr double kPi = std::numbers::pi;

// Sign-normalized representative of the filling class {(k,l), (-k,-l)}.
void normalize_class(std::int64_t& k, std::int64_t& l) {
    if (k < 0 || (k == 0 && l < 0)) {
        k = -k;
        l = -l;
    }
}

// Seed triangle for the Farey path, chosen by the position of the meridian
// slope among the breakpoints -2, -1, -1/2, 0, 1/2, 1, 2 so that
//   * the edge pq separates r from m, and
//   * exactly one of p, q is a +-1 slope (the boundary edge whose exterior
//     angle vanishes in the filled structure).
struct SeedRow {
    Slope p, q, r;
    bool theta_on_q;  // true when p carries the +-1 slope
};

SeedRow seed_for(const Slope& m) {
    const Slope inf = make_slope(1, 0);
    const Slope zero = make_slope(0, 1);
    const Slope one = make_slope(1, 1);
    const Slope mone = make_slope(-1, 1);

    // sign of m - num/den for exact rational comparison (m.den >= 0).
    auto cmp = [&m](std::int64_t num, std::int64_t den) {
        const std::int64_t lhs = m.num * den - num * m.den;
        return (lhs > 0) - (lhs < 0);
    };

    if (m.den == 0) throw infeasible_error("meridian slope is the seed vertex 1/0");
    if (cmp(-2, 1) <= 0) return {inf, mone, zero, false};       // m <= -2
    if (cmp(-1, 1) < 0) return {mone, inf, zero, true};         // -2 < m < -1
    if (cmp(-1, 1) == 0) throw infeasible_error("meridian slope -1 is exceptional");
    if (cmp(-1, 2) < 0) return {mone, zero, inf, true};         // -1 < m < -1/2
    if (cmp(0, 1) < 0) return {zero, mone, inf, false};         // -1/2 <= m < 0
    if (cmp(0, 1) == 0) throw infeasible_error("meridian slope 0 is exceptional");
    if (cmp(1, 2) <= 0) return {zero, one, inf, false};         // 0 < m <= 1/2
    if (cmp(1, 1) < 0) return {one, zero, inf, true};           // 1/2 < m < 1
    if (cmp(1, 1) == 0) throw infeasible_error("meridian slope 1 is exceptional");
    if (cmp(2, 1) < 0) return {one, inf, zero, true};           // 1 < m < 2
    return {inf, one, zero, false};                             // m >= 2
}

// One dihedral-angle slot of the filled triangulation as an affine function
// of the joint variables u = (theta, w_2, ..., w_last_free), where
// w_0 = pi + cq * theta and w_1 = theta.  The volume is
// sum wt * Lobachevsky(slot), so slots carry their multiplicity.
struct JointSlot {
    double cst = 0.0;
    double wt = 1.0;
    int n = 0;          // number of joint-variable entries after folding
    int col[3] = {};    // u-indices
    double coef[3] = {};
};

struct JointProblem {
    std::vector<JointSlot> slots;
    int nfree = 0;      // size of u
    int last_free = 0;  // largest free w-index (w_j <-> u_{j-1} for j >= 2)
    int cq = 0;         // 1 when theta_q = theta (w_0 = pi + theta)
    int wsize = 0;      // length of the full w-vector
};

// Folds a w-row (base index i, coefficients over w_{i-1}, w_i, w_{i+1}) into
// joint-variable form.  w_0 and w_1 both feed u_0; trailing pinned entries
// (w_N = 0 for odd fillings) drop out.
JointSlot fold_row(const JointProblem& jp, int i, const double (&wcoef)[3],
                   double cst, double wt) {
    JointSlot s;
    s.cst = cst;
    s.wt = wt;
    auto add = [&s](int col, double c) {
        for (int k = 0; k < s.n; ++k) {
            if (s.col[k] == col) {
                s.coef[k] += c;
                return;
            }
        }
        s.col[s.n] = col;
        s.coef[s.n] = c;
        ++s.n;
    };
    for (int k = 0; k < 3; ++k) {
        const int wcol = i - 1 + k;
        const double c = wcoef[k];
        if (c == 0.0) continue;
        if (wcol == 0) {
            s.cst += c * kPi;
            if (jp.cq) add(0, c);
        } else if (wcol == 1) {
            add(0, c);
        } else if (wcol <= jp.last_free) {
            add(wcol - 1, c);
        }
        // w-columns beyond last_free are pinned to 0 and contribute nothing.
    }
    return s;
}

JointProblem build_problem(const FillingSetup& s) {
    const FareyPath& path = s.path;
    const int N = path.N();

    JointProblem jp;
    jp.cq = s.theta_on_q ? 1 : 0;
    if (s.parity == Parity::odd) {
        jp.wsize = N + 1;
        jp.last_free = N - 1;
    } else {
        jp.wsize = N + 2;
        jp.last_free = N + 1;
    }
    jp.nfree = jp.last_free;  // u = (theta, w_2 .. w_last_free)

    const double pair_wt = (s.parity == Parity::even) ? 2.0 : 1.0;
    const double straight[3] = {0.5, -1.0, 0.5};
    const double straight_other[3] = {-0.5, 0.0, -0.5};
    const double turn[3] = {0.5, -0.5, -0.5};
    const double turn_other[3] = {-0.5, -0.5, 0.5};
    const double zrow[3] = {0.0, 1.0, 0.0};

    for (int i = 1; i <= N - 1; ++i) {
        if (path.word[i - 1] == path.word[i]) {
            jp.slots.push_back(fold_row(jp, i, straight, 0.0, pair_wt));
            jp.slots.push_back(fold_row(jp, i, straight_other, kPi, pair_wt));
        } else {
            jp.slots.push_back(fold_row(jp, i, turn, 0.0, pair_wt));
            jp.slots.push_back(fold_row(jp, i, turn_other, kPi, pair_wt));
        }
        jp.slots.push_back(fold_row(jp, i, zrow, 0.0, pair_wt));
    }

    if (s.parity == Parity::even) {
        // Last pair: straight table regardless of the word, angles at the
        // closing zeta slope and the pivot end of e_N.
        jp.slots.push_back(fold_row(jp, N, straight, 0.0, 2.0));
        jp.slots.push_back(fold_row(jp, N, straight_other, kPi, 2.0));
        jp.slots.push_back(fold_row(jp, N, zrow, 0.0, 2.0));
        // Closing tetrahedron: z_{N+1}, pi - z_N, z_N - z_{N+1}.
        const double row_c[3] = {0.0, 0.0, 1.0};
        const double row_pib[3] = {0.0, -1.0, 0.0};
        const double row_bc[3] = {0.0, 1.0, -1.0};
        jp.slots.push_back(fold_row(jp, N, row_c, 0.0, 1.0));
        jp.slots.push_back(fold_row(jp, N, row_pib, kPi, 1.0));
        jp.slots.push_back(fold_row(jp, N, row_bc, 0.0, 1.0));
    }
    return jp;
}

// Starting interior point in joint coordinates.
std::vector<double> joint_start(const FillingSetup& s) {
    const int N = s.path.N();
    if (s.parity == Parity::odd) {
        const double theta0 = 0.5 * s.theta_max;
        std::vector<double> z =
            initial_point(s.path, filling_angles(s, theta0));
        std::vector<double> u(static_cast<std::size_t>(N - 1));
        u[0] = theta0;
        for (int j = 2; j <= N - 1; ++j) u[j - 1] = z[j];
        return u;
    }
    // Even: a ratio-1/2 geometric profile is strictly feasible for every
    // slot when theta <= pi/2 (each row reduces to a positive combination).
    const double theta0 = 0.5 * kPi;
    std::vector<double> u(static_cast<std::size_t>(N + 1));
    u[0] = theta0;
    for (int j = 2; j <= N + 1; ++j) u[j - 1] = u[j - 2] * 0.5;
    return u;
}

template <class Real>
Real joint_slot_value(const JointSlot& s, const std::vector<Real>& u) {
    Real v = Real(s.cst);
    for (int k = 0; k < s.n; ++k) v += Real(s.coef[k]) * u[s.col[k]];
    return v;
}

template <class Real>
FillingVolume maximize_joint(const FillingSetup& setup, const Config& cfg) {
    const JointProblem jp = build_problem(setup);
    const int nfree = jp.nfree;
    const std::vector<double> start = joint_start(setup);
    std::vector<Real> u(start.begin(), start.end());

    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

    auto value = [&](const std::vector<Real>& uu) {
        Real v = 0;
        for (const auto& s : jp.slots)
            v += Real(s.wt) * lobachevsky(joint_slot_value(s, uu));
        return v;
    };
    auto gradient = [&](const std::vector<Real>& uu) {
        Vec g = Vec::Zero(nfree);
        for (const auto& s : jp.slots) {
            Real d = Real(s.wt) * lobachevsky_deriv(joint_slot_value(s, uu));
            for (int k = 0; k < s.n; ++k) g[s.col[k]] += Real(s.coef[k]) * d;
        }
        return g;
    };

    Real v = value(u);
    int iter = 0;
    for (; iter < cfg.iteration_cap; ++iter) {
        Vec g = gradient(u);
        Real gnorm = g.template lpNorm<Eigen::Infinity>();
        if (double(gnorm) <= cfg.grad_tol) break;

        // Newton direction from the negated (positive definite) Hessian.
        Mat H = Mat::Zero(nfree, nfree);
        for (const auto& s : jp.slots) {
            Real d2 = Real(s.wt) * lobachevsky_deriv2(joint_slot_value(s, u));
            for (int k = 0; k < s.n; ++k)
                for (int l = 0; l < s.n; ++l)
                    H(s.col[k], s.col[l]) -= d2 * Real(s.coef[k]) * Real(s.coef[l]);
        }
        Eigen::LDLT<Mat> ldlt(H);
        Vec dir;
        bool newton_ok = (ldlt.info() == Eigen::Success);
        if (newton_ok) {
            dir = ldlt.solve(g);
            newton_ok = (g.dot(dir) > 0);
        }
        if (!newton_ok) dir = g;

        // Largest step keeping all slot angles positive, with 10% slack.
        Real smax = std::numeric_limits<Real>::infinity();
        for (const auto& s : jp.slots) {
            Real dval = 0;
            for (int k = 0; k < s.n; ++k) dval += Real(s.coef[k]) * dir[s.col[k]];
            if (dval < 0) smax = std::min(smax, -joint_slot_value(s, u) / dval);
        }
        Real step = std::min(Real(1), Real(0.9) * smax);

        std::vector<Real> unew = u;
        Real vnew = v;
        bool accepted = false;
        if (newton_ok && double(gnorm) <= 1e-6) {
            // Quadratic basin: predicted gains fall below objective rounding
            // noise, so a backtracking test cannot decide; the clipped Newton
            // step is safe for a strictly concave smooth objective.
            for (int j = 0; j < nfree; ++j) unew[j] = u[j] + step * dir[j];
            vnew = value(unew);
            accepted = true;
        } else {
            Real slope = g.dot(dir);
            for (int bt = 0; bt < 60; ++bt) {
                for (int j = 0; j < nfree; ++j) unew[j] = u[j] + step * dir[j];
                vnew = value(unew);
                if (vnew >= v + Real(1e-4) * step * slope) {
                    accepted = true;
                    break;
                }
                step *= Real(0.5);
            }
        }
        if (!accepted || unew == u) break;  // resolution limit: check below
        u = unew;
        v = vnew;
    }

    Vec g = gradient(u);
    double gnorm = double(g.template lpNorm<Eigen::Infinity>());
    if (gnorm > cfg.grad_tol)
        throw convergence_error("filled-volume maximization stalled at gradient norm " +
                                std::to_string(gnorm) + " after " +
                                std::to_string(iter) + " iterations");

    FillingVolume out;
    out.theta = double(u[0]);
    out.z.assign(static_cast<std::size_t>(jp.wsize), 0.0);
    out.z[0] = kPi + jp.cq * out.theta;
    out.z[1] = out.theta;
    for (int j = 2; j <= jp.last_free; ++j) out.z[j] = double(u[j - 1]);
    out.value = double(v);
    out.grad_norm = gnorm;
    out.iterations = iter;
    return out;
}

}  // namespace

bool exceptional_filling(std::int64_t k, std::int64_t l) {
    normalize_class(k, l);
    return (k == 0 && l == 1) || (k == 1 && l == 0) ||
           (k == 1 && (l == 1 || l == -1)) || (k == 1 && (l == 2 || l == -2));
}

FillingSetup filling_setup(std::int64_t k, std::int64_t l) {
    normalize_class(k, l);
    if (k == 0 && l == 0)
        throw infeasible_error("filling class (0, 0) is not a slope");
    if (std::gcd(std::abs(k), std::abs(l)) != 1)
        throw infeasible_error("filling class (" + std::to_string(k) + ", " +
                               std::to_string(l) + ") is not primitive");
    if (exceptional_filling(k, l))
        throw infeasible_error(
            "filling class (" + std::to_string(k) + ", " + std::to_string(l) +
            ") is exceptional (the non-hyperbolic classes are +-(0,1), "
            "+-(1,0), +-(1,1), +-(1,-1), +-(1,2), +-(1,-2))");

    FillingSetup s;
    s.k = k;
    s.l = l;
    s.parity = (l % 2 != 0) ? Parity::odd : Parity::even;
    s.m = (s.parity == Parity::odd) ? make_slope(l, 2 * k) : make_slope(l / 2, k);

    const SeedRow row = seed_for(s.m);
    const int min_length = (s.parity == Parity::even) ? 1 : 2;
    s.path = farey_path(row.p, row.q, row.r, s.m, min_length);
    s.theta_on_q = s.path.pq_swapped ? !row.theta_on_q : row.theta_on_q;

    if (s.parity == Parity::even) {
        s.theta_max = kPi;
    } else {
        // Positive angle structures need
        //   (m/\t) theta + (m/\r)(pi - theta) > 2 pi
        // where t is the theta-carrying boundary slope.
        const Slope t = s.theta_on_q ? s.path.q : s.path.p;
        const std::int64_t wt = wedge(s.m, t);
        const std::int64_t wr = wedge(s.m, s.path.r);
        if (wr > wt)
            s.theta_max =
                std::min(kPi, kPi * double(wr - 2) / double(wr - wt));
        else
            s.theta_max = kPi;
    }
    return s;
}

BoundaryAngles filling_angles(const FillingSetup& s, double theta) {
    BoundaryAngles b;
    b.r = kPi - theta;
    if (s.theta_on_q) {
        b.p = 0.0;
        b.q = theta;
    } else {
        b.p = theta;
        b.q = 0.0;
    }
    return b;
}

FillingVolume maximize_filling(const FillingSetup& s, const Config& cfg) {
    if (cfg.precision == Precision::extended)
        return maximize_joint<long double>(s, cfg);
    return maximize_joint<double>(s, cfg);
}

FillingResult whitehead_fill(std::int64_t k, std::int64_t l, const Config& cfg) {
    FillingResult r;
    r.setup = filling_setup(k, l);
    r.vol = maximize_filling(r.setup, cfg);
    const BoundaryAngles b = filling_angles(r.setup, r.vol.theta);
    r.dev = (r.setup.parity == Parity::odd)
                ? develop(r.setup.path, b, r.vol.z)
                : develop_even(r.setup.path, b, r.vol.z);
    CertifyConfig cc;
    cc.margin_floor = cfg.margin_floor;
    r.cert = certify_filled(r.dev, cc);
    return r;
}

}  // namespace dehncan
