#include "dehncan/angles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dehncan/errors.hpp"

namespace dehncan {

namespace {
constexpr double kPi = std::numbers::pi;
}

TetAngles letterpair_angles(char prev, char cur, double a, double b, double c) {
    double straight = 0.5 * (a - 2 * b + c);        // same-letter pair
    double straight_other = kPi - 0.5 * (a + c);
    double turn = 0.5 * (a - b - c);                // hinge pair
    double turn_other = kPi - 0.5 * (a + b - c);
    TetAngles t;
    t.z = b;
    if (prev == cur) {
        t.x = (prev == 'R') ? straight : straight_other;
        t.y = (prev == 'R') ? straight_other : straight;
    } else {
        t.x = (prev == 'R') ? turn : turn_other;
        t.y = (prev == 'R') ? turn_other : turn;
    }
    return t;
}

FeasibilityReport feasible(const FareyPath& path, const BoundaryAngles& b) {
    double lhs = double(wedge(path.m, path.p)) * b.p +
                 double(wedge(path.m, path.q)) * b.q +
                 double(wedge(path.m, path.r)) * b.r;
    FeasibilityReport rep;
    rep.margin = lhs - 2 * kPi;
    rep.feasible = rep.margin > 0;
    return rep;
}

std::vector<double> pinned_z(const FareyPath& path, const BoundaryAngles& b) {
    std::vector<double> z(path.N() + 1, 0.0);
    z[0] = kPi + b.q;
    z[1] = kPi - b.r;
    z[path.N()] = 0.0;
    return z;
}

TetAngles tet_angles(const FareyPath& path, const std::vector<double>& z, int i) {
    if (i < 1 || i > path.N() - 1)
        throw std::out_of_range("tet_angles: tetrahedron index out of range");
    return letterpair_angles(path.word[i - 1], path.word[i], z[i - 1], z[i], z[i + 1]);
}

std::vector<TetAngles> all_tet_angles(const FareyPath& path,
                                      const std::vector<double>& z) {
    std::vector<TetAngles> out;
    out.reserve(path.N() - 1);
    for (int i = 1; i <= path.N() - 1; ++i) out.push_back(tet_angles(path, z, i));
    return out;
}

Slope closing_zeta_slope(const FareyPath& path) {
    return path.N() >= 2 ? path.nu[path.N() - 1] : path.q;
}

TetAngles even_pair_angles(const FareyPath& path, const std::vector<double>& z,
                           int i) {
    const int N = path.N();
    if (i < 1 || i > N)
        throw std::out_of_range("even_pair_angles: pair index out of range");
    if (i < N)
        return letterpair_angles(path.word[i - 1], path.word[i], z[i - 1], z[i],
                                 z[i + 1]);
    const double a = z[N - 1], b = z[N], c = z[N + 1];
    const double at_zeta = kPi - 0.5 * (a + c);
    const double at_pivot = 0.5 * (a - 2.0 * b + c);
    TetAngles t;
    t.z = b;
    const bool xi_is_zeta = (path.xi[N] == closing_zeta_slope(path));
    t.x = xi_is_zeta ? at_zeta : at_pivot;
    t.y = xi_is_zeta ? at_pivot : at_zeta;
    return t;
}

TetAngles even_last_angles(const FareyPath& path, const std::vector<double>& z) {
    const int N = path.N();
    const double b = z[N], c = z[N + 1];
    TetAngles t;
    t.z = kPi - b;
    const bool xi_is_zeta = (path.xi[N] == closing_zeta_slope(path));
    t.x = xi_is_zeta ? c : b - c;
    t.y = xi_is_zeta ? b - c : c;
    return t;
}

bool ConstraintReport::strictly_feasible() const {
    return min_tet_angle > 0 && min_hinge > 0 && min_convexity > 0 && min_range > 0 &&
           z2_headroom > 0;
}

ConstraintReport residuals(const FareyPath& path, const BoundaryAngles& b,
                           const std::vector<double>& z) {
    const int N = path.N();
    ConstraintReport rep;
    const double big = std::numeric_limits<double>::infinity();
    rep.min_tet_angle = big;
    rep.min_hinge = big;
    rep.min_convexity = big;
    rep.min_range = big;
    for (int i = 1; i <= N - 1; ++i) {
        TetAngles t = tet_angles(path, z, i);
        rep.min_tet_angle = std::min({rep.min_tet_angle, t.x, t.y, t.z});
        double a = z[i - 1], bb = z[i], c = z[i + 1];
        if (path.hinge[i])
            rep.min_hinge = std::min(rep.min_hinge, a - bb - c);
        else
            rep.min_convexity = std::min(rep.min_convexity, a + c - 2 * bb);
    }
    for (int i = 2; i <= N - 1; ++i)
        rep.min_range = std::min({rep.min_range, z[i], kPi - z[i]});
    rep.z2_headroom = (N >= 3) ? (kPi - b.q) - z[2] : big;
    return rep;
}

namespace {

// Convex decreasing difference profile d_i = alpha rho^{i-1} + beta pinned by
// d_1 = theta_q + theta_r and sum_{1..count} d_i = total.
bool solve_profile(double rho, int count, double d1, double total, double& alpha,
                   double& beta) {
    double geo = (1.0 - std::pow(rho, count)) / (1.0 - rho);  // sum of rho^{i-1}
    // alpha + beta = d1;  alpha * geo + count * beta = total.
    double det = geo - count;
    if (std::abs(det) < 1e-14) return false;
    alpha = (total - count * d1) / det;
    beta = d1 - alpha;
    return alpha > 0;  // strict decrease
}

}  // namespace

std::vector<double> initial_point(const FareyPath& path, const BoundaryAngles& b) {
    const int N = path.N();
    FeasibilityReport gate = feasible(path, b);
    if (!gate.feasible)
        throw infeasible_error("no positive angle structure: feasibility margin " +
                               std::to_string(gate.margin));
    std::vector<double> z = pinned_z(path, b);
    if (N == 2) return z;

    int first_hinge = 0;
    for (int i = 1; i <= N - 1; ++i)
        if (path.hinge[i]) {
            first_hinge = i;
            break;
        }

    const double d1 = b.q + b.r;  // z_0 - z_1, fixed
    auto try_candidate = [&](const std::vector<double>& cand) -> bool {
        return residuals(path, b, cand).strictly_feasible();
    };

    if (first_hinge == 0) {
        // Single-syllable word: the whole profile is convex decreasing with
        // total drop z_0 - z_N = pi + theta_q.
        for (double rho = 0.98; rho > 0.015; rho -= 0.005) {
            double alpha, beta;
            if (!solve_profile(rho, N, d1, kPi + b.q, alpha, beta)) continue;
            std::vector<double> cand = z;
            double acc = z[0], pow_r = 1.0;
            for (int i = 1; i <= N; ++i) {
                acc -= alpha * pow_r + beta;
                pow_r *= rho;
                if (i < N) cand[i] = acc;
            }
            cand[1] = z[1];  // exact pin (acc reproduces it up to rounding)
            if (try_candidate(cand)) return cand;
        }
    } else {
        const int h = first_hinge;
        // Prefix z_0..z_h: geometric differences; tail z_i = eps * 3^{N-1-i}
        // for h+1 <= i <= N-1, z_N = 0.
        for (double rho = 0.98; rho > 0.015; rho -= 0.005) {
            std::vector<double> cand = z;
            double acc = z[0], d = d1;
            bool ok = true;
            for (int i = 1; i <= h; ++i) {
                acc -= d;
                d *= rho;
                if (acc <= 0) {
                    ok = false;
                    break;
                }
                if (i >= 1 && i <= N - 1) cand[i] = acc;
            }
            if (!ok) continue;
            cand[1] = z[1];
            double drop = cand[h - 1] - cand[h];  // headroom for the hinge at h
            if (drop <= 0) continue;
            if (h <= N - 2) {
                double tail1 = std::pow(3.0, N - 2 - h);  // z'_{h+1}
                double eps = 0.5 * std::min(drop, cand[h]) / tail1;
                for (int shrink = 0; shrink < 8; ++shrink) {
                    for (int i = h + 1; i <= N - 1; ++i)
                        cand[i] = eps * std::pow(3.0, N - 1 - i);
                    if (try_candidate(cand)) return cand;
                    eps *= 0.5;
                }
            } else if (try_candidate(cand)) {
                return cand;
            }
        }
    }
    throw std::logic_error("initial_point: no strictly feasible candidate found");
}

}  // namespace dehncan
