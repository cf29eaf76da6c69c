#include "support/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "dehncan/errors.hpp"
#include "dehncan/volume.hpp"

namespace dehncan::testing {

namespace {

constexpr double kPi = std::numbers::pi;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// log(sin t / t), smooth on [0, pi), with the small-t limit handled by series.
double log_sinc(double t) {
    if (t < 1e-8) return -t * t / 6.0;
    return std::log(std::sin(t) / t);
}

}  // namespace

double quadrature_lobachevsky(double x) {
    if (x < 0) return -quadrature_lobachevsky(-x);
    if (x > kPi) throw std::invalid_argument("quadrature oracle domain is [0, pi]");
    if (x > kPi / 2) return -quadrature_lobachevsky(kPi - x);  // odd + pi-periodic
    if (x == 0) return 0;
    // -int_0^x log(2 sin t) dt = -(x log 2x - x) - int_0^x log(sin t / t) dt
    double smooth = simpson(log_sinc, 0.0, x, 1e-15);
    return -(x * std::log(2 * x) - x) - smooth;
}

std::vector<std::int64_t> euclid_cf(std::int64_t num, std::int64_t den) {
    if (num <= 0 || den <= 0) throw std::invalid_argument("euclid_cf needs positives");
    std::vector<std::int64_t> out;
    while (den > 0) {
        std::int64_t q = num / den, r = num - q * den;
        out.push_back(q);
        num = den;
        den = r;
    }
    return out;
}

std::vector<double> pattern_search_maximize(const FareyPath& path,
                                            const BoundaryAngles& b, double coarse,
                                            double fine) {
    std::vector<double> z = initial_point(path, b);
    const int N = path.N();
    if (N <= 2) return z;

    auto vol = [&](const std::vector<double>& zz) { return total_volume(path, b, zz); };
    auto feas = [&](const std::vector<double>& zz) {
        return residuals(path, b, zz).strictly_feasible();
    };

    for (int pass = 0; pass < 400; ++pass) {
        double moved = 0;
        for (int i = 2; i <= N - 1; ++i) {
            std::vector<double> trial = z;
            double best_v = vol(z), best_zi = z[i];
            // Coarse sweep across (0, pi); infeasible samples are skipped, so
            // the sweep covers exactly the open interval allowed for z_i.
            for (double v = coarse; v < kPi; v += coarse) {
                trial[i] = v;
                if (!feas(trial)) continue;
                double val = vol(trial);
                if (val > best_v) {
                    best_v = val;
                    best_zi = v;
                }
            }
            // Local refinement around the coarse winner.
            for (double v = best_zi - coarse; v <= best_zi + coarse; v += fine) {
                if (v <= 0 || v >= kPi) continue;
                trial[i] = v;
                if (!feas(trial)) continue;
                double val = vol(trial);
                if (val > best_v) {
                    best_v = val;
                    best_zi = v;
                }
            }
            moved = std::max(moved, std::abs(best_zi - z[i]));
            z[i] = best_zi;
        }
        if (moved < fine) break;
    }
    return z;
}

Slope realize_word(const std::string& letters) {
    if (letters.empty())
        throw std::invalid_argument("realize_word needs at least one letter");
    // Seed (p, q, r) = (0, inf, -1); the meridian always lies on the positive
    // side of e_1 = {0, inf}, so 0 is the right end and inf the left end of
    // the line from r toward the meridian.
    const Slope p = make_slope(0, 1), q = Slope{1, 0}, r = make_slope(-1, 1);
    struct End {
        Slope s;
        char side;
    };
    End ea{p, 'R'};
    End eb{q, 'L'};
    // nu = vertex born at the current step (T_1 = {p, q, nu}).
    Slope med = mediant(p, q);
    Slope nu = (med == r) ? farey_difference(p, q) : med;
    // Letter i selects the pivot (the end of e_i on side letter_i); the new
    // edge is {pivot, nu}, whose fresh end nu sits on the flipped side; the
    // next born vertex completes {pivot, nu} away from the receding end.
    for (char L : letters) {
        End pivot = (ea.side == L) ? ea : eb;
        End other = (ea.side == L) ? eb : ea;
        Slope med2 = mediant(pivot.s, nu);
        Slope next_nu = (med2 == other.s) ? farey_difference(pivot.s, nu) : med2;
        ea = pivot;
        eb = End{nu, L == 'L' ? 'R' : 'L'};
        nu = next_nu;
    }
    return nu;  // the meridian: the vertex born crossing the final edge
}

CertificateSolve solve_certificate(const std::array<double, 4>& A1,
                                   const std::array<double, 4>& A2,
                                   const std::array<double, 4>& A3,
                                   const std::array<double, 4>& P,
                                   const std::array<double, 4>& Q) {
    Eigen::Matrix4d M;
    Eigen::Vector4d rhs;
    for (int k = 0; k < 4; ++k) {
        M(k, 0) = A1[k];
        M(k, 1) = A2[k];
        M(k, 2) = A3[k];
        M(k, 3) = -(P[k] - Q[k]);
        rhs(k) = Q[k];
    }
    Eigen::Vector4d u = M.colPivHouseholderQr().solve(rhs);
    CertificateSolve out;
    out.alpha = u(0);
    out.beta = u(1);
    out.gamma = u(2);
    out.lambda = u(3);
    out.residual = (M * u - rhs).lpNorm<Eigen::Infinity>();
    return out;
}

}  // namespace dehncan::testing
