#include "dehncan/spun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dehncan/errors.hpp"
#include "dehncan/lobachevsky.hpp"

namespace dehncan {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool spun_feasible(double a, double b, double c, std::int64_t na, std::int64_t nc) {
    return a * double(na) + b * double(na + nc) + c * double(nc) > 2 * kPi;
}

SpunTorusResult spun_torus_solve(double a, double b, double c, std::int64_t na,
                                 std::int64_t nc, const Config& cfg) {
    (void)cfg;
    if (na < 1 || nc < 1)
        throw infeasible_error("spun_torus_solve needs positive crossing counts");
    if (!spun_feasible(a, b, c, na, nc))
        throw infeasible_error("spun solid torus: no positive angle structure "
                               "(a n_a + b n_b + c n_c <= 2 pi)");

    // Base point of the completeness segment and its tangent.
    const double D = double(na) * na + double(nc) * nc;
    const double alpha0 = kPi * nc / D;
    const double gamma0 = -kPi * na / D;
    const double beta0 = -alpha0 - gamma0;
    const double ta = double(na), tb = -double(na + nc), tc = double(nc);

    // Intersect |alpha0 + s ta| < (pi-a)/2 and the two analogues.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double base, double tan, double halfwidth) {
        // |base + s tan| < halfwidth, tan != 0 here.
        double l = (-halfwidth - base) / tan, h = (halfwidth - base) / tan;
        if (l > h) std::swap(l, h);
        lo = std::max(lo, l);
        hi = std::min(hi, h);
    };
    clip(alpha0, ta, (kPi - a) / 2);
    clip(beta0, tb, (kPi - b) / 2);
    clip(gamma0, tc, (kPi - c) / 2);
    if (!(lo < hi))
        throw infeasible_error("spun solid torus: completeness segment is empty");

    auto angles_at = [&](double s, std::array<double, 3>& d,
                         std::array<double, 3>& dp) {
        double al = alpha0 + s * ta, be = beta0 + s * tb, ga = gamma0 + s * tc;
        d = {(kPi - a) / 2 + al, (kPi - b) / 2 + be, (kPi - c) / 2 + ga};
        dp = {(kPi - a) / 2 - al, (kPi - b) / 2 - be, (kPi - c) / 2 - ga};
    };
    // dV/ds = log eta, eta = (sin db / sin d'b)^(na+nc) (sin dc / sin d'c)^(-nc)
    //                        (sin da / sin d'a)^(-na).
    auto log_eta = [&](double s) {
        std::array<double, 3> d, dp;
        angles_at(s, d, dp);
        auto ls = [](double x) { return std::log(std::sin(x)); };
        return double(na + nc) * (ls(d[1]) - ls(dp[1])) -
               double(nc) * (ls(d[2]) - ls(dp[2])) - double(na) * (ls(d[0]) - ls(dp[0]));
    };

    // Bisection on the decreasing function log_eta; infinite boundary
    // derivatives guarantee a sign change strictly inside (lo, hi).
    double width = hi - lo;
    double l = lo + 1e-14 * width, h = hi - 1e-14 * width;
    double fl = log_eta(l), fh = log_eta(h);
    if (!(fl > 0 && fh < 0))
        throw convergence_error("spun solve: derivative signs at segment ends "
                                "unexpected");
    for (int it = 0; it < 200 && (h - l) > 1e-17 * width; ++it) {
        double mid = 0.5 * (l + h);
        if (log_eta(mid) > 0)
            l = mid;
        else
            h = mid;
    }
    double s = 0.5 * (l + h);

    SpunTorusResult out;
    out.s = s;
    out.alpha = alpha0 + s * ta;
    out.beta = beta0 + s * tb;
    out.gamma = gamma0 + s * tc;
    angles_at(s, out.delta, out.delta_prime);
    out.eta_mu = std::exp(log_eta(s));
    out.volume = 0;
    for (int k = 0; k < 3; ++k)
        out.volume += lobachevsky(out.delta[k]) + lobachevsky(out.delta_prime[k]);
    return out;
}

}  // namespace dehncan
