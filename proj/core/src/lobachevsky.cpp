#include "dehncan/lobachevsky.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace dehncan {

namespace {

// zeta(2n) for n = 1..ZN, enough for the series to bottom out well below
// long double epsilon at |t| <= pi/2 (terms ~ 4^{-n}/n^2).
constexpr int ZN = 48;

const std::array<long double, ZN + 1>& zeta_even() {
    static const std::array<long double, ZN + 1> table = [] {
        std::array<long double, ZN + 1> z{};
        for (int n = 1; n <= ZN; ++n) z[n] = std::riemann_zetal(2.0L * n);
        return z;
    }();
    return table;
}

}  // namespace

template <class Real>
Real lobachevsky(Real theta) {
    const Real pi = std::numbers::pi_v<Real>;
    // Reduce mod pi into [-pi/2, pi/2]; the value is pi-periodic.
    Real t = std::remainder(theta, pi);
    Real sign = Real(1);
    if (t < 0) {
        t = -t;
        sign = Real(-1);
    }
    if (t == Real(0)) return Real(0);
    const auto& z = zeta_even();
    const Real ratio2 = (t / pi) * (t / pi);
    Real power = ratio2;
    Real series = Real(0);
    for (int n = 1; n <= ZN; ++n) {
        Real term = Real(z[n]) / (Real(n) * Real(2 * n + 1)) * power;
        series += term;
        if (term < std::numeric_limits<Real>::epsilon() * series) break;
        power *= ratio2;
    }
    return sign * (t - t * std::log(Real(2) * t) + t * series);
}

template <class Real>
Real lobachevsky_deriv(Real theta) {
    return -std::log(std::abs(Real(2) * std::sin(theta)));
}

template <class Real>
Real lobachevsky_deriv2(Real theta) {
    return -std::cos(theta) / std::sin(theta);
}

template double lobachevsky<double>(double);
template long double lobachevsky<long double>(long double);
template double lobachevsky_deriv<double>(double);
template long double lobachevsky_deriv<long double>(long double);
template double lobachevsky_deriv2<double>(double);
template long double lobachevsky_deriv2<long double>(long double);

}  // namespace dehncan
