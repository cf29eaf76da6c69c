#pragma once

namespace dehncan {

// The Lobachevsky function
//     L(theta) = -integral_0^theta log|2 sin t| dt,
// odd and pi-periodic.  Evaluation reduces theta mod pi into (-pi/2, pi/2]
// and sums the accelerated series
//     L(t) = t - t log|2t| + t * sum_{n>=1} [zeta(2n) / (n(2n+1))] (t/pi)^{2n},
// whose terms decay like 4^{-n}/n^2 (about 28 terms at the reduction
// boundary for full double precision).  Instantiated for double and
// long double; the latter backs the extended-precision solve path.
template <class Real>
Real lobachevsky(Real theta);

// L'(theta) = -log|2 sin theta|  (unbounded at multiples of pi).
template <class Real>
Real lobachevsky_deriv(Real theta);

// L''(theta) = -cot theta.
template <class Real>
Real lobachevsky_deriv2(Real theta);

extern template double lobachevsky<double>(double);
extern template long double lobachevsky<long double>(long double);
extern template double lobachevsky_deriv<double>(double);
extern template long double lobachevsky_deriv<long double>(long double);
extern template double lobachevsky_deriv2<double>(double);
extern template long double lobachevsky_deriv2<long double>(long double);

}  // namespace dehncan
