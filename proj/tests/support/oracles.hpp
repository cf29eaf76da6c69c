#pragma once

// Independent reference implementations used only by tests.  Each oracle
// recomputes a quantity the library produces, by a different method, so
// that frozen expected values in the test suite do not share code (or
// algorithmic assumptions) with the production path.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dehncan/angles.hpp"
#include "dehncan/farey.hpp"

namespace dehncan::testing {

// Lobachevsky via adaptive Simpson quadrature: the log singularity at 0 is
// integrated analytically and the smooth remainder log(sin t / t)
// numerically (tolerance ~1e-14).  Valid on [0, pi]; uses only the odd /
// pi-periodic reductions.
double quadrature_lobachevsky(double x);

// Euclidean continued fraction, written independently of the library.
std::vector<std::int64_t> euclid_cf(std::int64_t num, std::int64_t den);

// Cyclic coordinate-ascent maximizer over the positive angle structure
// polytope: per-coordinate sweeps at `coarse` resolution followed by local
// refinement at `fine`.  Valid as a global-maximum oracle because the
// objective is strictly concave on a convex open set.  Returns the full
// z-vector.
std::vector<double> pattern_search_maximize(const FareyPath& path,
                                            const BoundaryAngles& b,
                                            double coarse = 1e-3, double fine = 1e-5);

// Builds a seed-and-meridian pair realizing a prescribed letter sequence
// (word[1..N-1]; the artificial first letter is implied) starting from the
// normalized seed (0, inf, -1).  Returns the meridian.
Slope realize_word(const std::string& letters);

// Solves alpha A1 + beta A2 + gamma A3 - lambda (P - Q) = Q for
// (alpha, beta, gamma, lambda) by column-pivoted QR and reports the
// residual sup-norm.  The caller checks margin = alpha + beta + gamma - 1.
struct CertificateSolve {
    double alpha, beta, gamma, lambda;
    double residual;
};
CertificateSolve solve_certificate(const std::array<double, 4>& A1,
                                   const std::array<double, 4>& A2,
                                   const std::array<double, 4>& A3,
                                   const std::array<double, 4>& P,
                                   const std::array<double, 4>& Q);

}  // namespace dehncan::testing
