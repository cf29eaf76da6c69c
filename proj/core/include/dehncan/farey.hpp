#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dehncan/slope.hpp"

namespace dehncan {

// An ideal triangle of the Farey tessellation: three slopes with pairwise
// wedge 1.  Vertex order carries no meaning beyond construction history.
struct FareyTriangle {
    std::array<Slope, 3> v;

    bool contains(const Slope& s) const { return s == v[0] || s == v[1] || s == v[2]; }
    // The vertex different from a and b (which must both be vertices).
    Slope third(const Slope& a, const Slope& b) const;
};

// An (unordered) Farey edge.
struct FareyEdge {
    Slope a, b;
    bool contains(const Slope& s) const { return s == a || s == b; }
};

// The combinatorial data of the triangulated solid torus for meridian slope m
// seeded at the triangle (p, q, r): the geodesic ell from r to m crosses the
// triangles T_0 = (p,q,r), T_1, ..., T_N (m a vertex of T_N), entering T_i
// across the edge e_i = T_{i-1} cap T_i.
//
// Conventions baked in here and relied on everywhere downstream:
//   * p and q may be swapped relative to the caller's seed (pq_swapped) so
//     that ell enters T_0 across pr; equivalently the artificial first letter
//     word[0] equals word[1] and the word starts LL or RR.
//   * word[i] (1 <= i <= N-1) is 'L' when the common end of e_i and e_{i+1}
//     lies on the left of the line directed from r to m, else 'R'.
//   * hinge[i] = (word[i-1] != word[i]); hinge[1] is always false.
//   * xi[i] / eta[i] are the right / left ends of e_i,
//     rho[i] = T_{i-1} \ T_i (the receding vertex; rho[1] = r),
//     nu[i]  = T_i \ T_{i-1} (the vertex born at step i).
//   * pivot[i] = e_i cap e_{i+1} for 1 <= i <= N-1.
// Vectors are indexed so that index i refers to the objects above (index 0
// is unused padding where the object starts at 1).
struct FareyPath {
    Slope p, q, r, m;  // post-swap labels
    bool pq_swapped = false;

    std::vector<FareyTriangle> triangles;  // T_0 .. T_N
    std::vector<FareyEdge> edges;          // [1..N]
    std::string word;                      // size N, word[0] artificial (empty when N == 1)
    std::vector<bool> hinge;               // [1..N-1]
    std::vector<Slope> xi, eta, rho, nu;   // [1..N]
    std::vector<Slope> pivot;              // [1..N-1]

    int N() const { return static_cast<int>(triangles.size()) - 1; }
};

// Builds the path.  Preconditions (violations throw infeasible_error):
//   * (p, q, r) is a Farey triangle and m differs from all three,
//   * the edge pq separates r from m,
//   * the length N is at least min_length (2 for the solid torus
//     triangulation; 1 is allowed for the even filling construction).
FareyPath farey_path(const Slope& p, const Slope& q, const Slope& r, const Slope& m,
                     int min_length = 2);

// Lengths of the maximal constant runs of the word, including the artificial
// first letter.  Empty for N == 1.
std::vector<int> word_syllables(const FareyPath& path);

// Predicted syllable lengths for the normalized seed (p,q,r) = (0,inf,-1)
// and meridian m > 0, derived from the Euclidean continued fraction
// m = [a1; a2, ..., ak] (last coefficient >= 2): the syllables including the
// artificial letter are (a1+1, a2, ..., ak - 1); for 0 < m < 1 the leading
// zero coefficient is dropped first (mirror symmetry).  When k == 1 the +1
// and -1 fall on the same syllable.
std::vector<int> cf_syllables(const Slope& m);

// Euclidean continued fraction of num/den (den > 0), canonical form with
// last coefficient >= 2 when the expansion has more than one term.
std::vector<std::int64_t> continued_fraction(std::int64_t num, std::int64_t den);

}  // namespace dehncan
