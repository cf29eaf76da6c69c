#pragma once

#include <cstdint>
#include <string>

namespace dehncan {

// A slope on the boundary torus of the solid torus: an unoriented primitive
// homology class, written as the fraction num/den ("y over x", so the
// segment from (0,0) to (den, num) has this slope).  Canonical form:
//   * den >= 0,
//   * gcd(|num|, den) == 1,
//   * infinity is 1/0, zero is 0/1.
// All arithmetic is exact; intermediates use 128-bit integers and narrowing
// back to 64 bits is checked (slopes along a path grow Fibonacci-like, so
// int64 comfortably covers paths of length <= 60, the supported range).
struct Slope {
    std::int64_t num = 0;
    std::int64_t den = 1;

    friend bool operator==(const Slope&, const Slope&) = default;
};

// Canonicalizes num/den.  Throws infeasible_error on 0/0.
Slope make_slope(std::int64_t num, std::int64_t den);

inline bool is_infinity(const Slope& s) { return s.den == 0; }

// Geometric intersection number of the two slopes,
//   a /\ b = |a.num * b.den - b.num * a.den|,
// computed in 128 bits and checked to fit int64.  Two slopes span a Farey
// edge exactly when their wedge is 1.
std::int64_t wedge(const Slope& a, const Slope& b);

// Signed version (no absolute value), used where additivity matters.
std::int64_t wedge_signed(const Slope& a, const Slope& b);

// Strict total order on Q u {inf}: finite slopes by value, infinity last.
// This is the counterclockwise order on the circle of slopes starting just
// above infinity, so (0, 1, inf) reads counterclockwise.
bool slope_less(const Slope& a, const Slope& b);

// True when the distinct slopes a, b, c appear in counterclockwise cyclic
// order on the circle at infinity.  Throws if any two coincide.
bool ccw(const Slope& a, const Slope& b, const Slope& c);

// True when x lies strictly on the left of the line directed from src to dst.
inline bool left_of_line(const Slope& x, const Slope& src, const Slope& dst) {
    return ccw(src, dst, x);
}

// True when the Farey edge {u, v} separates s from t (s, t strictly on
// opposite sides of the chord uv; neither equal to u or v).
bool edge_separates(const Slope& u, const Slope& v, const Slope& s, const Slope& t);

// The two Farey neighbours completing the edge {a, b} (wedge(a,b) must be 1)
// to a triangle are the mediant a(+)b and the "difference" a(-)b of the
// underlying primitive vectors.
Slope mediant(const Slope& a, const Slope& b);
Slope farey_difference(const Slope& a, const Slope& b);

// Image of s under the integer Mobius map [[a, b], [c, d]] (det +-1):
// value y/x  |->  (a y + b x) / (c y + d x).
Slope apply_psl2(const Slope& s, std::int64_t a, std::int64_t b, std::int64_t c,
                 std::int64_t d);

// "n", "n/d", or "inf".
std::string to_string(const Slope& s);

// Inverse of to_string; accepts optional sign, "inf"/"-inf".  Throws
// parse_error on malformed text (e.g. "4//3").
Slope parse_slope(const std::string& text);

}  // namespace dehncan
