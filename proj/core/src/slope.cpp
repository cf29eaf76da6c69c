#include "dehncan/slope.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "dehncan/errors.hpp"

namespace dehncan {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 checked_narrow(i128 v, const char* what) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw infeasible_error(std::string("integer overflow in ") + what +
                               " (slope coefficients exceed 64 bits)");
    return static_cast<i64>(v);
}

}  // namespace

Slope make_slope(i64 num, i64 den) {
    if (num == 0 && den == 0) throw infeasible_error("slope 0/0 is undefined");
    if (den == 0) return Slope{1, 0};
    if (num == 0) return Slope{0, 1};
    i64 g = std::gcd(num < 0 ? -num : num, den < 0 ? -den : den);
    num /= g;
    den /= g;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Slope{num, den};
}

i64 wedge_signed(const Slope& a, const Slope& b) {
    i128 d = i128(a.num) * b.den - i128(b.num) * a.den;
    return checked_narrow(d, "wedge");
}

i64 wedge(const Slope& a, const Slope& b) {
    i64 d = wedge_signed(a, b);
    return d < 0 ? -d : d;
}

bool slope_less(const Slope& a, const Slope& b) {
    if (is_infinity(a)) return false;
    if (is_infinity(b)) return true;
    // num/den < num'/den' with positive denominators.
    return i128(a.num) * b.den < i128(b.num) * a.den;
}

bool ccw(const Slope& a, const Slope& b, const Slope& c) {
    if (a == b || b == c || a == c)
        throw infeasible_error("ccw predicate needs three distinct slopes");
    // Counterclockwise means cyclically increasing for the order with
    // infinity as the largest element.
    bool ab = slope_less(a, b), bc = slope_less(b, c), ca = slope_less(c, a);
    return (ab && bc) || (bc && ca) || (ca && ab);
}

bool edge_separates(const Slope& u, const Slope& v, const Slope& s, const Slope& t) {
    if (s == u || s == v || t == u || t == v) return false;
    return ccw(u, v, s) != ccw(u, v, t);
}

Slope mediant(const Slope& a, const Slope& b) {
    if (wedge(a, b) != 1)
        throw infeasible_error("mediant of non-adjacent slopes " + to_string(a) +
                               ", " + to_string(b));
    i128 n = i128(a.num) + b.num;
    i128 d = i128(a.den) + b.den;
    return make_slope(checked_narrow(n, "mediant"), checked_narrow(d, "mediant"));
}

Slope farey_difference(const Slope& a, const Slope& b) {
    if (wedge(a, b) != 1)
        throw infeasible_error("difference of non-adjacent slopes " + to_string(a) +
                               ", " + to_string(b));
    i128 n = i128(a.num) - b.num;
    i128 d = i128(a.den) - b.den;
    return make_slope(checked_narrow(n, "difference"), checked_narrow(d, "difference"));
}

Slope apply_psl2(const Slope& s, i64 a, i64 b, i64 c, i64 d) {
    i128 det = i128(a) * d - i128(b) * c;
    if (det != 1 && det != -1)
        throw infeasible_error("apply_psl2 requires determinant +-1");
    i128 n = i128(a) * s.num + i128(b) * s.den;
    i128 dd = i128(c) * s.num + i128(d) * s.den;
    return make_slope(checked_narrow(n, "apply_psl2"), checked_narrow(dd, "apply_psl2"));
}

std::string to_string(const Slope& s) {
    if (is_infinity(s)) return "inf";
    if (s.den == 1) return std::to_string(s.num);
    return std::to_string(s.num) + "/" + std::to_string(s.den);
}

Slope parse_slope(const std::string& text) {
    auto fail = [&]() -> Slope {
        throw parse_error("cannot parse slope '" + text + "'");
    };
    if (text.empty()) return fail();
    if (text == "inf" || text == "+inf") return Slope{1, 0};
    if (text == "-inf") return Slope{1, 0};
    auto parse_int = [&](std::string_view sv, i64& out) {
        if (sv.empty()) return false;
        // std::from_chars handles an optional leading '-' but not '+'.
        if (sv.front() == '+') sv.remove_prefix(1);
        if (sv.empty()) return false;
        auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
        return res.ec == std::errc() && res.ptr == sv.data() + sv.size();
    };
    std::string_view sv(text);
    auto slash = sv.find('/');
    i64 num = 0, den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_int(sv, num)) return fail();
    } else {
        if (!parse_int(sv.substr(0, slash), num)) return fail();
        if (!parse_int(sv.substr(slash + 1), den)) return fail();
        if (den == 0) return fail();
    }
    return make_slope(num, den);
}

}  // namespace dehncan
