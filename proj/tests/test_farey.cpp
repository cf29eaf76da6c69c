#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "dehncan/errors.hpp"
#include "dehncan/farey.hpp"
#include "support/oracles.hpp"

using namespace dehncan;

namespace {
const Slope kInf{1, 0};
Slope S(std::int64_t n, std::int64_t d = 1) { return make_slope(n, d); }
}  // namespace

TEST_CASE("slope canonical form and parsing") {
    CHECK(make_slope(2, 4) == S(1, 2));
    CHECK(make_slope(-2, -4) == S(1, 2));
    CHECK(make_slope(2, -4) == make_slope(-1, 2));
    CHECK(make_slope(5, 0) == kInf);
    CHECK(make_slope(0, -7) == S(0));
    CHECK(to_string(S(-3, 7)) == "-3/7");
    CHECK(to_string(kInf) == "inf");
    CHECK(to_string(S(4)) == "4");
    CHECK(parse_slope("-3/7") == S(-3, 7));
    CHECK(parse_slope("inf") == kInf);
    CHECK(parse_slope("+2/6") == S(1, 3));
    CHECK_THROWS_AS(parse_slope("4//3"), parse_error);
    CHECK_THROWS_AS(parse_slope(""), parse_error);
    CHECK_THROWS_AS(parse_slope("a/b"), parse_error);
    CHECK_THROWS_AS(parse_slope("1/0x"), parse_error);
}

TEST_CASE("wedge is the intersection pairing") {
    CHECK(wedge(S(0), kInf) == 1);
    CHECK(wedge(S(1), kInf) == 1);
    CHECK(wedge(S(5, 2), S(-1)) == 7);
    CHECK(wedge(S(5, 2), S(0)) == 5);
    CHECK(wedge(S(5, 2), kInf) == 2);
    CHECK(wedge(S(3, 5), S(3, 5)) == 0);
}

TEST_CASE("counterclockwise cyclic order (0, 1, inf)") {
    CHECK(ccw(S(0), S(1), kInf));
    CHECK_FALSE(ccw(S(0), kInf, S(1)));
    CHECK(ccw(S(1), kInf, S(-1)));
    CHECK(ccw(kInf, S(-2), S(0)));
    // left of the line from -1 to 4: everything beyond infinity
    CHECK(left_of_line(kInf, S(-1), S(4)));
    CHECK_FALSE(left_of_line(S(0), S(-1), S(4)));
    CHECK_THROWS_AS(ccw(S(0), S(0), S(1)), infeasible_error);
}

TEST_CASE("path for meridian 4 from the normalized seed") {
    FareyPath path = farey_path(S(0), kInf, S(-1), S(4));
    CHECK(path.N() == 4);
    CHECK(path.word == "LLLL");
    CHECK(word_syllables(path) == std::vector<int>{4});
    // Fans around infinity: T_i = (i-1, inf, i).
    CHECK(path.triangles[1].contains(S(1)));
    CHECK(path.triangles[2].contains(S(2)));
    CHECK(path.triangles[3].contains(S(3)));
    CHECK(path.triangles[4].contains(S(4)));
    // The left side of the line from -1 to 4 holds infinity, so p must be
    // the infinity end after the swap.
    CHECK(path.pq_swapped);
    CHECK(path.p == kInf);
    CHECK(path.q == S(0));
    CHECK(path.rho[1] == S(-1));
    CHECK(path.nu[1] == S(1));
    CHECK(path.eta[1] == kInf);
    CHECK(path.xi[1] == S(0));
    for (int i = 1; i <= path.N() - 1; ++i) CHECK(path.pivot[i] == kInf);
    CHECK_FALSE(path.hinge[1]);
}

TEST_CASE("path for meridian 5/2: word LLLR, syllables (3,1)") {
    FareyPath path = farey_path(S(0), kInf, S(-1), S(5, 2));
    CHECK(path.N() == 4);
    CHECK(path.word == "LLLR");
    CHECK(word_syllables(path) == std::vector<int>{3, 1});
    CHECK(cf_syllables(S(5, 2)) == std::vector<int>{3, 1});
    CHECK(path.hinge[3]);
    CHECK_FALSE(path.hinge[1]);
    CHECK_FALSE(path.hinge[2]);
    // wedge additivity m/\r = m/\p + m/\q
    CHECK(wedge(path.m, path.r) ==
          wedge(path.m, path.p) + wedge(path.m, path.q));
}

TEST_CASE("continued fractions") {
    CHECK(continued_fraction(5, 2) == std::vector<std::int64_t>{2, 2});
    CHECK(continued_fraction(7, 5) == std::vector<std::int64_t>{1, 2, 2});
    CHECK(continued_fraction(4, 1) == std::vector<std::int64_t>{4});
    CHECK(cf_syllables(S(7, 5)) == std::vector<int>{2, 2, 1});
    CHECK(cf_syllables(S(4)) == std::vector<int>{4});
    // mirror: 2/5 has the same syllables as 5/2
    CHECK(cf_syllables(S(2, 5)) == cf_syllables(S(5, 2)));
}

TEST_CASE("seed precondition violations throw") {
    // pq = {inf, 0} does not separate 1 from 4 (both positive side).
    CHECK_THROWS_AS(farey_path(kInf, S(0), S(1), S(4)), infeasible_error);
    // meridian adjacent to the seed triangle: N = 1 rejected at min length 2
    CHECK_THROWS_AS(farey_path(S(0), kInf, S(-1), S(1)), infeasible_error);
    CHECK_NOTHROW(farey_path(S(0), kInf, S(-1), S(1), 1));
    // not a Farey triangle
    CHECK_THROWS_AS(farey_path(S(0), S(2), S(1), S(5)), infeasible_error);
    // meridian equals a vertex
    CHECK_THROWS_AS(farey_path(S(0), kInf, S(-1), S(-1)), infeasible_error);
}

TEST_CASE("exhaustive roundtrip: syllables match the continued fraction rule") {
    using dehncan::testing::euclid_cf;
    int cases = 0;
    for (std::int64_t a = 1; a <= 50; ++a) {
        for (std::int64_t b = 1; b <= 50; ++b) {
            if (std::gcd(a, b) != 1 || a == b) continue;
            Slope m = make_slope(a, b);
            FareyPath path = farey_path(S(0), kInf, S(-1), m);
            // library rule
            CHECK(word_syllables(path) == cf_syllables(m));
            // independent oracle: CF of max(m, 1/m), first +1, last -1
            auto cf = (a > b) ? euclid_cf(a, b) : euclid_cf(b, a);
            std::vector<int> expect(cf.begin(), cf.end());
            expect.front() += 1;
            expect.back() -= 1;
            CHECK(word_syllables(path) == expect);
            // structural invariants
            CHECK(path.word[0] == path.word[1]);
            CHECK_FALSE(path.hinge[1]);
            CHECK(wedge(path.m, path.r) ==
                  wedge(path.m, path.p) + wedge(path.m, path.q));
            ++cases;
        }
    }
    CHECK(cases > 1000);
}

TEST_CASE("triangles along the path are distinct (no backtracking)") {
    FareyPath path = farey_path(S(0), kInf, S(-1), S(31, 9));
    std::set<std::string> seen;
    for (const auto& t : path.triangles) {
        std::string key;
        std::vector<std::string> names = {to_string(t.v[0]), to_string(t.v[1]),
                                          to_string(t.v[2])};
        std::sort(names.begin(), names.end());
        for (auto& n : names) key += n + "|";
        CHECK(seen.insert(key).second);
    }
    // consecutive triangles share exactly the crossing edge
    for (int i = 1; i <= path.N(); ++i) {
        CHECK(path.triangles[i - 1].contains(path.edges[i].a));
        CHECK(path.triangles[i - 1].contains(path.edges[i].b));
        CHECK(path.triangles[i].contains(path.edges[i].a));
        CHECK(path.triangles[i].contains(path.edges[i].b));
        CHECK_FALSE(path.triangles[i].contains(path.rho[i]));
        CHECK_FALSE(path.triangles[i - 1].contains(path.nu[i]));
    }
}

TEST_CASE("word is invariant under the modular group action") {
    std::mt19937_64 rng(20260815);
    std::uniform_int_distribution<int> coin(0, 1), len(1, 8);
    std::uniform_int_distribution<std::int64_t> num(2, 200), den(1, 60);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t a = num(rng), b = den(rng);
        std::int64_t g = std::gcd(a, b);
        Slope m = make_slope(a / g, b / g);
        if (m == S(1)) continue;
        FareyPath base = farey_path(S(0), kInf, S(-1), m);
        // random word in the generators T = [[1,1],[0,1]], S = [[0,-1],[1,0]]
        std::int64_t M[2][2] = {{1, 0}, {0, 1}};
        int L = len(rng);
        for (int k = 0; k < L; ++k) {
            std::int64_t A[2][2];
            if (coin(rng)) {
                A[0][0] = 1; A[0][1] = 1; A[1][0] = 0; A[1][1] = 1;
            } else {
                A[0][0] = 0; A[0][1] = -1; A[1][0] = 1; A[1][1] = 0;
            }
            std::int64_t R[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    R[i][j] = M[i][0] * A[0][j] + M[i][1] * A[1][j];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) M[i][j] = R[i][j];
        }
        auto act = [&](const Slope& s) {
            return apply_psl2(s, M[0][0], M[0][1], M[1][0], M[1][1]);
        };
        FareyPath moved = farey_path(act(S(0)), act(kInf), act(S(-1)), act(m));
        CHECK(moved.word == base.word);
        CHECK(moved.N() == base.N());
    }
}

TEST_CASE("realize_word roundtrips through the path constructor") {
    for (int length = 1; length <= 5; ++length) {
        for (int bits = 0; bits < (1 << length); ++bits) {
            std::string w;
            for (int k = 0; k < length; ++k) w += (bits >> k & 1) ? 'R' : 'L';
            Slope m = dehncan::testing::realize_word(w);
            FareyPath path = farey_path(S(0), kInf, S(-1), m);
            CHECK(path.N() == length + 1);
            CHECK(path.word == w.substr(0, 1) + w);
        }
    }
}
