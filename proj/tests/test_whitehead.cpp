#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dehncan/errors.hpp"
#include "dehncan/volume.hpp"
#include "dehncan/whitehead.hpp"

using namespace dehncan;

namespace {

constexpr double kPi = std::numbers::pi;

// Volume of the unfilled (two-cusped) manifold, 4 * Catalan's constant: the
// strict upper bound for every filled volume.
constexpr double kUnfilledBound = 3.663862376708876;

// Volume of the regular ideal tetrahedron, the (1,3) filled volume.
constexpr double kV3 = 1.0149416064096536;

std::string real_letters(const FareyPath& p) {
    return p.word.empty() ? std::string() : p.word.substr(1);
}

// Frozen solve anchors across both parities, all seed dispatch charts and
// boundary-angle placements, word lengths 1..7 and fan/hinge/mixed words.
struct Anchor {
    std::int64_t k, l;
    Parity parity;
    const char* m;
    int N;
    const char* letters;  // word without the artificial first letter
    const char *p, *q, *r;
    bool theta_on_q;
    double theta_max;
    double theta_star;
    double volume;
    double min_margin;
    int faces;
};

const Anchor kBattery[] = {
    {2, 1, Parity::odd, "1/4", 3, "RR", "0", "1", "inf", false, 2 * kPi / 3,
     1.0858802330118931, 1.2844853004683547, 0.064128834163139858, 3},
    {3, 1, Parity::odd, "1/6", 5, "RRRR", "0", "1", "inf", false, 4 * kPi / 5,
     1.3312461975450736, 1.5742549132203645, 0.0047612811171062752, 5},
    {4, 1, Parity::odd, "1/8", 7, "RRRRRR", "0", "1", "inf", false, 6 * kPi / 7,
     1.4290075958483202, 1.6833647102351788, 0.00083513933481382807, 7},
    {1, 3, Parity::odd, "3/2", 2, "R", "1", "inf", "0", true, kPi,
     1.0471975511965976, 1.0149416064096535, 0.49999999999999956, 2},
    {2, 3, Parity::odd, "3/4", 3, "LL", "1", "0", "inf", true, kPi,
     1.4077154425962071, 1.4140610441653916, 0.079595623492775935, 3},
    {2, 5, Parity::odd, "5/4", 4, "RRR", "1", "inf", "0", true, kPi,
     1.5033450740808825, 1.5819816144415721, 0.011582688599686586, 4},
    {4, 3, Parity::odd, "3/8", 4, "RLR", "0", "1", "inf", false, kPi,
     1.4660407296262048, 1.6972702585308308, 0.012281826878638658, 4},
    {5, 3, Parity::odd, "3/10", 5, "RRLL", "0", "1", "inf", false, kPi,
     1.4948536079737915, 1.741949289166224, 0.0042889571635265078, 5},
    {5, 7, Parity::odd, "7/10", 5, "LLRR", "1", "0", "inf", true, kPi,
     1.5468041989054353, 1.7651298237457078, 0.0023572104154203632, 5},
    {1, 4, Parity::even, "2", 1, "", "inf", "1", "0", false, kPi,
     1.2094292028881881, 2.6667447834490599, 0.20710678118654657, 2},
    {1, 6, Parity::even, "3", 2, "L", "inf", "1", "0", false, kPi,
     1.368983920562572, 3.1772932786003261, 0.046777885693311427, 3},
    {3, 4, Parity::even, "2/3", 2, "L", "1", "0", "inf", true, kPi,
     1.4855444175784887, 3.2758716439439342, 0.031986958541879273, 3},
    {5, 2, Parity::even, "1/5", 4, "RRR", "0", "1", "inf", false, kPi,
     1.4843770703410091, 3.4761739892389851, 0.0069872241625363873, 5},
    {11, 8, Parity::even, "4/11", 5, "RLRR", "0", "1", "inf", false, kPi,
     1.5569400887941209, 3.6278614293272797, 0.00026235648552797031, 6},
};

// Rebuild the theta-dependent pinned coordinates z_0 = pi + theta_q,
// z_1 = pi - theta_r (equal to theta in both parities).
std::vector<double> pinned(const FillingSetup& s, double theta, std::vector<double> z) {
    BoundaryAngles b = filling_angles(s, theta);
    z[0] = kPi + b.q;
    z[1] = kPi - b.r;
    return z;
}

// Independent reconstruction of the objective from the public angle maps:
// odd fillings sum the solid-torus tetrahedra, even fillings twice the pair
// volumes plus the closing tetrahedron.
double direct_volume(const FillingSetup& s, double theta, const std::vector<double>& z0) {
    std::vector<double> z = pinned(s, theta, z0);
    double v = 0;
    if (s.parity == Parity::odd) {
        for (int i = 1; i <= s.path.N() - 1; ++i) v += tet_volume(tet_angles(s.path, z, i));
        return v;
    }
    for (int i = 1; i <= s.path.N(); ++i) v += 2 * tet_volume(even_pair_angles(s.path, z, i));
    return v + tet_volume(even_last_angles(s.path, z));
}

bool angles_positive(const FillingSetup& s, double theta, const std::vector<double>& z0) {
    if (!(theta > 0.0 && theta < s.theta_max)) return false;
    std::vector<double> z = pinned(s, theta, z0);
    auto pos = [](const TetAngles& t) { return t.x > 0 && t.y > 0 && t.z > 0; };
    if (s.parity == Parity::odd) {
        for (int i = 1; i <= s.path.N() - 1; ++i)
            if (!pos(tet_angles(s.path, z, i))) return false;
        return true;
    }
    for (int i = 1; i <= s.path.N(); ++i)
        if (!pos(even_pair_angles(s.path, z, i))) return false;
    return pos(even_last_angles(s.path, z));
}

// Cyclic coordinate ascent on (theta, free z) with shrinking steps: an
// optimizer sharing no code with the Newton solver, used to confirm the
// claimed maximum from a perturbed start.
struct AscentResult {
    double theta;
    std::vector<double> z;
    double value;
};

AscentResult coordinate_ascent(const FillingSetup& s, double theta, std::vector<double> z) {
    const int hi = s.parity == Parity::odd ? s.path.N() - 1 : s.path.N() + 1;
    REQUIRE(angles_positive(s, theta, z));
    double value = direct_volume(s, theta, z);
    for (double step = 0.02; step > 2e-7; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int c = 1; c <= hi; ++c) {
                for (double sgn : {1.0, -1.0}) {
                    double th = theta + (c == 1 ? sgn * step : 0.0);
                    std::vector<double> zz = z;
                    if (c >= 2) zz[c] += sgn * step;
                    if (!angles_positive(s, th, zz)) continue;
                    double v = direct_volume(s, th, zz);
                    if (v > value) {
                        value = v;
                        theta = th;
                        z = zz;
                        improved = true;
                    }
                }
            }
        }
    }
    return {theta, z, value};
}

}  // namespace

TEST_CASE("the non-hyperbolic gate is exactly the five classes and their negatives") {
    auto gated = [](std::int64_t k, std::int64_t l) {
        const std::pair<std::int64_t, std::int64_t> ex[] = {
            {0, 1}, {1, 0}, {1, 1}, {1, -1}, {1, 2}, {1, -2}};
        for (auto [a, b] : ex)
            if ((k == a && l == b) || (k == -a && l == -b)) return true;
        return false;
    };
    int gate_count = 0;
    for (std::int64_t k = -8; k <= 8; ++k)
        for (std::int64_t l = -8; l <= 8; ++l) {
            if (std::gcd(std::abs(k), std::abs(l)) != 1) continue;  // primitive only
            CAPTURE(k);
            CAPTURE(l);
            CHECK(exceptional_filling(k, l) == gated(k, l));
            gate_count += exceptional_filling(k, l);
        }
    CHECK(gate_count == 12);
}

TEST_CASE("non-primitive and exceptional classes are rejected") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{2, 4},
                        {0, 2},
                        {0, 0},
                        {4, 6},
                        {-2, -4},
                        {0, 3}}) {
        CAPTURE(k);
        CAPTURE(l);
        CHECK_THROWS_AS(filling_setup(k, l), infeasible_error);
    }
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{0, 1},
                        {1, 0},
                        {1, 1},
                        {1, -1},
                        {1, 2},
                        {1, -2},
                        {0, -1},
                        {-1, 0},
                        {-1, -1},
                        {-1, 1},
                        {-1, -2},
                        {-1, 2}}) {
        CAPTURE(k);
        CAPTURE(l);
        CHECK_THROWS_AS(filling_setup(k, l), infeasible_error);
        CHECK_THROWS_AS(whitehead_fill(k, l), infeasible_error);
    }
}

TEST_CASE("set-up dispatch: parity, meridian slope, seed triangle, theta interval") {
    for (const Anchor& a : kBattery) {
        CAPTURE(a.k);
        CAPTURE(a.l);
        FillingSetup s = filling_setup(a.k, a.l);
        CHECK(s.k == a.k);
        CHECK(s.l == a.l);
        CHECK(s.parity == a.parity);
        CHECK(s.m == parse_slope(a.m));
        CHECK(s.path.N() == a.N);
        CHECK(real_letters(s.path) == a.letters);
        CHECK(s.path.p == parse_slope(a.p));
        CHECK(s.path.q == parse_slope(a.q));
        CHECK(s.path.r == parse_slope(a.r));
        CHECK_FALSE(s.path.pq_swapped);
        CHECK(s.theta_on_q == a.theta_on_q);
        CHECK(s.theta_max == doctest::Approx(a.theta_max).epsilon(1e-14));
    }
}

TEST_CASE("(k,l) and (-k,-l) build the identical set-up") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{3, 1},
                        {1, 3},
                        {2, -5},
                        {11, 8},
                        {5, -2}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingSetup a = filling_setup(k, l);
        FillingSetup b = filling_setup(-k, -l);
        CHECK(b.k == a.k);
        CHECK(b.l == a.l);
        CHECK(b.parity == a.parity);
        CHECK(b.m == a.m);
        CHECK(b.path.word == a.path.word);
        CHECK(b.theta_on_q == a.theta_on_q);
        CHECK(b.theta_max == a.theta_max);
    }
}

TEST_CASE("boundary angles put theta on the announced label and sum to pi") {
    FillingSetup on_p = filling_setup(2, 1);   // theta carried by p
    FillingSetup on_q = filling_setup(1, 3);   // theta carried by q
    for (double theta : {0.2, 0.7, 1.3}) {
        BoundaryAngles bp = filling_angles(on_p, theta);
        CHECK(bp.p == theta);
        CHECK(bp.q == 0.0);
        CHECK(bp.r == doctest::Approx(kPi - theta).epsilon(1e-15));
        CHECK(bp.p + bp.q + bp.r == doctest::Approx(kPi).epsilon(1e-15));
        BoundaryAngles bq = filling_angles(on_q, theta);
        CHECK(bq.p == 0.0);
        CHECK(bq.q == theta);
        CHECK(bq.r == doctest::Approx(kPi - theta).epsilon(1e-15));
    }
}

TEST_CASE("odd theta_max is the exact root of the feasibility margin") {
    // The classes whose feasible interval ends strictly before pi.
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {3, 1}, {4, 1}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingSetup s = filling_setup(k, l);
        REQUIRE(s.theta_max < kPi);
        CHECK(std::abs(feasible(s.path, filling_angles(s, s.theta_max)).margin) <= 1e-12);
        CHECK(feasible(s.path, filling_angles(s, s.theta_max - 1e-3)).feasible);
        CHECK_FALSE(feasible(s.path, filling_angles(s, s.theta_max + 1e-3)).feasible);
    }
    // A class feasible on all of (0, pi).
    FillingSetup s = filling_setup(5, 3);
    CHECK(s.theta_max == kPi);
    CHECK(feasible(s.path, filling_angles(s, kPi - 1e-6)).feasible);
}

TEST_CASE("frozen anchors: critical theta, volume, margins, certificates") {
    for (const Anchor& a : kBattery) {
        CAPTURE(a.k);
        CAPTURE(a.l);
        FillingResult r = whitehead_fill(a.k, a.l);

        // Solver landing point.
        CHECK(r.vol.theta == doctest::Approx(a.theta_star).epsilon(1e-8));
        CHECK(r.vol.value == doctest::Approx(a.volume).epsilon(1e-12));
        CHECK(r.vol.grad_norm <= 1.1e-10);
        CHECK(r.vol.theta > 0.0);
        CHECK(r.vol.theta < a.theta_max);
        CHECK(r.vol.value < kUnfilledBound);
        CHECK(static_cast<int>(r.vol.z.size()) ==
              a.N + (a.parity == Parity::odd ? 1 : 2));

        // The reported volume agrees with a direct recomputation through the
        // public angle maps, and for odd fillings with the torus functional.
        CHECK(std::abs(direct_volume(r.setup, r.vol.theta, r.vol.z) - r.vol.value) <= 1e-12);
        if (a.parity == Parity::odd) {
            BoundaryAngles b = filling_angles(r.setup, r.vol.theta);
            CHECK(std::abs(total_volume(r.setup.path, b, r.vol.z) - r.vol.value) <= 1e-12);
        }

        // Development residuals: every gluing consistency the triangulation
        // admits holds at the critical point.
        CHECK(r.dev.max_chain_residual <= 1e-9);
        CHECK(r.dev.max_shape_product_error <= 1e-9);
        CHECK(r.dev.meridian_residual <= 1e-9);
        CHECK(r.dev.fold_residual <= 1e-9);
        CHECK(r.dev.max_interior_angle_error <= 1e-11);
        CHECK(r.dev.max_boundary_angle_error <= 1e-11);

        // Certificate: canonical, with the frozen margin and face count.
        CHECK(r.cert.canonical());
        CHECK(std::abs(r.cert.min_margin - a.min_margin) <= 1e-7);
        CHECK(static_cast<int>(r.cert.faces.size()) == a.faces);
        CHECK(r.cert.all_hands_match);
        CHECK(r.cert.max_two_route_error <= 1e-9);
        CHECK(r.cert.max_ls_error <= 1e-8);
        CHECK(r.cert.max_holonomy_residual <= 1e-8);

        // Face kinds: interior layers, then core (odd) or pinched (even),
        // then the boundary orbit.
        int interior = 0, core = 0, pinch = 0, boundary = 0;
        for (const FaceCertificate& f : r.cert.faces) {
            interior += f.kind == FaceKind::interior;
            core += f.kind == FaceKind::core;
            pinch += f.kind == FaceKind::pinched;
            boundary += f.kind == FaceKind::boundary;
            CHECK(f.margin > 0.0);
            if (f.kind == FaceKind::pinched) {
                // The vertex pair merged into the puncture carries no weight,
                // and the apex segment is crossed at its midpoint.
                CHECK(std::abs(f.alpha) <= 1e-12);
                CHECK(std::abs(f.lambda - 0.5) <= 1e-9);
            }
        }
        CHECK(interior == a.faces - 2);
        CHECK(core == (a.parity == Parity::odd ? 1 : 0));
        CHECK(pinch == (a.parity == Parity::even ? 1 : 0));
        CHECK(boundary == 1);
    }
}

TEST_CASE("exact values at the smallest fillings") {
    // (1,3): the filled manifold is the regular ideal tetrahedron's sibling
    // with theta* = pi/3, volume v3 and boundary margin exactly 1/2.
    FillingResult r = whitehead_fill(1, 3);
    CHECK(std::abs(r.vol.theta - kPi / 3) <= 1e-10);
    CHECK(std::abs(r.vol.value - kV3) <= 5e-15);
    CHECK(std::abs(r.cert.min_margin - 0.5) <= 1e-9);

    // (1,4): single-pair filling whose minimal margin is (sqrt 2 - 1) / 2.
    FillingResult r4 = whitehead_fill(1, 4);
    CHECK(std::abs(r4.cert.min_margin - (std::numbers::sqrt2 - 1) / 2) <= 1e-12);
}

TEST_CASE("the claimed maximum is a critical point of the reconstructed objective") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{4, 3}, {3, 4}, {2, 5}, {11, 8}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingResult r = whitehead_fill(k, l);
        const FillingSetup& s = r.setup;
        const double h = 1e-5;

        double up = direct_volume(s, r.vol.theta + h, r.vol.z);
        double dn = direct_volume(s, r.vol.theta - h, r.vol.z);
        CHECK(std::abs(up - dn) / (2 * h) <= 1e-6);

        const int hi = s.parity == Parity::odd ? s.path.N() - 1 : s.path.N() + 1;
        for (int i = 2; i <= hi; ++i) {
            CAPTURE(i);
            std::vector<double> zu = r.vol.z, zd = r.vol.z;
            zu[i] += h;
            zd[i] -= h;
            double dv = (direct_volume(s, r.vol.theta, zu) -
                         direct_volume(s, r.vol.theta, zd)) /
                        (2 * h);
            CHECK(std::abs(dv) <= 1e-6);
        }
    }
}

TEST_CASE("an independent ascent from a perturbed start recovers the maximum") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{4, 3}, {3, 4}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingResult r = whitehead_fill(k, l);
        std::vector<double> z0 = r.vol.z;
        const int hi = r.setup.parity == Parity::odd ? r.setup.path.N() - 1
                                                     : r.setup.path.N() + 1;
        for (int i = 2; i <= hi; ++i) z0[i] += (i % 2 == 0 ? 0.02 : -0.015);
        AscentResult asc = coordinate_ascent(r.setup, r.vol.theta + 0.04, z0);

        // The solver's maximum dominates every point the ascent visits, and
        // the ascent lands back on it.
        CHECK(asc.value <= r.vol.value + 1e-12);
        CHECK(asc.value >= r.vol.value - 1e-6);
        CHECK(std::abs(asc.theta - r.vol.theta) <= 2e-3);
        for (int i = 2; i <= hi; ++i) {
            CAPTURE(i);
            CHECK(std::abs(asc.z[i] - r.vol.z[i]) <= 5e-3);
        }
    }
}

TEST_CASE("even development: meridian class and doubled edge classes") {
    FillingResult r = whitehead_fill(11, 8);
    REQUIRE(r.setup.parity == Parity::even);
    REQUIRE(!r.dev.layers.empty());
    CHECK(static_cast<int>(r.dev.layers.size()) == r.setup.path.N());
    CHECK(r.dev.layers.back().pinched);

    bool saw_meridian = false;
    for (const EdgeClassCheck& ec : r.dev.edge_classes) {
        CAPTURE(to_string(ec.slopes.front()));
        bool meridian = ec.slopes.size() == 1 && ec.slopes.front() == r.setup.m;
        saw_meridian |= meridian;
        if (meridian) {
            CHECK(ec.multiplicity == 1);
            CHECK(ec.angle_target == doctest::Approx(2 * kPi).epsilon(1e-15));
        } else {
            CHECK(ec.multiplicity == 2);
        }
        CHECK(std::abs(ec.angle_sum - ec.angle_target) <= 1e-11);
        if (!ec.boundary) CHECK(std::abs(ec.shape_product - cplx{1.0, 0.0}) <= 1e-9);
    }
    CHECK(saw_meridian);
}

TEST_CASE("mirror fillings: swapped letters, negated seeds, equal volumes") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{3, 1},
                        {5, 3},
                        {11, 8},
                        {2, 5},
                        {4, 3},
                        {3, 4}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingResult a = whitehead_fill(k, l);
        FillingResult b = whitehead_fill(k, -l);

        std::string mirrored = real_letters(a.setup.path);
        for (char& c : mirrored) c = (c == 'L') ? 'R' : 'L';
        CHECK(real_letters(b.setup.path) == mirrored);
        CHECK(b.setup.m == make_slope(-a.setup.m.num, a.setup.m.den));

        CHECK(std::abs(a.vol.value - b.vol.value) <= 1e-12);
        CHECK(std::abs(a.cert.min_margin - b.cert.min_margin) <= 1e-9);
        CHECK(a.cert.canonical());
        CHECK(b.cert.canonical());
    }
}

TEST_CASE("volumes increase along the (1,l) families below the unfilled bound") {
    double prev = 0;
    for (std::int64_t l = 3; l <= 13; l += 2) {
        CAPTURE(l);
        double v = whitehead_fill(1, l).vol.value;
        CHECK(v > prev);
        CHECK(v < kUnfilledBound);
        prev = v;
    }
    prev = 0;
    for (std::int64_t l = 4; l <= 12; l += 2) {
        CAPTURE(l);
        double v = whitehead_fill(1, l).vol.value;
        CHECK(v > prev);
        CHECK(v < kUnfilledBound);
        prev = v;
    }
}

TEST_CASE("perturbing the solution breaks certification or holonomy") {
    for (auto [k, l] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {3, 4}}) {
        CAPTURE(k);
        CAPTURE(l);
        FillingResult r = whitehead_fill(k, l);
        BoundaryAngles b = filling_angles(r.setup, r.vol.theta);
        std::vector<double> z = r.vol.z;
        z[2] += 0.05;
        DevelopedCusp dev = r.setup.parity == Parity::odd
                                ? develop(r.setup.path, b, z)
                                : develop_even(r.setup.path, b, z);
        CanonicityCertificate cert = certify_filled(dev);
        double residual = std::max({dev.meridian_residual, dev.max_chain_residual,
                                    dev.max_shape_product_error, dev.fold_residual});
        CHECK((!cert.canonical() || residual >= 1e-4));
    }
}

TEST_CASE("repeated solves are bit-identical") {
    FillingResult a = whitehead_fill(5, 3);
    FillingResult b = whitehead_fill(5, 3);
    CHECK(a.vol.theta == b.vol.theta);
    CHECK(a.vol.value == b.vol.value);
    CHECK(a.vol.z == b.vol.z);
    CHECK(a.cert.min_margin == b.cert.min_margin);
}
