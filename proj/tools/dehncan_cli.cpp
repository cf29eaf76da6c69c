// dehncan: command-line front end.
//
// Subcommands:
//   torus      solve one triangulated solid torus and emit its certificate
//   whitehead  solve one Dehn filling of the Whitehead link complement
//   batch      sweep a rectangle of filling classes, emit a CSV summary
//   verify     re-check a certificate file's margins and residuals
//   cuspview   render the nested cusp cross-sections of a certificate as SVG
//
// Exit codes: 0 solved and certified canonical (verify: file consistent and
// canonical); 1 completed but not canonical (or verify mismatch); 2 malformed
// input (CLI, slope, theta or JSON); 3 infeasible or non-hyperbolic input;
// 4 solver failed to converge.

#include <algorithm>
#include <clocale>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dehncan/angles.hpp"
#include "dehncan/canonical.hpp"
#include "dehncan/config.hpp"
#include "dehncan/develop.hpp"
#include "dehncan/errors.hpp"
#include "dehncan/farey.hpp"
#include "dehncan/slope.hpp"
#include "dehncan/volume.hpp"
#include "dehncan/whitehead.hpp"

namespace {

using dehncan::BoundaryAngles;
using dehncan::CanonicityCertificate;
using dehncan::Config;
using dehncan::convergence_error;
using dehncan::cplx;
using dehncan::DevelopedCusp;
using dehncan::FaceCertificate;
using dehncan::FaceKind;
using dehncan::FareyPath;
using dehncan::FillingResult;
using dehncan::FillingSetup;
using dehncan::infeasible_error;
using dehncan::InterfaceLayer;
using dehncan::Parity;
using dehncan::parse_error;
using dehncan::Slope;
using dehncan::TetAngles;
using dehncan::VolumeResult;
using json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr const char* kSchemaVersion = "dehncan.certificate/1";

// --- deterministic JSON writer ---------------------------------------------
//
// Floats are printed with %.17g (17 significant digits round-trip IEEE
// doubles bit-exactly), keys in insertion order, two-space indent.  Parsing
// a serialized certificate into an ordered json value and re-serializing it
// reproduces the file byte for byte.

std::string format_double(double d) {
    if (!std::isfinite(d)) return "null";
    if (d == 0.0) d = 0.0;  // never emit "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

void append_json(std::string& out, const json& v, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    const std::string pad1(2 * static_cast<std::size_t>(depth) + 2, ' ');
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : v.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad1 + json(key).dump() + ": ";
            append_json(out, value, depth + 1);
        }
        out += "\n" + pad + "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        // Short numeric arrays (complex numbers, angle triples) stay inline.
        bool inline_ok = v.size() <= 3;
        for (const auto& e : v)
            inline_ok = inline_ok && (e.is_number() || e.is_string() || e.is_boolean());
        if (inline_ok) {
            out += "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ", ";
                append_json(out, v[i], depth);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad1;
            append_json(out, v[i], depth + 1);
        }
        out += "\n" + pad + "]";
    } else if (v.is_number_float()) {
        out += format_double(v.get<double>());
    } else {
        out += v.dump();
    }
}

std::string serialize_certificate(const json& j) {
    std::string out;
    append_json(out, j, 0);
    out += "\n";
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw parse_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// --- small parsing helpers --------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size())
        throw parse_error("malformed number '" + s + "'");
    return v;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
    std::string text = s;
    std::size_t dots = text.find("..");
    if (dots != std::string::npos) text.replace(dots, 2, ":");
    std::vector<std::string> parts = split(text, ':');
    auto parse_int = [](const std::string& t) {
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (t.empty() || pos != t.size())
            throw parse_error("malformed integer '" + t + "'");
        return v;
    };
    if (parts.size() == 1) {
        std::int64_t v = parse_int(parts[0]);
        return {v, v};
    }
    if (parts.size() != 2) throw parse_error("malformed range '" + s + "' (use lo:hi)");
    std::int64_t lo = parse_int(parts[0]), hi = parse_int(parts[1]);
    if (lo > hi) throw parse_error("empty range '" + s + "'");
    return {lo, hi};
}

Config make_config(const std::string& precision_flag) {
    Config cfg = dehncan::config_from_env();
    if (!precision_flag.empty()) {
        if (precision_flag == "double")
            cfg.precision = dehncan::Precision::double_prec;
        else if (precision_flag == "extended")
            cfg.precision = dehncan::Precision::extended;
        else
            throw parse_error("unknown precision '" + precision_flag +
                              "' (expected double or extended)");
    }
    return cfg;
}

// --- JSON assembly -----------------------------------------------------------

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json angles_json(const TetAngles& t) { return json::array({t.x, t.y, t.z}); }

const char* kind_name(FaceKind k) {
    switch (k) {
        case FaceKind::interior: return "interior";
        case FaceKind::core: return "core";
        case FaceKind::pinched: return "pinched";
        case FaceKind::boundary: return "boundary";
    }
    return "interior";
}

json face_json(const FaceCertificate& f) {
    json j;
    j["index"] = f.interface_index;
    j["kind"] = kind_name(f.kind);
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["gamma"] = f.gamma;
    j["lambda"] = f.lambda;
    j["margin"] = f.margin;
    j["margin_trig"] = f.margin_trig;
    j["margin_ls"] = f.margin_ls;
    j["ls_residual"] = f.ls_residual;
    j["hand_im"] = f.hand_im;
    j["handedness"] = std::string(1, f.handedness);
    j["expected"] = std::string(1, f.expected);
    j["hand_ok"] = f.hand_ok;
    if (f.kind == FaceKind::boundary) {
        j["flat_residual"] = f.flat_residual;
        j["square_residual"] = f.square_residual;
    }
    return j;
}

json layer_json(const InterfaceLayer& l) {
    json j;
    j["index"] = l.index;
    j["letter"] = std::string(1, l.letter);
    j["collapsed"] = l.collapsed;
    j["pinched"] = l.pinched;
    j["pivot"] = to_string(l.pivot);
    j["zeta_slope"] = to_string(l.zeta_slope);
    j["zeta_p_slope"] = to_string(l.zeta_p_slope);
    j["zeta"] = cjson(l.zeta);
    j["zeta_p"] = cjson(l.zeta_p);
    j["zeta_n"] = cjson(l.zeta_n);
    j["zeta_p_n"] = cjson(l.zeta_p_n);
    j["frame_scale"] = cjson(l.frame_scale);
    j["diam_pivot"] = l.diam_pivot;
    j["diam_zeta"] = l.diam_zeta;
    j["diam_zeta_p"] = l.diam_zeta_p;
    return j;
}

json development_json(const DevelopedCusp& dev) {
    json j;
    json hex = json::array();
    for (cplx v : dev.outer_hexagon) hex.push_back(cjson(v));
    j["outer_hexagon"] = hex;
    json layers = json::array();
    for (const InterfaceLayer& l : dev.layers) layers.push_back(layer_json(l));
    j["layers"] = layers;
    return j;
}

json residuals_json(const DevelopedCusp& dev) {
    json j;
    j["max_chain"] = dev.max_chain_residual;
    j["fold"] = dev.fold_residual;
    j["meridian"] = dev.meridian_residual;
    j["max_shape_product"] = dev.max_shape_product_error;
    j["max_interior_angle"] = dev.max_interior_angle_error;
    j["max_boundary_angle"] = dev.max_boundary_angle_error;
    return j;
}

json summary_json(const CanonicityCertificate& cert) {
    json j;
    j["min_margin"] = cert.min_margin;
    j["max_two_route_error"] = cert.max_two_route_error;
    j["max_ls_error"] = cert.max_ls_error;
    j["max_holonomy_residual"] = cert.max_holonomy_residual;
    j["all_hands_match"] = cert.all_hands_match;
    j["margin_floor"] = cert.margin_floor;
    j["verdict"] = to_string(cert.verdict);
    return j;
}

json faces_json(const CanonicityCertificate& cert) {
    json faces = json::array();
    for (const FaceCertificate& f : cert.faces) faces.push_back(face_json(f));
    return faces;
}

// Volume recomputed from the public angle maps (used by verify).
double direct_volume_odd(const FareyPath& path, const std::vector<double>& z) {
    double v = 0;
    for (int i = 1; i <= path.N() - 1; ++i)
        v += dehncan::tet_volume(dehncan::tet_angles(path, z, i));
    return v;
}

double direct_volume_even(const FareyPath& path, const std::vector<double>& z) {
    double v = 0;
    for (int i = 1; i <= path.N(); ++i)
        v += 2 * dehncan::tet_volume(dehncan::even_pair_angles(path, z, i));
    return v + dehncan::tet_volume(dehncan::even_last_angles(path, z));
}

// --- torus subcommand --------------------------------------------------------

struct ThetaSpec {
    std::array<double, 3> value{};  // caller order (theta_p, theta_q, theta_r)
    std::array<bool, 3> is_auto{};
    int autos = 0;
};

ThetaSpec parse_theta_spec(const std::string& text) {
    std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 3)
        throw parse_error("--theta expects three comma-separated entries, got '" +
                          text + "'");
    ThetaSpec spec;
    for (int i = 0; i < 3; ++i) {
        if (parts[i] == "auto") {
            spec.is_auto[i] = true;
            ++spec.autos;
        } else {
            spec.value[i] = parse_double(parts[i]);
        }
    }
    return spec;
}

// Completes the boundary angle triple in caller label order:
//   * no "auto": the entries must already sum to pi;
//   * one "auto": the free entry is pinned by the sum;
//   * two "auto": one free parameter remains after the sum constraint; it is
//     set to the midpoint of the interval where the feasibility margin
//     (m /\ p) theta_p + (m /\ q) theta_q + (m /\ r) theta_r - 2 pi
//     is positive.
std::array<double, 3> complete_theta(ThetaSpec spec,
                                     const std::array<Slope, 3>& labels,
                                     const Slope& m) {
    if (spec.autos == 3)
        throw parse_error("--theta needs at least one numeric entry");
    if (spec.autos == 0) {
        double sum = spec.value[0] + spec.value[1] + spec.value[2];
        if (std::abs(sum - kPi) > 1e-9)
            throw parse_error("theta triple must sum to pi (got " +
                              format_double(sum) + ")");
        // Absorb the last rounding into the largest entry so the sum is exact.
        int big = 0;
        for (int i = 1; i < 3; ++i)
            if (spec.value[i] > spec.value[big]) big = i;
        double rest = 0;
        for (int i = 0; i < 3; ++i)
            if (i != big) rest += spec.value[i];
        spec.value[big] = kPi - rest;
    } else if (spec.autos == 1) {
        int f = 0;
        while (!spec.is_auto[f]) ++f;
        double rest = 0;
        for (int i = 0; i < 3; ++i)
            if (i != f) rest += spec.value[i];
        spec.value[f] = kPi - rest;
    } else {
        int fixed = 0;
        while (spec.is_auto[fixed]) ++fixed;
        const double g = spec.value[fixed];
        int i = -1, j = -1;
        for (int c = 0; c < 3; ++c)
            if (c != fixed) (i < 0 ? i : j) = c;
        // theta_i = t, theta_j = pi - g - t; margin(t) = A + B t.
        const double wi = static_cast<double>(wedge(m, labels[i]));
        const double wj = static_cast<double>(wedge(m, labels[j]));
        const double wf = static_cast<double>(wedge(m, labels[fixed]));
        const double A = wj * (kPi - g) + wf * g - 2 * kPi;
        const double B = wi - wj;
        double lo = 0, hi = kPi - g;
        if (hi <= 0)
            throw infeasible_error("fixed theta entry leaves no room: " +
                                   format_double(g));
        if (B > 0)
            lo = std::max(lo, -A / B);
        else if (B < 0)
            hi = std::min(hi, -A / B);
        else if (A <= 0)
            lo = hi;  // margin constant and non-positive: empty
        if (!(lo < hi))
            throw infeasible_error(
                "no feasible completion of the theta triple (the feasibility "
                "margin is non-positive on the whole interval)");
        const double t = (lo + hi) / 2;
        spec.value[i] = t;
        spec.value[j] = kPi - g - t;
    }
    for (double v : spec.value)
        if (!std::isfinite(v)) throw parse_error("theta entry is not finite");
    return spec.value;
}

// Binds a labeled seed triangle and caller-space angle triple to the path
// convention: the starting vertex (the path's r) is the unique seed vertex
// separated from the meridian by its opposite edge, and each angle follows
// its slope through the relabeling and through any p/q swap of the path.
struct TorusProblem {
    FareyPath path;
    BoundaryAngles b;
};

TorusProblem bind_torus(const std::array<Slope, 3>& seed, const Slope& m,
                        const std::array<double, 3>& theta) {
    for (int a = 0; a < 3; ++a)
        if (wedge(seed[a], seed[(a + 1) % 3]) != 1)
            throw infeasible_error("seed slopes " + to_string(seed[a]) + ", " +
                                   to_string(seed[(a + 1) % 3]) +
                                   " do not span a triangle edge");
    for (const Slope& s : seed)
        if (m == s)
            throw infeasible_error("meridian " + to_string(m) +
                                   " coincides with a seed vertex");
    int start = -1;
    for (int c = 0; c < 3 && start < 0; ++c)
        if (edge_separates(seed[(c + 1) % 3], seed[(c + 2) % 3], seed[c], m))
            start = c;
    if (start < 0)
        throw infeasible_error("no seed vertex is separated from the meridian " +
                               to_string(m) + " by its opposite edge");

    TorusProblem out;
    out.path = farey_path(seed[(start + 1) % 3], seed[(start + 2) % 3],
                          seed[start], m);
    double tp = theta[(start + 1) % 3];
    double tq = theta[(start + 2) % 3];
    const double tr = theta[start];
    if (out.path.pq_swapped) std::swap(tp, tq);
    if (tp < 0 || tq < 0)
        throw infeasible_error("boundary angles at the edge slopes must be "
                               "non-negative");
    if (!(tr > 0 && tr < kPi))
        throw infeasible_error("the angle at the starting vertex " +
                               to_string(seed[start]) +
                               " must lie strictly between 0 and pi");
    out.b = BoundaryAngles{tp, tq, tr};
    return out;
}

struct TorusArgs {
    std::string pqr, m, theta;
    std::string out;
    std::string precision;
};

int cmd_torus(const TorusArgs& args) {
    const Config cfg = make_config(args.precision);

    std::vector<std::string> parts = split(args.pqr, ',');
    if (parts.size() != 3)
        throw parse_error("--pqr expects three comma-separated slopes, got '" +
                          args.pqr + "'");
    const std::array<Slope, 3> seed = {dehncan::parse_slope(parts[0]),
                                       dehncan::parse_slope(parts[1]),
                                       dehncan::parse_slope(parts[2])};
    const Slope m = dehncan::parse_slope(args.m);
    const std::array<double, 3> theta =
        complete_theta(parse_theta_spec(args.theta), seed, m);

    TorusProblem prob = bind_torus(seed, m, theta);
    const FareyPath& path = prob.path;
    const BoundaryAngles& b = prob.b;

    const dehncan::FeasibilityReport fr = feasible(path, b);
    if (!fr.feasible)
        throw infeasible_error(
            "no positive angle structure for these boundary angles "
            "(feasibility margin = " +
            format_double(fr.margin) + ")");

    const VolumeResult vr = maximize(path, b, cfg);
    const DevelopedCusp dev = develop(path, b, vr.z_star);
    const CanonicityCertificate cert =
        certify(dev, {cfg.margin_floor, /*holonomy_tol=*/1e-6});

    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "torus";
    {
        json in;
        in["pqr"] = json::array(
            {to_string(seed[0]), to_string(seed[1]), to_string(seed[2])});
        in["m"] = to_string(m);
        in["theta"] = json::array({theta[0], theta[1], theta[2]});
        j["input"] = in;
    }
    {
        json s;
        s["p"] = to_string(path.p);
        s["q"] = to_string(path.q);
        s["r"] = to_string(path.r);
        s["pq_swapped"] = path.pq_swapped;
        s["word"] = path.word.empty() ? std::string() : path.word.substr(1);
        s["N"] = path.N();
        s["theta_p"] = b.p;
        s["theta_q"] = b.q;
        s["theta_r"] = b.r;
        j["setup"] = s;
    }
    {
        json s;
        s["z_star"] = json(vr.z_star);
        json tets = json::array();
        for (const TetAngles& t : all_tet_angles(path, vr.z_star))
            tets.push_back(angles_json(t));
        s["tet_angles"] = tets;
        s["volume"] = vr.value;
        s["grad_norm"] = vr.grad_norm;
        s["iterations"] = vr.iterations;
        j["solution"] = s;
    }
    j["residuals"] = residuals_json(dev);
    j["faces"] = faces_json(cert);
    j["summary"] = summary_json(cert);
    j["development"] = development_json(dev);

    write_text(args.out, serialize_certificate(j));
    return cert.canonical() ? 0 : 1;
}

// --- whitehead subcommand ----------------------------------------------------

struct WhiteheadArgs {
    std::int64_t k = 0, l = 0;
    std::string out;
    std::string precision;
};

json whitehead_json(const FillingResult& r) {
    const FareyPath& path = r.setup.path;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "whitehead";
    {
        json in;
        in["k"] = r.setup.k;
        in["l"] = r.setup.l;
        j["input"] = in;
    }
    {
        json s;
        s["parity"] = r.setup.parity == Parity::odd ? "odd" : "even";
        s["m"] = to_string(r.setup.m);
        s["p"] = to_string(path.p);
        s["q"] = to_string(path.q);
        s["r"] = to_string(path.r);
        s["pq_swapped"] = path.pq_swapped;
        s["word"] = path.word.empty() ? std::string() : path.word.substr(1);
        s["N"] = path.N();
        s["theta_on_q"] = r.setup.theta_on_q;
        s["theta_max"] = r.setup.theta_max;
        j["setup"] = s;
    }
    {
        json s;
        s["theta_star"] = r.vol.theta;
        s["z_star"] = json(r.vol.z);
        json tets = json::array();
        if (r.setup.parity == Parity::odd) {
            for (const TetAngles& t : all_tet_angles(path, r.vol.z))
                tets.push_back(angles_json(t));
        } else {
            for (int i = 1; i <= path.N(); ++i)
                tets.push_back(angles_json(even_pair_angles(path, r.vol.z, i)));
            s["closing_angles"] = angles_json(even_last_angles(path, r.vol.z));
        }
        s["tet_angles"] = tets;
        s["volume"] = r.vol.value;
        s["grad_norm"] = r.vol.grad_norm;
        s["iterations"] = r.vol.iterations;
        j["solution"] = s;
    }
    j["residuals"] = residuals_json(r.dev);
    j["faces"] = faces_json(r.cert);
    j["summary"] = summary_json(r.cert);
    j["development"] = development_json(r.dev);
    return j;
}

int cmd_whitehead(const WhiteheadArgs& args) {
    const Config cfg = make_config(args.precision);
    const FillingResult r = dehncan::whitehead_fill(args.k, args.l, cfg);
    write_text(args.out, serialize_certificate(whitehead_json(r)));
    return r.cert.canonical() ? 0 : 1;
}

// --- batch subcommand --------------------------------------------------------

struct BatchArgs {
    std::string krange, lrange;
    std::string csv;
    std::string precision;
};

int cmd_batch(const BatchArgs& args) {
    const Config cfg = make_config(args.precision);
    const auto [klo, khi] = parse_range(args.krange);
    const auto [llo, lhi] = parse_range(args.lrange);

    std::string csv = "k,l,parity,N,volume,min_margin,verdict\n";
    int rc = 0;
    for (std::int64_t k = klo; k <= khi; ++k) {
        for (std::int64_t l = llo; l <= lhi; ++l) {
            if (std::gcd(std::abs(k), std::abs(l)) != 1) continue;  // no class
            csv += std::to_string(k) + "," + std::to_string(l) + ",";
            if (dehncan::exceptional_filling(k, l)) {
                csv += ",,,,non-hyperbolic\n";
                continue;
            }
            try {
                const FillingResult r = dehncan::whitehead_fill(k, l, cfg);
                csv += r.setup.parity == Parity::odd ? "odd," : "even,";
                csv += std::to_string(r.setup.path.N()) + ",";
                csv += format_double(r.vol.value) + ",";
                csv += format_double(r.cert.min_margin) + ",";
                csv += to_string(r.cert.verdict) + "\n";
            } catch (const convergence_error&) {
                csv += ",,,,non-convergence\n";
                rc = 4;
            }
        }
    }
    write_text(args.csv, csv);
    return rc;
}

// --- verify subcommand -------------------------------------------------------

struct Recomputed {
    DevelopedCusp dev;
    CanonicityCertificate cert;
    double volume = 0;
};

Recomputed recompute(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    Recomputed out;
    if (kind == "torus") {
        const json& in = j.at("input");
        const std::array<Slope, 3> seed = {
            dehncan::parse_slope(in.at("pqr").at(0).get<std::string>()),
            dehncan::parse_slope(in.at("pqr").at(1).get<std::string>()),
            dehncan::parse_slope(in.at("pqr").at(2).get<std::string>())};
        const std::array<double, 3> theta = {in.at("theta").at(0).get<double>(),
                                             in.at("theta").at(1).get<double>(),
                                             in.at("theta").at(2).get<double>()};
        const TorusProblem prob =
            bind_torus(seed, dehncan::parse_slope(in.at("m").get<std::string>()), theta);
        const std::vector<double> z =
            j.at("solution").at("z_star").get<std::vector<double>>();
        out.dev = develop(prob.path, prob.b, z);
        out.cert = certify(out.dev);
        out.volume = direct_volume_odd(prob.path, z);
        return out;
    }
    if (kind == "whitehead") {
        const FillingSetup s =
            dehncan::filling_setup(j.at("input").at("k").get<std::int64_t>(),
                                   j.at("input").at("l").get<std::int64_t>());
        const double theta = j.at("solution").at("theta_star").get<double>();
        const BoundaryAngles b = filling_angles(s, theta);
        const std::vector<double> z =
            j.at("solution").at("z_star").get<std::vector<double>>();
        out.dev = s.parity == Parity::odd ? develop(s.path, b, z)
                                          : develop_even(s.path, b, z);
        out.cert = certify_filled(out.dev);
        out.volume = s.parity == Parity::odd ? direct_volume_odd(s.path, z)
                                             : direct_volume_even(s.path, z);
        return out;
    }
    throw parse_error("unknown certificate kind '" + kind + "'");
}

int cmd_verify(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed certificate JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version") ||
        j["schema_version"] != kSchemaVersion)
        throw parse_error("unsupported certificate schema (expected " +
                          std::string(kSchemaVersion) + ")");

    const Recomputed rec = recompute(j);

    std::vector<std::string> problems;
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };

    // Stored faces against the recomputation from z*.
    const json& faces = j.at("faces");
    check(faces.size() == rec.cert.faces.size(), "face count differs");
    for (std::size_t i = 0; i < faces.size() && i < rec.cert.faces.size(); ++i) {
        const json& f = faces[i];
        const FaceCertificate& g = rec.cert.faces[i];
        const std::string where = "face " + std::to_string(i) + " ";
        check(f.at("kind").get<std::string>() == kind_name(g.kind), where + "kind");
        check(close(f.at("margin").get<double>(), g.margin), where + "margin");
        check(close(f.at("margin_trig").get<double>(), g.margin_trig),
              where + "margin_trig");
        check(close(f.at("margin_ls").get<double>(), g.margin_ls),
              where + "margin_ls");
        check(close(f.at("alpha").get<double>(), g.alpha), where + "alpha");
        check(close(f.at("beta").get<double>(), g.beta), where + "beta");
        check(close(f.at("gamma").get<double>(), g.gamma), where + "gamma");
        check(close(f.at("lambda").get<double>(), g.lambda), where + "lambda");
        check(f.at("hand_ok").get<bool>() == g.hand_ok, where + "hand_ok");
        check(f.at("handedness").get<std::string>() == std::string(1, g.handedness),
              where + "handedness");
    }

    // Stored residuals against the redevelopment.
    const json& res = j.at("residuals");
    check(close(res.at("max_chain").get<double>(), rec.dev.max_chain_residual),
          "chain residual");
    check(close(res.at("fold").get<double>(), rec.dev.fold_residual),
          "fold residual");
    check(close(res.at("meridian").get<double>(), rec.dev.meridian_residual),
          "meridian residual");
    check(close(res.at("max_shape_product").get<double>(),
                rec.dev.max_shape_product_error),
          "shape product residual");

    // Summary block.
    const json& sum = j.at("summary");
    check(close(sum.at("min_margin").get<double>(), rec.cert.min_margin),
          "min margin");
    check(sum.at("verdict").get<std::string>() == to_string(rec.cert.verdict),
          "verdict");
    check(close(j.at("solution").at("volume").get<double>(), rec.volume),
          "volume");

    const bool canonical = rec.cert.canonical();
    if (!problems.empty()) {
        std::cout << "verify: FAIL (" << path << ")\n";
        for (const std::string& p : problems) std::cout << "  mismatch: " << p << "\n";
        return 1;
    }
    std::cout << "verify: all stored margins, residuals and the verdict match "
                 "their recomputation\n";
    std::cout << "verify: verdict " << to_string(rec.cert.verdict)
              << ", min margin " << format_double(rec.cert.min_margin)
              << ", max holonomy residual "
              << format_double(rec.cert.max_holonomy_residual) << "\n";
    return canonical ? 0 : 1;
}

// --- cuspview subcommand -----------------------------------------------------

struct SvgArgs {
    std::string certificate;
    std::string out;
};

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmd_cuspview(const SvgArgs& args) {
    json j;
    try {
        j = json::parse(read_text(args.certificate));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed certificate JSON: ") + e.what());
    }
    if (!j.contains("development"))
        throw parse_error("certificate has no development data");
    const json& dev = j["development"];
    if (!dev.contains("outer_hexagon") || !dev.contains("layers"))
        throw parse_error("certificate has no development data");

    auto pt = [](const json& a) {
        return cplx{a.at(0).get<double>(), a.at(1).get<double>()};
    };

    // Collect polygons in the base frame: the outer cross-section, then one
    // centrally symmetric hexagon per interface layer.
    std::vector<std::vector<cplx>> polys;
    std::vector<bool> degenerate;
    {
        std::vector<cplx> outer;
        for (const json& v : dev["outer_hexagon"]) outer.push_back(pt(v));
        if (outer.size() != 6) throw parse_error("outer hexagon needs 6 vertices");
        polys.push_back(outer);
        degenerate.push_back(false);
    }
    for (const json& l : dev["layers"]) {
        const cplx scale = pt(l.at("frame_scale"));
        const cplx zeta = pt(l.at("zeta"));
        const cplx zeta_p = pt(l.at("zeta_p"));
        std::vector<cplx> hex = {cplx{-1.0, 0.0}, zeta_p, zeta,
                                 cplx{1.0, 0.0},  -zeta_p, -zeta};
        for (cplx& v : hex) v *= scale;
        polys.push_back(hex);
        degenerate.push_back(l.at("collapsed").get<bool>() ||
                             l.at("pinched").get<bool>());
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& poly : polys)
        for (cplx v : poly) {
            xmin = std::min(xmin, v.real());
            xmax = std::max(xmax, v.real());
            ymin = std::min(ymin, -v.imag());  // SVG y axis points down
            ymax = std::max(ymax, -v.imag());
        }
    const double pad = 0.06 * std::max(xmax - xmin, ymax - ymin);
    xmin -= pad;
    ymin -= pad;
    const double w = (xmax - xmin) + 2 * pad, h = (ymax - ymin) + 2 * pad;
    const double stroke = 0.006 * std::max(w, h);

    static const char* kPalette[] = {"#2266aa", "#cc5522", "#228855",
                                     "#aa44aa", "#887711", "#118899"};
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt6(xmin) +
           " " + fmt6(ymin) + " " + fmt6(w) + " " + fmt6(h) +
           "\" width=\"640\" height=\"" + fmt6(640.0 * h / w) + "\">\n";
    svg += "  <g fill=\"none\" stroke-linejoin=\"round\">\n";
    for (std::size_t p = 0; p < polys.size(); ++p) {
        std::string points;
        for (cplx v : polys[p]) {
            if (!points.empty()) points += " ";
            points += fmt6(v.real()) + "," + fmt6(-v.imag());
        }
        const bool outer = p == 0;
        const std::string color =
            outer ? "#111111" : kPalette[(p - 1) % (sizeof kPalette / sizeof *kPalette)];
        svg += "    <polygon points=\"" + points + "\" stroke=\"" + color +
               "\" stroke-width=\"" + fmt6(outer ? 1.6 * stroke : stroke) + "\"";
        if (degenerate[p])
            svg += " stroke-dasharray=\"" + fmt6(3 * stroke) + " " + fmt6(2 * stroke) + "\"";
        svg += "/>\n";
    }
    svg += "  </g>\n";
    svg += "  <circle cx=\"0\" cy=\"0\" r=\"" + fmt6(1.2 * stroke) +
           "\" fill=\"#111111\"/>\n";
    svg += "</svg>\n";

    write_text(args.out, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"Triangulated solid tori, Dehn fillings and canonicity certificates"};
    app.require_subcommand(1);

    TorusArgs torus;
    CLI::App* t = app.add_subcommand(
        "torus", "solve one triangulated solid torus and emit its certificate");
    t->add_option("--pqr", torus.pqr, "seed triangle, three slopes a/b or inf")
        ->required();
    t->add_option("--m", torus.m, "meridian slope")->required();
    t->add_option("--theta", torus.theta,
                  "boundary angles theta_p,theta_q,theta_r; entries may be "
                  "'auto' (completed by the pi sum, then by the feasibility "
                  "midpoint)")
        ->required();
    t->add_option("-o,--out,--json", torus.out, "certificate path (default stdout)");
    t->add_option("--precision", torus.precision, "double | extended");

    WhiteheadArgs wh;
    CLI::App* w = app.add_subcommand(
        "whitehead", "solve one Dehn filling of the Whitehead link complement");
    w->add_option("-k,--k", wh.k, "filling class k")->required();
    w->add_option("-l,--l", wh.l, "filling class l")->required();
    w->add_option("-o,--out,--json", wh.out, "certificate path (default stdout)");
    w->add_option("--precision", wh.precision, "double | extended");

    BatchArgs batch;
    CLI::App* b = app.add_subcommand(
        "batch", "sweep filling classes and emit a CSV summary");
    b->add_option("--k", batch.krange, "k range lo:hi (or a single value)")
        ->required();
    b->add_option("--l", batch.lrange, "l range lo:hi (or a single value)")
        ->required();
    b->add_option("--csv", batch.csv, "CSV path (default stdout)");
    b->add_option("--precision", batch.precision, "double | extended");

    std::string verify_path;
    CLI::App* v = app.add_subcommand(
        "verify", "re-check a certificate file's margins and residuals");
    v->add_option("certificate", verify_path, "certificate JSON path")->required();

    SvgArgs svg;
    CLI::App* c = app.add_subcommand(
        "cuspview", "render the nested cusp cross-sections as SVG");
    c->add_option("certificate", svg.certificate, "certificate JSON path")
        ->required();
    c->add_option("--svg", svg.out, "SVG path (default stdout)");

    // Merge "--flag value" into "--flag=value" for the option values that can
    // begin with '-' (negative slopes), which the lexer would otherwise read
    // as option names.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size();) {
        if (args[i] == "--m" || args[i] == "--pqr" || args[i] == "--theta" ||
            args[i] == "--k" || args[i] == "--l") {
            args[i] += "=" + args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
        ++i;
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto guarded = [](const std::function<int()>& fn) {
        try {
            return fn();
        } catch (const parse_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const infeasible_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        } catch (const convergence_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 4;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    };

    if (t->parsed()) return guarded([&] { return cmd_torus(torus); });
    if (w->parsed()) return guarded([&] { return cmd_whitehead(wh); });
    if (b->parsed()) return guarded([&] { return cmd_batch(batch); });
    if (v->parsed()) return guarded([&] { return cmd_verify(verify_path); });
    if (c->parsed()) return guarded([&] { return cmd_cuspview(svg); });
    return 2;
}
