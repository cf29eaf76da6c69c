#include "dehncan/volume.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "dehncan/errors.hpp"
#include "dehncan/lobachevsky.hpp"

namespace dehncan {

namespace {

constexpr double kPi = std::numbers::pi;

// One dihedral-angle slot of one tetrahedron as an affine function of the
// full z-vector: angle = sum_k coef[k] * z[i-1+k] + cst.  Every constraint
// of the open polytope is "some slot angle > 0", which the line search
// exploits directly.
struct SlotAffine {
    int i;  // tetrahedron index
    double coef[3];
    double cst;
};

std::vector<SlotAffine> slot_affines(const FareyPath& path) {
    std::vector<SlotAffine> slots;
    slots.reserve(3 * (path.N() - 1));
    for (int i = 1; i <= path.N() - 1; ++i) {
        char prev = path.word[i - 1], cur = path.word[i];
        SlotAffine straight{i, {0.5, -1.0, 0.5}, 0.0};
        SlotAffine straight_other{i, {-0.5, 0.0, -0.5}, kPi};
        SlotAffine turn{i, {0.5, -0.5, -0.5}, 0.0};
        SlotAffine turn_other{i, {-0.5, -0.5, 0.5}, kPi};
        if (prev == cur) {
            slots.push_back(straight);
            slots.push_back(straight_other);
        } else {
            slots.push_back(turn);
            slots.push_back(turn_other);
        }
        slots.push_back(SlotAffine{i, {0.0, 1.0, 0.0}, 0.0});
    }
    return slots;
}

template <class Real>
Real slot_value(const SlotAffine& s, const std::vector<Real>& z) {
    return Real(s.coef[0]) * z[s.i - 1] + Real(s.coef[1]) * z[s.i] +
           Real(s.coef[2]) * z[s.i + 1] + Real(s.cst);
}

template <class Real>
VolumeResult maximize_impl(const FareyPath& path, const BoundaryAngles& b,
                           const Config& cfg) {
    const int N = path.N();
    const int nfree = std::max(0, N - 2);
    std::vector<double> start = initial_point(path, b);
    std::vector<Real> z(start.begin(), start.end());
    const std::vector<SlotAffine> slots = slot_affines(path);

    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

    auto value = [&](const std::vector<Real>& zz) {
        Real v = 0;
        for (const auto& s : slots) v += lobachevsky(slot_value(s, zz));
        return v;
    };
    auto gradient = [&](const std::vector<Real>& zz) {
        Vec g = Vec::Zero(nfree);
        for (const auto& s : slots) {
            Real d = lobachevsky_deriv(slot_value(s, zz));
            for (int k = 0; k < 3; ++k) {
                int col = s.i - 1 + k;
                if (col >= 2 && col <= N - 1) g[col - 2] += Real(s.coef[k]) * d;
            }
        }
        return g;
    };

    VolumeResult out;
    if (nfree == 0) {
        out.z_star = start;
        out.value = double(value(z));
        out.grad_norm = 0;
        out.iterations = 0;
        return out;
    }

    Real v = value(z);
    int iter = 0;
    for (; iter < cfg.iteration_cap; ++iter) {
        Vec g = gradient(z);
        Real gnorm = g.template lpNorm<Eigen::Infinity>();
        if (double(gnorm) <= cfg.grad_tol) break;

        // Newton direction from the negated (positive definite) Hessian.
        Mat H = Mat::Zero(nfree, nfree);
        for (const auto& s : slots) {
            Real d2 = lobachevsky_deriv2(slot_value(s, z));
            for (int k = 0; k < 3; ++k) {
                int ck = s.i - 1 + k;
                if (ck < 2 || ck > N - 1) continue;
                for (int l = 0; l < 3; ++l) {
                    int cl = s.i - 1 + l;
                    if (cl < 2 || cl > N - 1) continue;
                    H(ck - 2, cl - 2) -= d2 * Real(s.coef[k]) * Real(s.coef[l]);
                }
            }
        }
        Eigen::LDLT<Mat> ldlt(H);
        Vec dir;
        bool newton_ok = (ldlt.info() == Eigen::Success);
        if (newton_ok) {
            dir = ldlt.solve(g);
            newton_ok = (g.dot(dir) > 0);
        }
        if (!newton_ok) dir = g;

        // Largest step keeping all slot angles positive, with 10% slack.
        Real smax = std::numeric_limits<Real>::infinity();
        for (const auto& s : slots) {
            Real dval = 0;
            for (int k = 0; k < 3; ++k) {
                int col = s.i - 1 + k;
                if (col >= 2 && col <= N - 1) dval += Real(s.coef[k]) * dir[col - 2];
            }
            if (dval < 0) smax = std::min(smax, -slot_value(s, z) / dval);
        }
        Real step = std::min(Real(1), Real(0.9) * smax);

        std::vector<Real> znew = z;
        Real vnew = v;
        bool accepted = false;
        if (newton_ok && double(gnorm) <= 1e-6) {
            // Quadratic basin: predicted value gains fall below the rounding
            // noise of the objective, so a backtracking test cannot decide.
            // The guarded Newton step is safe for a strictly concave smooth
            // objective and contracts the gradient quadratically.
            for (int j = 0; j < nfree; ++j) znew[j + 2] = z[j + 2] + step * dir[j];
            vnew = value(znew);
            accepted = true;
        } else {
            // Globalization phase: Armijo backtracking on the concave objective.
            Real slope = g.dot(dir);
            for (int bt = 0; bt < 60; ++bt) {
                for (int j = 0; j < nfree; ++j) znew[j + 2] = z[j + 2] + step * dir[j];
                vnew = value(znew);
                if (vnew >= v + Real(1e-4) * step * slope) {
                    accepted = true;
                    break;
                }
                step *= Real(0.5);
            }
        }
        if (!accepted || znew == z) break;  // resolution limit: check below
        z = znew;
        v = vnew;
    }

    Vec g = gradient(z);
    double gnorm = double(g.template lpNorm<Eigen::Infinity>());
    if (gnorm > cfg.grad_tol)
        throw convergence_error("volume maximization stalled at gradient norm " +
                                std::to_string(gnorm) + " after " +
                                std::to_string(iter) + " iterations");
    out.z_star.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out.z_star[k] = double(z[k]);
    out.value = double(v);
    out.grad_norm = gnorm;
    out.iterations = iter;
    return out;
}

}  // namespace

double tet_volume(const TetAngles& t) {
    return lobachevsky(t.x) + lobachevsky(t.y) + lobachevsky(t.z);
}

double total_volume(const FareyPath& path, const BoundaryAngles& b,
                    const std::vector<double>& z) {
    (void)b;
    double v = 0;
    for (const auto& s : slot_affines(path)) v += lobachevsky(slot_value(s, z));
    return v;
}

std::vector<double> volume_gradient(const FareyPath& path, const BoundaryAngles& b,
                                    const std::vector<double>& z) {
    (void)b;
    const int N = path.N();
    std::vector<double> g(std::max(0, N - 2), 0.0);
    for (const auto& s : slot_affines(path)) {
        double d = lobachevsky_deriv(slot_value(s, z));
        for (int k = 0; k < 3; ++k) {
            int col = s.i - 1 + k;
            if (col >= 2 && col <= N - 1) g[col - 2] += s.coef[k] * d;
        }
    }
    return g;
}

VolumeResult maximize(const FareyPath& path, const BoundaryAngles& b,
                      const Config& cfg) {
    if (cfg.precision == Precision::extended)
        return maximize_impl<long double>(path, b, cfg);
    return maximize_impl<double>(path, b, cfg);
}

Config config_from_env() {
    Config c;
    const char* e = std::getenv("DEHNCAN_PRECISION");
    if (!e || !*e) return c;
    std::string s(e);
    if (s == "double")
        c.precision = Precision::double_prec;
    else if (s == "extended")
        c.precision = Precision::extended;
    else
        throw parse_error("DEHNCAN_PRECISION must be 'double' or 'extended', got '" +
                          s + "'");
    return c;
}

}  // namespace dehncan
