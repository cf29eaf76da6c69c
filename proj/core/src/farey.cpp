#include "dehncan/farey.hpp"

#include <algorithm>
#include <stdexcept>

#include "dehncan/errors.hpp"

namespace dehncan {

Slope FareyTriangle::third(const Slope& a, const Slope& b) const {
    for (const Slope& s : v)
        if (!(s == a) && !(s == b)) return s;
    throw std::logic_error("FareyTriangle::third: edge not in triangle");
}

namespace {

// The Farey neighbour of edge {a, b} other than the known neighbour `known`:
// the two triangles sharing {a, b} have third vertices the mediant and the
// vector difference of a and b.
Slope other_neighbour(const Slope& a, const Slope& b, const Slope& known) {
    Slope med = mediant(a, b);
    if (!(med == known)) return med;
    return farey_difference(a, b);
}

char side_letter(const Slope& x, const Slope& r, const Slope& m) {
    return left_of_line(x, r, m) ? 'L' : 'R';
}

}  // namespace

FareyPath farey_path(const Slope& p_in, const Slope& q_in, const Slope& r,
                     const Slope& m, int min_length) {
    if (wedge(p_in, q_in) != 1 || wedge(p_in, r) != 1 || wedge(q_in, r) != 1)
        throw infeasible_error("seed (p,q,r) is not a Farey triangle: (" +
                               to_string(p_in) + "," + to_string(q_in) + "," +
                               to_string(r) + ")");
    if (m == p_in || m == q_in || m == r)
        throw infeasible_error("meridian " + to_string(m) +
                               " coincides with a seed vertex");
    if (!edge_separates(p_in, q_in, r, m))
        throw infeasible_error("edge pq must separate r from the meridian " +
                               to_string(m));

    FareyPath path;
    path.triangles.push_back(FareyTriangle{{p_in, q_in, r}});
    path.edges.push_back(FareyEdge{});  // index 0 padding

    // Walk the geodesic from r to m.  T_0 is always left across pq; after
    // that the exit edge of T_i is the unique edge (other than the entry
    // edge) separating its opposite vertex from m.
    FareyEdge entry{};
    bool have_entry = false;
    while (!path.triangles.back().contains(m)) {
        const FareyTriangle& T = path.triangles.back();
        FareyEdge exit{};
        if (!have_entry) {
            exit = FareyEdge{p_in, q_in};
        } else {
            int found = 0;
            for (int k = 0; k < 3; ++k) {
                Slope u = T.v[k], v = T.v[(k + 1) % 3];
                if (entry.contains(u) && entry.contains(v)) continue;  // entry edge
                Slope w = T.third(u, v);
                if (edge_separates(u, v, w, m)) {
                    exit = FareyEdge{u, v};
                    ++found;
                }
            }
            if (found != 1)
                throw std::logic_error("farey_path: exit edge not unique");
        }
        Slope w = T.third(exit.a, exit.b);
        Slope fresh = other_neighbour(exit.a, exit.b, w);
        path.edges.push_back(exit);
        path.triangles.push_back(FareyTriangle{{exit.a, exit.b, fresh}});
        entry = exit;
        have_entry = true;
    }

    const int N = path.N();
    if (N < min_length)
        throw infeasible_error("path from " + to_string(r) + " to " + to_string(m) +
                               " has length " + std::to_string(N) + " < " +
                               std::to_string(min_length) +
                               " (meridian too close to the seed triangle)");

    // Per-interface combinatorics.
    path.xi.assign(N + 1, Slope{});
    path.eta.assign(N + 1, Slope{});
    path.rho.assign(N + 1, Slope{});
    path.nu.assign(N + 1, Slope{});
    for (int i = 1; i <= N; ++i) {
        const FareyEdge& e = path.edges[i];
        if (left_of_line(e.a, r, m)) {
            path.eta[i] = e.a;
            path.xi[i] = e.b;
        } else {
            path.eta[i] = e.b;
            path.xi[i] = e.a;
        }
        path.rho[i] = path.triangles[i - 1].third(e.a, e.b);
        path.nu[i] = path.triangles[i].third(e.a, e.b);
    }
    path.pivot.assign(N, Slope{});
    for (int i = 1; i + 1 <= N; ++i) {
        const FareyEdge& e = path.edges[i];
        const FareyEdge& f = path.edges[i + 1];
        if (f.contains(e.a))
            path.pivot[i] = e.a;
        else if (f.contains(e.b))
            path.pivot[i] = e.b;
        else
            throw std::logic_error("farey_path: consecutive edges share no vertex");
    }

    // Letters; the artificial word[0] copies word[1].
    if (N >= 2) {
        std::string w(N, '?');
        for (int i = 1; i <= N - 1; ++i) w[i] = side_letter(path.pivot[i], r, m);
        w[0] = w[1];
        path.word = w;
    } else {
        path.word.clear();
    }

    // Swap p and q if needed so the geodesic enters T_0 across pr, i.e. the
    // artificial letter (the side of p) matches word[1].
    path.r = r;
    path.m = m;
    path.p = p_in;
    path.q = q_in;
    path.pq_swapped = false;
    if (N >= 2 && side_letter(p_in, r, m) != path.word[1]) {
        std::swap(path.p, path.q);
        path.pq_swapped = true;
    }

    path.hinge.assign(std::max(N, 1), false);
    for (int i = 1; i <= N - 1; ++i) path.hinge[i] = (path.word[i - 1] != path.word[i]);

    return path;
}

std::vector<int> word_syllables(const FareyPath& path) {
    std::vector<int> syl;
    const std::string& w = path.word;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i == 0 || w[i] != w[i - 1])
            syl.push_back(1);
        else
            ++syl.back();
    }
    return syl;
}

std::vector<std::int64_t> continued_fraction(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num <= 0)
        throw infeasible_error("continued_fraction requires positive num/den");
    std::vector<std::int64_t> cf;
    while (den != 0) {
        cf.push_back(num / den);
        std::int64_t rem = num % den;
        num = den;
        den = rem;
    }
    return cf;
}

std::vector<int> cf_syllables(const Slope& m) {
    if (is_infinity(m) || m.num <= 0)
        throw infeasible_error("cf_syllables needs a finite meridian > 0");
    if (m.num == m.den)
        throw infeasible_error("meridian 1 is adjacent to the normalized seed");
    // 0 < m < 1 mirrors 1/m (the word reverses chirality, syllables agree),
    // which is the same as dropping the leading zero of the expansion.
    std::vector<std::int64_t> cf = (m.num > m.den) ? continued_fraction(m.num, m.den)
                                                   : continued_fraction(m.den, m.num);
    std::vector<int> syl(cf.begin(), cf.end());
    syl.front() += 1;  // the artificial first letter extends the first run
    syl.back() -= 1;   // the path stops one turn short in the last fan
    if (syl.back() == 0) syl.pop_back();  // only for [1]-style single terms
    return syl;
}

}  // namespace dehncan
