// Test-only oracles, deliberately independent of the library's hull and cone
// code paths. Membership questions are answered by exact rational linear
// programming; 2D containment additionally has an orientation-walk check.
#ifndef LATMOVE_TESTS_ORACLE_HPP
#define LATMOVE_TESTS_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "latmove/kernel.hpp"
#include "latmove/numeric.hpp"

namespace oracle {

using latmove::Int;
using latmove::Rat;
using latmove::Vec;

// Phase-1 simplex with Bland's rule over exact rationals: decides whether
// the system {A x = b, x >= 0} is feasible.
inline bool lp_feasible_eq(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            for (auto& v : a[i]) v = -v;
            b[i] = -b[i];
        }
    }
    // Tableau with one artificial variable per row; minimize their sum.
    const std::size_t cols = n + m;
    std::vector<std::vector<Rat>> t(m, std::vector<Rat>(cols + 1, Rat(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1;
        t[i][cols] = b[i];
        basis[i] = n + i;
    }
    // Objective row (sum of artificials) reduced over the current basis;
    // artificials never re-enter, so only the real columns are tracked.
    std::vector<Rat> z(n + 1, Rat(0));
    for (std::size_t j = 0; j <= n; ++j) {
        Rat s = 0;
        std::size_t col = (j == n) ? cols : j;
        for (std::size_t i = 0; i < m; ++i) s += t[i][col];
        z[j] = s;
    }
    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < n; ++j) {
            if (z[j] > 0) { enter = j; break; }  // Bland: smallest index
        }
        if (enter == cols) break;
        std::size_t leave = m;
        Rat best = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rat ratio = t[i][cols] / t[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break;  // unbounded cannot happen in phase 1
        Rat pv = t[leave][enter];
        for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rat f = t[i][enter];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
        }
        Rat f = z[enter];
        for (std::size_t j = 0; j < n; ++j) z[j] -= f * t[leave][j];
        z[n] -= f * t[leave][cols];
        basis[leave] = enter;
    }
    return z[n] == 0;
}

// Is p a convex combination of pts? Exact, no full-dimensionality assumed.
inline bool point_in_hull_lp(const Vec& p, const std::vector<Vec>& pts) {
    if (pts.empty()) return false;
    const std::size_t d = p.size();
    std::vector<std::vector<Rat>> a(d + 1, std::vector<Rat>(pts.size()));
    std::vector<Rat> b(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) a[i][j] = Rat(pts[j][i]);
        b[i] = Rat(p[i]);
    }
    for (std::size_t j = 0; j < pts.size(); ++j) a[d][j] = 1;
    b[d] = 1;
    return lp_feasible_eq(std::move(a), std::move(b));
}

// Extreme points by the definition: u is a vertex iff it is not in the hull
// of the remaining points.
inline std::vector<Vec> extreme_points_lp(const std::vector<Vec>& pts_in) {
    std::vector<Vec> pts = pts_in;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Vec> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Vec> rest;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i) rest.push_back(pts[j]);
        if (!point_in_hull_lp(pts[i], rest)) out.push_back(pts[i]);
    }
    return out;
}

// 2D containment by walking the boundary cycle and checking orientation
// signs; independent of the facet machinery.
inline bool contains_2d_orientation(const latmove::Polytope& p, const Vec& x) {
    std::vector<Vec> cyc = latmove::ccw_cycle(p);
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& a = cyc[i];
        const Vec& b = cyc[(i + 1) % n];
        Int cr = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        if (cr < 0) return false;
    }
    return true;
}

// Definitional insertability: x is outside and the hull of V u {x} keeps
// every old vertex. Decided entirely by LP membership.
inline bool insertable_lp(const latmove::Polytope& p, const Vec& x) {
    std::vector<Vec> all = p.vertices();
    if (std::find(all.begin(), all.end(), x) != all.end()) return false;
    if (point_in_hull_lp(x, all)) return false;
    all.push_back(x);
    std::vector<Vec> ext = extreme_points_lp(all);
    return ext.size() == all.size();
}

// Tiny deterministic generator for property-style tests.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

inline Vec random_point(Rng& rng, int d, long long lo, long long hi) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = Int(rng.range(lo, hi));
    return v;
}

// Random full-dimensional lattice polytope with small coordinates.
inline latmove::Polytope random_polytope(Rng& rng, int d, int npts, long long coord_max) {
    while (true) {
        std::vector<Vec> pts;
        for (int i = 0; i < npts; ++i) pts.push_back(random_point(rng, d, 0, coord_max));
        if (latmove::affine_dimension(pts) == d) return latmove::convex_hull(pts, d);
    }
}

}  // namespace oracle

#endif
