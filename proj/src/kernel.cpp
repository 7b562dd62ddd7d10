#include "latmove/kernel.hpp"

#include <algorithm>
#include <set>

namespace latmove {

namespace {

void check_dim_range(int d) {
    if (d < kMinDim || d > kMaxDim)
        fail(ErrorCode::InvalidInput, "ambient dimension " + std::to_string(d) + " outside supported range");
}

Int cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain; strictly convex turns only, so collinear interior points
// are dropped and the output is the exact vertex cycle, counter-clockwise.
std::vector<Vec> hull_chain_2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    std::vector<Vec> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

std::uint64_t binomial_guard(std::size_t n, int d) {
    // Number of candidate facet supports; inputs here are tiny by contract.
    std::uint64_t c = 1;
    for (int i = 0; i < d; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > 20'000'000ULL) return c;
    }
    return c;
}

}  // namespace

bool AffineFlat::contains(const Vec& x) const {
    std::vector<Vec> rows = directions;
    rows.push_back(sub(x, basepoint));
    return linear_rank(rows) == dim;
}

AffineFlat affine_flat_of(const std::vector<Vec>& pts) {
    if (pts.empty()) fail(ErrorCode::InvalidInput, "affine_flat_of: no points");
    AffineFlat f;
    f.basepoint = pts[0];
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec d = sub(pts[i], pts[0]);
        std::vector<Vec> rows = f.directions;
        rows.push_back(d);
        if (linear_rank(rows) > f.dim) {
            f.directions.push_back(std::move(d));
            ++f.dim;
        }
    }
    return f;
}

int affine_dimension(const std::vector<Vec>& points) {
    if (points.empty()) return -1;
    require_same_dim(points);
    return affine_rank(points);
}

bool Polytope::has_vertex(const Vec& v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Polytope::in_box(const Int& k) const {
    for (const Vec& v : vertices_)
        for (const Int& c : v)
            if (c < 0 || c > k) return false;
    return true;
}

Polytope Polytope::from_canonical_parts(int d, std::vector<Vec> vertices,
                                        std::vector<HalfSpace> facets) {
    Polytope p;
    p.d_ = d;
    p.vertices_ = std::move(vertices);
    p.facets_ = std::move(facets);
    std::sort(p.facets_.begin(), p.facets_.end());
    return p;
}

Polytope convex_hull(std::vector<Vec> points, int d) {
    check_dim_range(d);
    if (points.empty()) fail(ErrorCode::InvalidInput, "convex_hull: no points");
    require_same_dim(points);
    if (static_cast<int>(points[0].size()) != d)
        fail(ErrorCode::InvalidInput, "convex_hull: point length does not match dimension");

    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (affine_rank(points) != d)
        fail(ErrorCode::NotFullDimensional, "input has affine dimension below the ambient dimension");

    Polytope p;
    p.d_ = d;

    if (d == 1) {
        p.vertices_ = {points.front(), points.back()};
        p.facets_.push_back({Vec{Int(-1)}, -points.front()[0]});
        p.facets_.push_back({Vec{Int(1)}, points.back()[0]});
        std::sort(p.facets_.begin(), p.facets_.end());
        return p;
    }

    if (d == 2) {
        std::vector<Vec> cyc = hull_chain_2d(points);
        const std::size_t n = cyc.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& a = cyc[i];
            const Vec& b = cyc[(i + 1) % n];
            // Outward normal of a ccw traversal.
            Vec nrm{b[1] - a[1], a[0] - b[0]};
            nrm = make_primitive(std::move(nrm));
            p.facets_.push_back({nrm, dot(nrm, a)});
        }
        p.vertices_ = std::move(cyc);
        std::sort(p.vertices_.begin(), p.vertices_.end());
        std::sort(p.facets_.begin(), p.facets_.end());
        return p;
    }

    // General dimension: every facet hyperplane is spanned by d affinely
    // independent input points, so scanning all d-subsets finds them all.
    const std::size_t n = points.size();
    if (binomial_guard(n, d) > 20'000'000ULL)
        fail(ErrorCode::TooLarge, "convex_hull: too many facet candidates");

    std::set<std::pair<Vec, Int>> facet_set;
    std::vector<std::size_t> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::vector<Vec> subset(d);
    while (true) {
        for (int i = 0; i < d; ++i) subset[i] = points[idx[i]];
        if (auto hp = hyperplane_through(subset)) {
            auto [a, b] = *hp;
            bool above = false, below = false;
            for (const Vec& q : points) {
                Int s = dot(a, q) - b;
                if (s > 0) above = true;
                else if (s < 0) below = true;
                if (above && below) break;
            }
            if (!(above && below)) {
                if (above) {
                    a = neg(a);
                    b = -b;
                }
                facet_set.emplace(std::move(a), std::move(b));
            }
        }
        // next combination
        int pos = d - 1;
        while (pos >= 0 && idx[pos] == n - d + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
    }

    for (auto& [a, b] : facet_set) p.facets_.push_back({a, b});

    // A point is extreme exactly when its tight facet normals span R^d.
    for (const Vec& q : points) {
        std::vector<Vec> tight;
        for (const HalfSpace& f : p.facets_)
            if (f.tight_at(q)) tight.push_back(f.normal);
        if (static_cast<int>(tight.size()) >= d && linear_rank(tight) == d)
            p.vertices_.push_back(q);
    }
    std::sort(p.vertices_.begin(), p.vertices_.end());
    std::sort(p.facets_.begin(), p.facets_.end());
    return p;
}

bool contains_point(const Polytope& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.dim_ambient())
        fail(ErrorCode::InvalidInput, "contains_point: dimension mismatch");
    for (const HalfSpace& f : p.facets())
        if (!f.contains(x)) return false;
    return true;
}

std::string canonical_key(const Polytope& p) {
    std::string s = std::to_string(p.dim_ambient());
    s += '|';
    const auto& vs = p.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ';';
        s += vec_to_string(vs[i]);
    }
    return s;
}

std::vector<Vec> ccw_cycle(const Polytope& p) {
    if (p.dim_ambient() != 2) fail(ErrorCode::InvalidInput, "ccw_cycle: needs a polygon");
    std::vector<Vec> cyc = hull_chain_2d(p.vertices());
    // hull_chain_2d starts at the lex-smallest point already
    return cyc;
}

}  // namespace latmove
