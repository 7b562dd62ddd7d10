#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/constructions.hpp"
#include "oracle.hpp"

using namespace latmove;

namespace {

Vec v2(long long a, long long b) { return Vec{Int(a), Int(b)}; }

// Direct definitional check of a flatness witness: (a,b) consecutive and
// every other vertex weakly (or strictly) between along c.
bool witness_valid(const Polytope& p, const FlatWitness& w, bool strict) {
    std::vector<Vec> cyc = ccw_cycle(p);
    const std::size_t n = cyc.size();
    bool adjacent = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& u = cyc[i];
        const Vec& v = cyc[(i + 1) % n];
        if ((u == w.a && v == w.b) || (u == w.b && v == w.a)) adjacent = true;
    }
    if (!adjacent || is_zero(w.c)) return false;
    for (const Vec& v : cyc) {
        if (v == w.a || v == w.b) continue;
        Int lo = dot(w.c, w.a), mid = dot(w.c, v), hi = dot(w.c, w.b);
        if (strict ? !(lo < mid && mid < hi) : !(lo <= mid && mid <= hi)) return false;
    }
    return true;
}

// Exhaustive small-coefficient scan used as an independent flatness oracle.
bool flat_by_scan(const Polytope& p, bool strict, long long cmax) {
    std::vector<Vec> cyc = ccw_cycle(p);
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (int ori = 0; ori < 2; ++ori) {
            Vec a = cyc[i], b = cyc[(i + 1) % n];
            if (ori) std::swap(a, b);
            for (long long c0 = -cmax; c0 <= cmax; ++c0)
                for (long long c1 = -cmax; c1 <= cmax; ++c1) {
                    if (c0 == 0 && c1 == 0) continue;
                    FlatWitness w{v2(c0, c1), a, b};
                    if (witness_valid(p, w, strict)) return true;
                }
        }
    }
    return false;
}

std::vector<Polytope> all_polygons_in_box(int k, int nverts) {
    // every subset of the grid whose hull keeps all its points
    std::vector<Vec> grid;
    for (long long x = 0; x <= k; ++x)
        for (long long y = 0; y <= k; ++y) grid.push_back(v2(x, y));
    std::vector<Polytope> out;
    const std::size_t n = grid.size();
    std::vector<int> idx(nverts);
    std::vector<Vec> pts(nverts);
    // combinations
    for (int i = 0; i < nverts; ++i) idx[i] = i;
    while (true) {
        for (int i = 0; i < nverts; ++i) pts[i] = grid[idx[i]];
        if (affine_dimension(pts) == 2) {
            Polytope p = convex_hull(pts, 2);
            if (static_cast<int>(p.vertex_count()) == nverts) out.push_back(std::move(p));
        }
        int pos = nverts - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(n) - nverts + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < nverts; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("corner simplices") {
    Polytope c2 = corner_simplex(2, 1);
    CHECK(c2.vertices() == std::vector<Vec>{v2(0, 0), v2(0, 1), v2(1, 0)});
    Polytope c3 = corner_simplex(3, 2);
    CHECK(c3.vertex_count() == 4);
    for (int d = 2; d <= 6; ++d) {
        Polytope c = corner_simplex(d, 1);
        CHECK(c.vertex_count() == static_cast<std::size_t>(d) + 1);
        CHECK(deletable_vertices(c).empty());
    }
    CHECK_THROWS_AS(corner_simplex(1, 1), Error);
    CHECK_THROWS_AS(corner_simplex(9, 1), Error);
}

TEST_CASE("staircase polygons") {
    CHECK(pn_polygon(4) == convex_hull({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 2));
    Polytope p6 = pn_polygon(6);
    CHECK(p6 == convex_hull({v2(0, 0), v2(1, 0), v2(2, 1), v2(2, 2), v2(1, 2), v2(0, 1)}, 2));

    // odd case: hull of the next even polygon and the point above its top edge
    Polytope p7 = pn_polygon(7);
    CHECK(p7.vertex_count() == 7);
    CHECK(p7.has_vertex(v2(3, 5)));
    std::vector<Vec> pts8 = pn_polygon(8).vertices();
    pts8.push_back(v2(3, 5));
    CHECK(p7 == convex_hull(pts8, 2));

    CHECK_THROWS_AS(pn_polygon(5), Error);
    CHECK_THROWS_AS(pn_polygon(3), Error);
}

TEST_CASE("staircase polygons admit no insertion anywhere in the plane") {
    for (int n : {4, 6, 7, 8, 9, 10, 12, 15}) {
        Polytope p = pn_polygon(n);
        CHECK(static_cast<int>(p.vertex_count()) == n);
        auto cells = insertable_cells_2d(p);
        for (const auto& cell : cells) {
            if (n >= 6) CHECK(cell.bounded);
            CHECK(!cell_has_lattice_point(cell));
        }
    }
}

TEST_CASE("empty simplex families") {
    Polytope e2 = empty_simplex(2);
    CHECK(e2 == convex_hull({Vec{Int(2), Int(0), Int(0)}, Vec{Int(1), Int(2), Int(0)},
                             Vec{Int(0), Int(1), Int(2)}, Vec{Int(0), Int(0), Int(1)}}, 3));
    // brute force: the only lattice points are the vertices
    int inside2 = 0;
    for (long long x = 0; x <= 2; ++x)
        for (long long y = 0; y <= 2; ++y)
            for (long long z = 0; z <= 2; ++z)
                if (contains_point(e2, Vec{Int(x), Int(y), Int(z)})) ++inside2;
    CHECK(inside2 == 4);

    Polytope e3 = empty_simplex(3);
    CHECK(e3.vertex_count() == 5);
    CHECK(e3.in_box(3));
    int inside3 = 0;
    for (long long x = 0; x <= 3; ++x)
        for (long long y = 0; y <= 3; ++y)
            for (long long z = 0; z <= 3; ++z)
                for (long long t = 0; t <= 3; ++t)
                    if (contains_point(e3, Vec{Int(x), Int(y), Int(z), Int(t)})) ++inside3;
    CHECK(inside3 == 5);

    CHECK_THROWS_AS(empty_simplex(1), Error);
}

TEST_CASE("cartesian products") {
    Polytope seg = convex_hull({Vec{Int(0)}, Vec{Int(1)}}, 1);
    Polytope sq = cartesian_product(seg, seg);
    CHECK(sq == convex_hull({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 2));

    // product facets equal hull facets on a full recomputation
    Polytope tri = corner_simplex(2, 1);
    Polytope prism = cartesian_product(tri, seg);
    Polytope prism_hulled = convex_hull(prism.vertices(), 3);
    CHECK(prism == prism_hulled);
    CHECK(prism.facets() == prism_hulled.facets());

    Polytope p6 = pn_polygon(6);
    Polytope big = cartesian_product(p6, sq);
    CHECK(big.dim_ambient() == 4);
    CHECK(big.vertex_count() == 24);
}

TEST_CASE("product cones split by factor") {
    Polytope seg = convex_hull({Vec{Int(0)}, Vec{Int(1)}}, 1);
    Polytope sq = cartesian_product(seg, seg);
    Cone c = vertex_cone(sq, v2(0, 0));
    Cone cu = vertex_cone(seg, Vec{Int(0)});
    // cone of (0,0) in the product is exactly C0 x C0
    for (long long x = -2; x <= 2; ++x)
        for (long long y = -2; y <= 2; ++y)
            CHECK(c.contains(v2(x, y)) ==
                  (cu.contains(Vec{Int(x)}) && cu.contains(Vec{Int(y)})));

    oracle::Rng rng(41);
    for (int iter = 0; iter < 10; ++iter) {
        Polytope p = oracle::random_polytope(rng, 2, 5, 3);
        Polytope q = oracle::random_polytope(rng, 2, 5, 3);
        Polytope pq = cartesian_product(p, q);
        const Vec& u = p.vertices()[rng.below(p.vertex_count())];
        const Vec& v = q.vertices()[rng.below(q.vertex_count())];
        Vec uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        Cone cone_pq = vertex_cone(pq, uv);
        Cone cone_p = vertex_cone(p, u);
        Cone cone_q = vertex_cone(q, v);
        for (int t = 0; t < 200; ++t) {
            Vec x = oracle::random_point(rng, 2, -3, 6);
            Vec y = oracle::random_point(rng, 2, -3, 6);
            Vec xy = x;
            xy.insert(xy.end(), y.begin(), y.end());
            CHECK(cone_pq.contains(xy) == (cone_p.contains(x) && cone_q.contains(y)));
        }
    }
}

TEST_CASE("saturating polytope basics") {
    Polytope s = saturating_polytope(6, 2);
    CHECK(s.dim_ambient() == 6);
    CHECK(s.vertex_count() == 16);
    CHECK(s.in_box(2));
    CHECK(deletable_vertices(s).size() == 16);
    CHECK_THROWS_AS(saturating_polytope(3, 2), Error);
    CHECK_THROWS_AS(saturating_polytope(7, 2), Error);
}

TEST_CASE("simplex frames satisfy the slab relations") {
    oracle::Rng rng(43);
    for (int iter = 0; iter < 30; ++iter) {
        int d = 2 + static_cast<int>(rng.below(2));
        Polytope s = [&] {
            while (true) {
                std::vector<Vec> pts;
                for (int i = 0; i <= d; ++i) pts.push_back(oracle::random_point(rng, d, 0, 3));
                if (affine_dimension(pts) == d) return convex_hull(pts, d);
            }
        }();
        for (const auto& fr : simplex_frames(s, 3)) {
            CHECK(fr.dim_f() + static_cast<int>(fr.fstar_vertices.size()) - 1 == d - 1);
            CHECK(fr.epsilon < fr.epsilon_star);
            CHECK(fr.delta <= fr.epsilon);
            CHECK(dot(fr.c, fr.g_base) == fr.delta);
        }
    }
}

TEST_CASE("simplex insertion search") {
    CHECK(find_simplex_insertion(corner_simplex(2, 1), 1) == v2(1, 1));

    Polytope c3 = corner_simplex(3, 1);
    Vec x3 = find_simplex_insertion(c3, 1);
    CHECK(insertable_points(c3, 1).count(x3) == 1);

    Polytope e2 = empty_simplex(2);
    Vec xe = find_simplex_insertion(e2, 2);
    CHECK(!e2.has_vertex(xe));
    CHECK(insertable_points(e2, 2).count(xe) == 1);
}

TEST_CASE("insertion exists for every triangle in small boxes") {
    for (int k = 1; k <= 3; ++k) {
        auto triangles = all_polygons_in_box(k, 3);
        for (const Polytope& t : triangles) {
            Vec x = find_simplex_insertion(t, k);
            auto pts = insertable_points(t, k);
            CHECK(!pts.empty());
            CHECK(pts.count(x) == 1);
        }
    }
}

TEST_CASE("simplex-to-corner paths in the plane") {
    Polytope corner = corner_simplex(2, 2);
    CHECK(simplex_to_corner_path(corner, 2).moves.empty());

    Polytope t = convex_hull({v2(0, 1), v2(2, 0), v2(1, 2)}, 2);
    MoveTrace tr = simplex_to_corner_path(t, 2);
    Polytope end = replay_trace(tr, Int(2), std::make_pair(3, 4));
    CHECK(end == corner);

    // exhaustive over the k=2 census
    for (const Polytope& tri : all_polygons_in_box(2, 3)) {
        MoveTrace trace = simplex_to_corner_path(tri, 2);
        CHECK(replay_trace(trace, Int(2), std::make_pair(3, 4)) == corner);
    }
}

TEST_CASE("simplex-to-corner paths in space") {
    // all tetrahedra on the unit cube
    std::vector<Vec> cube;
    for (long long x = 0; x <= 1; ++x)
        for (long long y = 0; y <= 1; ++y)
            for (long long z = 0; z <= 1; ++z) cube.push_back(Vec{Int(x), Int(y), Int(z)});
    Polytope goal = corner_simplex(3, 1);
    int count = 0;
    for (std::size_t a = 0; a < cube.size(); ++a)
        for (std::size_t b = a + 1; b < cube.size(); ++b)
            for (std::size_t c = a + 2; c < cube.size(); ++c)
                for (std::size_t d = c + 1; d < cube.size(); ++d) {
                    if (b >= c) continue;
                    std::vector<Vec> pts{cube[a], cube[b], cube[c], cube[d]};
                    if (affine_dimension(pts) != 3) continue;
                    MoveTrace tr = simplex_to_corner_path(convex_hull(pts, 3), 1);
                    CHECK(replay_trace(tr, Int(1), std::make_pair(4, 5)) == goal);
                    ++count;
                }
    CHECK(count == 58);  // full-dimensional 4-subsets of the cube vertices
}

TEST_CASE("convex position connection") {
    Polytope a = corner_simplex(2, 1);
    CHECK(connect_convex_position(a, a).moves.empty());

    Polytope b = convex_hull({v2(1, 0), v2(0, 1), v2(1, 1)}, 2);
    MoveTrace tr = connect_convex_position(a, b);
    CHECK(tr.moves.size() <= 8);
    CHECK(replay_trace(tr, std::nullopt, std::make_pair(3, 4)) == b);

    Polytope far_p = convex_hull({v2(0, 0), v2(1, 0), v2(3, 1)}, 2);
    Polytope far_q = convex_hull({v2(6, 3), v2(7, 5), v2(7, 6)}, 2);
    std::vector<Vec> joint = far_p.vertices();
    for (const Vec& v : far_q.vertices()) joint.push_back(v);
    if (convex_hull(joint, 2).vertex_count() == 6) {
        MoveTrace tr2 = connect_convex_position(far_p, far_q);
        CHECK(tr2.moves.size() <= 8);
        CHECK(replay_trace(tr2, std::nullopt, std::make_pair(3, 4)) == far_q);
    }

    // nested triangles are not jointly in convex position
    Polytope outer = convex_hull({v2(0, 0), v2(3, 0), v2(0, 3)}, 2);
    Polytope inner = convex_hull({v2(1, 1), v2(2, 1), v2(1, 2)}, 2);
    CHECK_THROWS_AS(connect_convex_position(outer, inner), Error);
}

TEST_CASE("oblique polygons") {
    Polytope t = convex_hull({v2(0, 0), v2(3, 3), v2(1, 2)}, 2);
    auto w = is_oblique(t);
    REQUIRE(w.has_value());
    CHECK(w->first == v2(0, 0));
    CHECK(w->second == v2(3, 3));

    CHECK(!is_oblique(pn_polygon(4)));
    CHECK(!is_oblique(pn_polygon(6)));
}

TEST_CASE("flat polygons and their witnesses") {
    Polytope pent = convex_hull({v2(0, 0), v2(1, 0), v2(2, 1), v2(2, 2), v2(1, 3)}, 2);
    auto w = is_flat(pent, false);
    REQUIRE(w.has_value());
    CHECK(w->c == v2(0, 1));
    CHECK(w->a == v2(0, 0));
    CHECK(w->b == v2(1, 3));
    CHECK(witness_valid(pent, *w, false));

    // the square is flat but not strongly flat
    Polytope sq = pn_polygon(4);
    auto wsq = is_flat(sq, false);
    REQUIRE(wsq.has_value());
    CHECK(witness_valid(sq, *wsq, false));
    CHECK(!is_flat(sq, true));

    // the staircase hexagon is not flat at all
    CHECK(!is_flat(pn_polygon(6), false));
    CHECK(!flat_by_scan(pn_polygon(6), false, 6));

    // every oblique polygon is strongly flat
    Polytope t = convex_hull({v2(0, 0), v2(3, 3), v2(1, 2)}, 2);
    REQUIRE(is_oblique(t));
    auto st = is_flat(t, true);
    REQUIRE(st.has_value());
    CHECK(witness_valid(t, *st, true));
}

TEST_CASE("flatness agrees with a bounded-coefficient scan") {
    oracle::Rng rng(47);
    int found_flat = 0;
    for (int iter = 0; iter < 60; ++iter) {
        Polytope p = oracle::random_polytope(rng, 2, 3 + static_cast<int>(rng.below(5)), 4);
        for (bool strict : {false, true}) {
            auto w = is_flat(p, strict);
            if (w) {
                CHECK(witness_valid(p, *w, strict));
                ++found_flat;
            } else {
                CHECK(!flat_by_scan(p, strict, 5));
            }
        }
    }
    CHECK(found_flat > 0);
}

TEST_CASE("pentagon flattening") {
    // flat pentagon: empty trace
    Polytope flat = convex_hull({v2(0, 0), v2(1, 0), v2(2, 1), v2(2, 2), v2(1, 3)}, 2);
    CHECK(flatten_pentagon(flat).moves.empty());

    int nonflat = 0;
    for (const Polytope& pent : all_polygons_in_box(3, 5)) {
        if (is_flat(pent, false)) continue;
        ++nonflat;
        MoveTrace tr = flatten_pentagon(pent);
        CHECK(tr.moves.size() == 2);
        Polytope out = replay_trace(tr, std::nullopt, std::make_pair(5, 6));
        CHECK(out.vertex_count() == 5);
        CHECK(is_flat(out, false));
    }
    CHECK(nonflat > 0);

    CHECK_THROWS_AS(flatten_pentagon(pn_polygon(6)), Error);
}

TEST_CASE("making flat polygons strongly flat") {
    int fixed = 0;
    for (const Polytope& pent : all_polygons_in_box(3, 5)) {
        auto w = is_flat(pent, false);
        if (!w || is_flat(pent, true)) continue;
        ++fixed;
        MoveTrace tr = make_strongly_flat(pent);
        CHECK(tr.moves.size() <= 8);
        CHECK(tr.moves.size() % 2 == 0);
        Polytope out = replay_trace(tr, std::nullopt, std::make_pair(5, 6));
        CHECK(out.vertex_count() == 5);
        CHECK(is_flat(out, true));
    }
    CHECK(fixed > 0);

    // already strongly flat: empty trace
    Polytope t = convex_hull({v2(0, 0), v2(3, 3), v2(1, 2)}, 2);
    Polytope pent5 = convex_hull({v2(0, 0), v2(2, 1), v2(3, 3), v2(2, 4), v2(1, 4)}, 2);
    if (is_flat(pent5, true)) CHECK(make_strongly_flat(pent5).moves.empty());
    CHECK(make_strongly_flat(t).moves.empty());
    CHECK_THROWS_AS(make_strongly_flat(pn_polygon(6)), Error);
}

TEST_CASE("shearing strongly flat pentagons oblique") {
    int sheared = 0;
    for (const Polytope& pent : all_polygons_in_box(3, 5)) {
        if (!is_flat(pent, true)) continue;
        if (++sheared > 120) break;
        ShearParams params = shear_params_of(pent);
        CHECK(dot(params.c, params.u) == 0);
        CHECK(params.u[0] != 0);
        CHECK(params.u[1] != 0);
        for (const Rat& phi : params.phi) {
            Rat scaled = Rat(params.multiplier) * phi;
            CHECK(boost::multiprecision::denominator(scaled) == 1);
        }
        MoveTrace tr = shear_to_oblique(pent);
        Polytope out = replay_trace(tr, std::nullopt, std::make_pair(5, 6));
        CHECK(out.vertex_count() == 5);
        CHECK(is_oblique(out).has_value());
    }
    CHECK(sheared > 0);
}
