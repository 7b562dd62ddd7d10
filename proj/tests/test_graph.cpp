#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/constructions.hpp"
#include "latmove/graph.hpp"
#include "oracle.hpp"

using namespace latmove;

namespace {

Vec v2(long long a, long long b) { return Vec{Int(a), Int(b)}; }

// Independent census route: subsets of the box points kept when they equal
// the vertex set of their own hull, via the general hull code path.
std::vector<std::string> census_by_hull(int d, long long k) {
    std::vector<Vec> grid;
    if (d == 2) {
        for (long long x = 0; x <= k; ++x)
            for (long long y = 0; y <= k; ++y) grid.push_back(v2(x, y));
    } else {
        for (long long x = 0; x <= k; ++x)
            for (long long y = 0; y <= k; ++y)
                for (long long z = 0; z <= k; ++z) grid.push_back(Vec{Int(x), Int(y), Int(z)});
    }
    std::sort(grid.begin(), grid.end());
    std::vector<std::string> keys;
    for (std::uint32_t mask = 1; mask < (1u << grid.size()); ++mask) {
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (mask >> i & 1) pts.push_back(grid[i]);
        if (static_cast<int>(pts.size()) < d + 1) continue;
        if (affine_dimension(pts) != d) continue;
        Polytope p = convex_hull(pts, d);
        if (p.vertices() == pts) keys.push_back(canonical_key(p));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

// Adjacency recomputed through the move engine only.
MoveGraph graph_by_move_engine(const std::vector<Polytope>& nodes, long long k,
                               const VertexFilter& filter) {
    std::map<std::string, std::vector<Vec>> data;
    for (const Polytope& p : nodes) data.emplace(canonical_key(p), p.vertices());
    MoveGraph g(nodes[0].dim_ambient(), Int(k), filter);
    for (const auto& [key, vs] : data) g.add_node(key, vs);
    for (const Polytope& p : nodes) {
        std::int64_t a = g.index_of(canonical_key(p));
        for (const auto& [mv, q] : neighbors_in_box(p, Int(k), filter)) {
            std::int64_t b = g.index_of(canonical_key(q));
            if (b >= 0 && a < b) g.add_edge(a, b);
        }
    }
    g.sort_adjacency();
    return g;
}

}  // namespace

TEST_CASE("census of the unit box in the plane") {
    auto keys = enumerate_keys(2, 1);
    REQUIRE(keys.size() == 5);
    CHECK(keys[0] == "2|0,0;0,1;1,0");
    CHECK(keys[4] == "2|0,1;1,0;1,1");
    CHECK(enumerate_keys(2, 1, VertexFilter{std::set<int>{3}}).size() == 4);
    CHECK(enumerate_keys(2, 1, VertexFilter{std::set<int>{4}}).size() == 1);
    CHECK_THROWS_AS(enumerate_keys(2, 4), Error);  // 25 points over the census budget
}

TEST_CASE("census agrees with the hull-based route") {
    CHECK(enumerate_keys(2, 1) == census_by_hull(2, 1));
    CHECK(enumerate_keys(2, 2) == census_by_hull(2, 2));
    CHECK(enumerate_keys(3, 1) == census_by_hull(3, 1));
}

TEST_CASE("unit-box graph is the star around the square") {
    auto nodes = enumerate_polytopes(2, 1);
    MoveGraph g = build_graph(nodes, 1);
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 4);
    std::string square = "2|0,0;0,1;1,0;1,1";
    std::int64_t si = g.index_of(square);
    REQUIRE(si >= 0);
    CHECK(g.neighbors_at(si).size() == 4);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (static_cast<std::int64_t>(i) != si) CHECK(g.neighbors_at(i).size() == 1);

    // same star under the {3,4} filter
    MoveGraph gf = build_graph(nodes, 1, VertexFilter{std::set<int>{3, 4}});
    CHECK(gf.edge_count() == 4);

    // components and distances
    CHECK(connected_components(g).size() == 1);
    std::string corner = "2|0,0;0,1;1,0";
    std::string other = "2|0,0;0,1;1,1";
    CHECK(*bfs_distance(g, corner, square) == 1);
    CHECK(*bfs_distance(g, corner, other) == 2);
    CHECK(*bfs_distance(g, corner, corner) == 0);
    CHECK_THROWS_AS(bfs_distance(g, corner, "2|9,9"), Error);
}

TEST_CASE("single-node graph") {
    MoveGraph g = build_graph({corner_simplex(3, 1)}, 1);
    CHECK(g.node_count() == 1);
    CHECK(g.edge_count() == 0);
    CHECK(connected_components(g).size() == 1);
}

TEST_CASE("mask adjacency equals move-engine adjacency") {
    for (auto [d, k] : std::vector<std::pair<int, long long>>{{2, 1}, {2, 2}, {3, 1}}) {
        auto nodes = enumerate_polytopes(d, Int(k));
        MoveGraph fast = build_graph(nodes, Int(k));
        MoveGraph slow = graph_by_move_engine(nodes, k, std::nullopt);
        CHECK(fast == slow);
        VertexFilter f{std::set<int>{d + 1, d + 2}};
        auto fnodes = enumerate_polytopes(d, Int(k), f);
        CHECK(build_graph(fnodes, Int(k), f) == graph_by_move_engine(fnodes, k, f));
    }
}

TEST_CASE("bfs closure reaches the whole census") {
    for (auto [d, k] : std::vector<std::pair<int, long long>>{{2, 1}, {2, 2}, {3, 1}}) {
        MoveGraph g = bfs_closure(corner_simplex(d, Int(k)), Int(k));
        CHECK(g.keys() == enumerate_keys(d, Int(k)));
    }
}

TEST_CASE("two distant staircase hexagons are separate components") {
    Polytope p6 = pn_polygon(6);
    std::vector<Vec> moved;
    for (const Vec& v : p6.vertices()) moved.push_back(add(v, v2(7, 7)));
    Polytope far6 = convex_hull(moved, 2);
    MoveGraph g = build_graph({p6, far6}, 9, VertexFilter{std::set<int>{6, 7}});
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 0);
    CHECK(connected_components(g).size() == 2);
    CHECK(!bfs_distance(g, canonical_key(p6), canonical_key(far6)).has_value());
}

TEST_CASE("edge audit: random edges replay through the move engine") {
  for (auto [d, k] : std::vector<std::pair<int, long long>>{{2, 3}, {3, 1}}) {
    MoveGraph g = bfs_closure(corner_simplex(d, Int(k)), Int(k));
    oracle::Rng rng(77);
    const std::size_t n = g.node_count();
    REQUIRE(n > 10);
    int audited = 0;
    while (audited < 1000) {
        std::size_t i = rng.below(n);
        const auto& nb = g.neighbors_at(i);
        if (nb.empty()) continue;
        std::size_t j = nb[rng.below(nb.size())];
        Polytope a = g.polytope_at(i);
        Polytope b = g.polytope_at(j);
        // the two vertex sets differ by exactly one point; replay the move
        std::vector<Vec> va = a.vertices(), vb = b.vertices();
        if (va.size() + 1 == vb.size()) std::swap(va, vb), std::swap(a, b);
        REQUIRE(va.size() == vb.size() + 1);
        Vec extra;
        for (const Vec& v : va)
            if (std::find(vb.begin(), vb.end(), v) == vb.end()) extra = v;
        CHECK(can_delete(a, extra));
        CHECK(apply_delete(a, extra) == b);
        CHECK(can_insert(b, extra));
        CHECK(apply_insert(b, extra) == a);
        ++audited;
    }
  }
}

TEST_CASE("degree bound: at most one move per box lattice point") {
    MoveGraph g = bfs_closure(corner_simplex(2, 2), 2);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        CHECK(g.neighbors_at(i).size() <= 9);
}

TEST_CASE("jsonl round trip and dot export") {
    auto nodes = enumerate_polytopes(2, 1);
    MoveGraph g = build_graph(nodes, 1);
    std::string jsonl = export_jsonl(g);
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 5);
    MoveGraph back = load_jsonl(jsonl);
    CHECK(back == g);
    CHECK(content_hash(back) == content_hash(g));

    std::string dot = export_dot(g);
    CHECK(std::count(dot.begin(), dot.end(), '-') == 2 * 4);  // one "--" per edge
    CHECK(dot.find("\"2|0,0;0,1;1,0;1,1\"") != std::string::npos);

    CHECK_THROWS_AS(load_jsonl("{\"key\":\"x\"}\n"), Error);
}
