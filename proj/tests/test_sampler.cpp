#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latmove/constructions.hpp"
#include "latmove/sampler.hpp"

using namespace latmove;

TEST_CASE("transition matrix of the unit-box chain") {
    auto nodes = enumerate_polytopes(2, 1);
    auto m = transition_matrix(nodes, 1);
    REQUIRE(m.size() == 5);

    // key order: 4 triangles then... locate the square row
    auto keys = enumerate_keys(2, 1);
    std::size_t square = std::find(keys.begin(), keys.end(), "2|0,0;0,1;1,0;1,1") - keys.begin();
    for (std::size_t j = 0; j < 5; ++j) {
        if (j == square) CHECK(m[square][j] == Rat(0));  // never holds
        else CHECK(m[square][j] == Rat(1, 4));
    }
    for (std::size_t i = 0; i < 5; ++i) {
        if (i == square) continue;
        CHECK(m[i][i] == Rat(3, 4));
        CHECK(m[i][square] == Rat(1, 4));
        Rat row = 0;
        for (const Rat& x : m[i]) row += x;
        CHECK(row == Rat(1));
    }
}

TEST_CASE("kernel symmetry on fully enumerated state spaces") {
    for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}}) {
        auto nodes = enumerate_polytopes(d, k);
        auto m = transition_matrix(nodes, k);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[i][j] == m[j][i]);
    }
}

TEST_CASE("exact stationary distribution is uniform") {
    auto nodes = enumerate_polytopes(2, 1);
    auto pi = stationary_distribution(transition_matrix(nodes, 1));
    for (const Rat& x : pi) CHECK(x == Rat(1, 5));
}

TEST_CASE("chain visits every state and is seed-deterministic") {
    Histogram h = run_chain(2, 1, 20000, 1000, 12345);
    CHECK(h.counts.size() == 5);
    CHECK(h.total == 19000);
    Histogram h2 = run_chain(2, 1, 20000, 1000, 12345);
    CHECK(h.counts == h2.counts);
    Histogram h3 = run_chain(2, 1, 20000, 1000, 54321);
    CHECK(h3.counts != h.counts);
}

TEST_CASE("total variation distance") {
    Histogram uniform;
    for (int i = 0; i < 5; ++i) uniform.counts["s" + std::to_string(i)] = 10;
    uniform.total = 50;
    CHECK(tv_distance_to_uniform(uniform, 5) == Rat(0));

    Histogram point;
    point.counts["s0"] = 50;
    point.total = 50;
    CHECK(tv_distance_to_uniform(point, 5) == Rat(4, 5));

    CHECK_THROWS_AS(tv_distance_to_uniform(uniform, 3), Error);
}

TEST_CASE("long run converges to uniform") {
    Histogram h = run_chain(2, 1, 200000, 1000, 99);
    CHECK(tv_distance_to_uniform(h, 5) < Rat(2, 100));
}

TEST_CASE("chain state stays valid in a bigger box") {
    ChainState s = chain_start(2, 2, 7);
    for (int i = 0; i < 500; ++i) {
        s = mh_step(std::move(s));
        CHECK(s.current.in_box(2));
        CHECK(s.current.dim_ambient() == 2);
    }
    CHECK(s.step_count == 500);
}
