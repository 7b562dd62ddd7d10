#include "latmove/sampler.hpp"

#include <algorithm>

#include "latmove/constructions.hpp"

namespace latmove {

namespace {

Vec nth_box_point(int d, const Int& k, std::uint64_t index) {
    // mixed-radix decoding, last coordinate fastest, matching lex order
    Vec p(d);
    const std::uint64_t base = (k + 1).convert_to<std::uint64_t>();
    for (int i = d - 1; i >= 0; --i) {
        p[i] = Int(index % base);
        index /= base;
    }
    return p;
}

std::uint64_t box_point_count(int d, const Int& k) {
    Int c = 1;
    for (int i = 0; i < d; ++i) {
        c *= (k + 1);
        if (c > Int(1) << 40) fail(ErrorCode::TooLarge, "box has too many lattice points to sample");
    }
    return c.convert_to<std::uint64_t>();
}

}  // namespace

ChainState chain_start(int d, const Int& k, std::uint64_t seed) {
    ChainState s;
    s.current = corner_simplex(d, k);
    s.rng_state = seed;
    s.step_count = 0;
    s.d = d;
    s.k = k;
    return s;
}

ChainState mh_step(ChainState state) {
    SplitMix64 rng{state.rng_state};
    const std::uint64_t npoints = box_point_count(state.d, state.k);
    Vec x = nth_box_point(state.d, state.k, rng.below(npoints));
    if (state.current.has_vertex(x)) {
        if (can_delete(state.current, x)) state.current = apply_delete(state.current, x);
    } else if (can_insert(state.current, x)) {
        state.current = apply_insert(state.current, x);
    }
    state.rng_state = rng.state;
    ++state.step_count;
    return state;
}

Histogram run_chain(int d, const Int& k, std::uint64_t steps, std::uint64_t burnin,
                    std::uint64_t seed) {
    if (steps <= burnin) fail(ErrorCode::InvalidInput, "need steps > burnin");
    ChainState s = chain_start(d, k, seed);
    Histogram h;
    for (std::uint64_t i = 1; i <= steps; ++i) {
        s = mh_step(std::move(s));
        if (i > burnin) {
            ++h.counts[canonical_key(s.current)];
            ++h.total;
        }
    }
    return h;
}

Rat tv_distance_to_uniform(const Histogram& h, std::size_t support_size) {
    if (support_size < h.counts.size())
        fail(ErrorCode::InvalidInput, "support smaller than the observed state count");
    if (h.total == 0) fail(ErrorCode::InvalidInput, "empty histogram");
    const Rat uniform = Rat(1, static_cast<long long>(support_size));
    Rat tv = 0;
    for (const auto& [key, count] : h.counts) {
        Rat p = Rat(static_cast<long long>(count), static_cast<long long>(h.total));
        tv += boost::multiprecision::abs(p - uniform);
    }
    tv += Rat(static_cast<long long>(support_size - h.counts.size())) * uniform;
    return tv / 2;
}

std::vector<std::vector<Rat>> transition_matrix(const std::vector<Polytope>& nodes, const Int& k) {
    std::vector<std::pair<std::string, const Polytope*>> order;
    for (const Polytope& p : nodes) order.emplace_back(canonical_key(p), &p);
    std::sort(order.begin(), order.end());

    const std::size_t n = order.size();
    const int d = nodes.empty() ? 0 : nodes[0].dim_ambient();
    const std::uint64_t npoints = box_point_count(d, k);
    const Rat step = Rat(1, static_cast<long long>(npoints));

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[order[i].first] = i;

    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        const Polytope& p = *order[i].second;
        Rat stay = 1;
        for (std::uint64_t t = 0; t < npoints; ++t) {
            Vec x = nth_box_point(d, k, t);
            Polytope q = p;
            if (p.has_vertex(x)) {
                if (!can_delete(p, x)) continue;
                q = apply_delete(p, x);
            } else if (can_insert(p, x)) {
                q = apply_insert(p, x);
            } else {
                continue;
            }
            auto it = index.find(canonical_key(q));
            if (it == index.end()) fail(ErrorCode::InvalidInput, "transition leaves the node set");
            m[i][it->second] += step;
            stay -= step;
        }
        m[i][i] += stay;
    }
    return m;
}

std::vector<Rat> stationary_distribution(const std::vector<std::vector<Rat>>& p) {
    // solve pi (P - I) = 0 with sum(pi) = 1: transpose and replace the last
    // equation by normalization
    const std::size_t n = p.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> b(n, Rat(0));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = p[j][i] - Rat(i == j ? 1 : 0);
    for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1;
    b[n - 1] = 1;
    auto x = solve_rational(std::move(a), std::move(b));
    if (!x) fail(ErrorCode::Internal, "stationary system is singular");
    return *x;
}

}  // namespace latmove
