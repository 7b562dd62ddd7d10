#include "latmove/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace latmove {

namespace {

void check_graph_dims(int d, const Int& k) {
    if (d < 2 || d > kMaxDim) fail(ErrorCode::InvalidInput, "graph dimension out of range");
    if (k < 1) fail(ErrorCode::InvalidInput, "box must have k >= 1");
}

std::vector<Vec> box_lattice_points(int d, const Int& k) {
    std::vector<Vec> pts;
    Vec p(d, Int(0));
    while (true) {
        pts.push_back(p);
        int i = d - 1;
        while (i >= 0 && p[i] == k) {
            p[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++p[i];
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::string key_of_vertices(int d, const std::vector<Vec>& vs) {
    std::string s = std::to_string(d);
    s += '|';
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ';';
        s += vec_to_string(vs[i]);
    }
    return s;
}

std::uint64_t binom(std::uint64_t n, int r) {
    std::uint64_t c = 1;
    for (int i = 0; i < r; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > (1ULL << 40)) return c;
    }
    return c;
}

// Precomputed support structure over the lattice points of a small box:
// every hyperplane spanned by d of the points, with on/side masks per
// point. Hull, membership and cone queries on node subsets then reduce to
// mask logic.
struct BoxContext {
    int d = 0;
    Int k = 0;
    std::vector<Vec> points;  // lex order; bit i of a mask = points[i]

    struct Plane {
        Vec normal;
        Int offset;
        std::uint64_t on = 0, pos = 0, neg = 0;
    };
    std::vector<Plane> planes;
    std::vector<std::pair<std::uint64_t, std::int32_t>> spans;  // d-subset -> plane id
    std::vector<std::vector<std::uint64_t>> covers;  // per point: Caratheodory certificates

    int n() const { return static_cast<int>(points.size()); }

    static std::optional<BoxContext> try_create(int d, const Int& k, bool with_covers);

    std::vector<Vec> vertices_of_mask(std::uint64_t mask) const {
        std::vector<Vec> vs;
        for (int i = 0; i < n(); ++i)
            if (mask >> i & 1) vs.push_back(points[i]);
        return vs;
    }
    std::string key_of_mask(std::uint64_t mask) const {
        return key_of_vertices(d, vertices_of_mask(mask));
    }

    // facets of conv(mask) as (plane id, flipped orientation)
    std::vector<std::pair<std::int32_t, bool>> facets_of(std::uint64_t mask) const {
        std::vector<std::pair<std::int32_t, bool>> out;
        std::vector<char> seen(planes.size() * 2, 0);
        for (const auto& [sm, pid] : spans) {
            if (pid < 0 || (sm & mask) != sm) continue;
            const Plane& pl = planes[pid];
            if ((pl.pos & mask) == 0) {
                if (!seen[2 * pid]) {
                    seen[2 * pid] = 1;
                    out.emplace_back(pid, false);
                }
            } else if ((pl.neg & mask) == 0) {
                if (!seen[2 * pid + 1]) {
                    seen[2 * pid + 1] = 1;
                    out.emplace_back(pid, true);
                }
            }
        }
        return out;
    }

    bool mask_can_insert(std::uint64_t mask,
                         const std::vector<std::pair<std::int32_t, bool>>& facets, int x) const {
        const std::uint64_t xb = 1ULL << x;
        bool outside = false;
        for (const auto& [pid, flip] : facets) {
            if ((flip ? planes[pid].neg : planes[pid].pos) & xb) {
                outside = true;
                break;
            }
        }
        if (!outside) return false;
        for (int v = 0; v < n(); ++v) {
            if (!(mask >> v & 1)) continue;
            const std::uint64_t vb = 1ULL << v;
            bool in_cone = true;
            for (const auto& [pid, flip] : facets) {
                const Plane& pl = planes[pid];
                if (!(pl.on & vb)) continue;  // facet not incident to v
                const std::uint64_t supporting = pl.on | (flip ? pl.neg : pl.pos);
                if (!(supporting & xb)) {
                    in_cone = false;
                    break;
                }
            }
            if (in_cone) return false;
        }
        return true;
    }

    bool mask_can_delete(std::uint64_t mask, int v) const {
        std::vector<Vec> rest = vertices_of_mask(mask & ~(1ULL << v));
        return affine_rank(rest) == d;
    }

    bool mask_full_dim(std::uint64_t mask) const {
        return affine_rank(vertices_of_mask(mask)) == d;
    }

    // true when every selected point is extreme in the selection
    bool mask_all_extreme(std::uint64_t mask) const {
        for (int u = 0; u < n(); ++u) {
            if (!(mask >> u & 1)) continue;
            const std::uint64_t rest = mask & ~(1ULL << u);
            for (std::uint64_t s : covers[u])
                if ((s & rest) == s) return false;
        }
        return true;
    }
};

// Exact barycentric solve over rationals: does u lie in the strictly
// positive convex hull of the affinely independent set s?
bool strictly_inside(const Vec& u, const std::vector<Vec>& s) {
    const int d = static_cast<int>(u.size());
    const int m = static_cast<int>(s.size());
    std::vector<std::vector<Rat>> a(d + 1, std::vector<Rat>(m));
    std::vector<Rat> b(d + 1);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < m; ++j) a[i][j] = Rat(s[j][i]);
        b[i] = Rat(u[i]);
    }
    for (int j = 0; j < m; ++j) a[d][j] = 1;
    b[d] = 1;

    std::vector<int> pivot_row(m, -1);
    int row = 0;
    for (int col = 0; col < m; ++col) {
        int pr = -1;
        for (int i = row; i <= d; ++i)
            if (a[i][col] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) return false;
        std::swap(a[row], a[pr]);
        std::swap(b[row], b[pr]);
        Rat pv = a[row][col];
        for (int j = 0; j < m; ++j) a[row][j] /= pv;
        b[row] /= pv;
        for (int i = 0; i <= d; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (int j = 0; j < m; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        pivot_row[col] = row;
        ++row;
    }
    for (int i = row; i <= d; ++i)
        if (b[i] != 0) return false;  // u off the affine hull of s
    for (int col = 0; col < m; ++col)
        if (b[pivot_row[col]] <= 0) return false;
    return true;
}

std::optional<BoxContext> BoxContext::try_create(int d, const Int& k, bool with_covers) {
    BoxContext ctx;
    ctx.d = d;
    ctx.k = k;
    Int pcount = 1;
    for (int i = 0; i < d; ++i) {
        pcount *= (k + 1);
        if (pcount > 64) return std::nullopt;
    }
    ctx.points = box_lattice_points(d, k);
    const int n = ctx.n();
    if (binom(n, d) > 300'000) return std::nullopt;

    std::map<std::pair<Vec, Int>, std::int32_t> plane_ids;
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::vector<Vec> subset(d);
    while (true) {
        std::uint64_t mask = 0;
        for (int i = 0; i < d; ++i) {
            mask |= 1ULL << idx[i];
            subset[i] = ctx.points[idx[i]];
        }
        std::int32_t pid = -1;
        if (auto hp = hyperplane_through(subset)) {
            auto [a, b] = *hp;
            if (neg(a) < a) {  // canonical sign for deduplication
                a = neg(a);
                b = -b;
            }
            auto it = plane_ids.find({a, b});
            if (it == plane_ids.end()) {
                Plane pl;
                pl.normal = a;
                pl.offset = b;
                for (int q = 0; q < n; ++q) {
                    Int sdist = dot(a, ctx.points[q]) - b;
                    if (sdist == 0) pl.on |= 1ULL << q;
                    else if (sdist > 0) pl.pos |= 1ULL << q;
                    else pl.neg |= 1ULL << q;
                }
                pid = static_cast<std::int32_t>(ctx.planes.size());
                plane_ids.emplace(std::make_pair(pl.normal, pl.offset), pid);
                ctx.planes.push_back(std::move(pl));
            } else {
                pid = it->second;
            }
        }
        ctx.spans.emplace_back(mask, pid);
        int pos = d - 1;
        while (pos >= 0 && idx[pos] == n - d + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
    }

    if (with_covers) {
        // Caratheodory certificates: u is non-extreme in a selection exactly
        // when the selection holds an affinely independent subset strictly
        // containing u in its hull.
        ctx.covers.assign(n, {});
        for (int u = 0; u < n; ++u) {
            for (int size = 2; size <= d + 1 && size <= n - 1; ++size) {
                std::vector<int> cid(size);
                for (int i = 0; i < size; ++i) cid[i] = i;
                while (true) {
                    bool skip = false;
                    std::uint64_t mask = 0;
                    std::vector<Vec> sel;
                    for (int i = 0; i < size; ++i) {
                        if (cid[i] == u) skip = true;
                        mask |= 1ULL << cid[i];
                        sel.push_back(ctx.points[cid[i]]);
                    }
                    if (!skip && affine_rank(sel) == size - 1 &&
                        strictly_inside(ctx.points[u], sel))
                        ctx.covers[u].push_back(mask);
                    int pos = size - 1;
                    while (pos >= 0 && cid[pos] == n - size + pos) --pos;
                    if (pos < 0) break;
                    ++cid[pos];
                    for (int i = pos + 1; i < size; ++i) cid[i] = cid[i - 1] + 1;
                }
            }
        }
    }
    return ctx;
}

}  // namespace

// ---------------------------------------------------------------------------
// MoveGraph
// ---------------------------------------------------------------------------

std::size_t MoveGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj_) twice += a.size();
    return twice / 2;
}

Polytope MoveGraph::polytope_at(std::size_t i) const { return convex_hull(verts_[i], d_); }

std::int64_t MoveGraph::index_of(const std::string& key) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return -1;
    return it - keys_.begin();
}

std::size_t MoveGraph::add_node(std::string key, std::vector<Vec> vertices) {
    keys_.push_back(std::move(key));
    verts_.push_back(std::move(vertices));
    adj_.emplace_back();
    return keys_.size() - 1;
}

void MoveGraph::add_edge(std::size_t a, std::size_t b) {
    adj_[a].push_back(static_cast<std::int32_t>(b));
    adj_[b].push_back(static_cast<std::int32_t>(a));
}

void MoveGraph::sort_adjacency() {
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::uint64_t>> enumerate_masks(const BoxContext& ctx,
                                                                   const VertexFilter& filter) {
    const int n = ctx.n();  // at most 16 by the census guard
    const int d = ctx.d;
    std::vector<std::pair<std::string, std::uint64_t>> out;
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        const int pc = std::popcount(mask);
        if (pc >= d + 1 && (!filter || filter->count(pc)) && ctx.mask_all_extreme(mask) &&
            ctx.mask_full_dim(mask))
            out.emplace_back(ctx.key_of_mask(mask), mask);
    }
    std::sort(out.begin(), out.end());
    return out;
}

BoxContext require_census_context(int d, const Int& k) {
    check_graph_dims(d, k);
    Int pcount = 1;
    for (int i = 0; i < d; ++i) pcount *= (k + 1);
    if (pcount > 16)
        fail(ErrorCode::TooLarge, "subset census limited to boxes with at most 16 lattice points");
    auto ctx = BoxContext::try_create(d, k, /*with_covers=*/true);
    if (!ctx) fail(ErrorCode::TooLarge, "box support tables unavailable");
    return std::move(*ctx);
}

}  // namespace

std::vector<std::string> enumerate_keys(int d, const Int& k, const VertexFilter& filter) {
    BoxContext ctx = require_census_context(d, k);
    std::vector<std::string> keys;
    for (auto& [key, mask] : enumerate_masks(ctx, filter)) keys.push_back(key);
    return keys;
}

std::vector<Polytope> enumerate_polytopes(int d, const Int& k, const VertexFilter& filter) {
    BoxContext ctx = require_census_context(d, k);
    std::vector<Polytope> out;
    for (auto& [key, mask] : enumerate_masks(ctx, filter))
        out.push_back(convex_hull(ctx.vertices_of_mask(mask), d));
    return out;
}

// ---------------------------------------------------------------------------
// Graph construction
// ---------------------------------------------------------------------------

namespace {

MoveGraph freeze_graph(int d, const Int& k, const VertexFilter& filter,
                       std::map<std::string, std::vector<Vec>>&& node_data,
                       std::map<std::string, std::vector<std::string>>&& neighbor_keys) {
    MoveGraph g(d, k, filter);
    for (auto& [key, verts] : node_data) g.add_node(key, std::move(verts));
    for (auto& [key, nbrs] : neighbor_keys) {
        std::int64_t a = g.index_of(key);
        for (const std::string& nk : nbrs) {
            std::int64_t b = g.index_of(nk);
            if (b < 0) fail(ErrorCode::Internal, "edge endpoint missing from node set");
            if (a < b) g.add_edge(a, b);
        }
    }
    g.sort_adjacency();
    return g;
}

std::vector<std::pair<std::string, std::vector<Vec>>> neighbor_nodes_general(
    const Polytope& p, const Int& k, const VertexFilter& filter) {
    std::vector<std::pair<std::string, std::vector<Vec>>> out;
    for (const auto& [mv, q] : neighbors_in_box(p, k, filter))
        out.emplace_back(canonical_key(q), q.vertices());
    return out;
}

std::vector<std::pair<std::string, std::vector<Vec>>> neighbor_nodes_ctx(
    const BoxContext& ctx, std::uint64_t mask, const VertexFilter& filter) {
    std::vector<std::pair<std::string, std::vector<Vec>>> out;
    const int pc = std::popcount(mask);
    if (filter && !filter->count(pc)) return out;
    auto facets = ctx.facets_of(mask);
    if (!filter || filter->count(pc + 1)) {
        for (int x = 0; x < ctx.n(); ++x) {
            if (mask >> x & 1) continue;
            if (ctx.mask_can_insert(mask, facets, x)) {
                std::uint64_t nm = mask | (1ULL << x);
                out.emplace_back(ctx.key_of_mask(nm), ctx.vertices_of_mask(nm));
            }
        }
    }
    if (!filter || filter->count(pc - 1)) {
        for (int v = 0; v < ctx.n(); ++v) {
            if (!(mask >> v & 1)) continue;
            if (ctx.mask_can_delete(mask, v)) {
                std::uint64_t nm = mask & ~(1ULL << v);
                out.emplace_back(ctx.key_of_mask(nm), ctx.vertices_of_mask(nm));
            }
        }
    }
    return out;
}

std::optional<std::uint64_t> mask_of_vertices(const BoxContext& ctx, const std::vector<Vec>& vs) {
    std::uint64_t mask = 0;
    for (const Vec& v : vs) {
        auto it = std::lower_bound(ctx.points.begin(), ctx.points.end(), v);
        if (it == ctx.points.end() || *it != v) return std::nullopt;
        mask |= 1ULL << (it - ctx.points.begin());
    }
    return mask;
}

}  // namespace

MoveGraph build_graph(const std::vector<Polytope>& nodes, const Int& k, const VertexFilter& filter) {
    if (nodes.empty()) return MoveGraph(0, k, filter);
    const int d = nodes[0].dim_ambient();
    check_graph_dims(d, k);

    std::map<std::string, std::vector<Vec>> node_data;
    for (const Polytope& p : nodes) {
        if (p.dim_ambient() != d) fail(ErrorCode::InvalidInput, "mixed dimensions in node set");
        if (!p.in_box(k)) fail(ErrorCode::OutOfBox, "node outside the box");
        node_data.emplace(canonical_key(p), p.vertices());
    }

    auto ctx = BoxContext::try_create(d, k, /*with_covers=*/false);
    std::map<std::string, std::vector<std::string>> nbrs;
    for (const auto& [key, vs] : node_data) {
        std::vector<std::string> mine;
        if (ctx) {
            auto mask = mask_of_vertices(*ctx, vs);
            if (!mask) fail(ErrorCode::Internal, "node vertices missing from box table");
            for (auto& [nk, nv] : neighbor_nodes_ctx(*ctx, *mask, filter))
                if (node_data.count(nk)) mine.push_back(nk);
        } else {
            for (auto& [nk, nv] : neighbor_nodes_general(convex_hull(vs, d), k, filter))
                if (node_data.count(nk)) mine.push_back(nk);
        }
        nbrs.emplace(key, std::move(mine));
    }
    return freeze_graph(d, k, filter, std::move(node_data), std::move(nbrs));
}

MoveGraph bfs_closure(const Polytope& seed, const Int& k, const VertexFilter& filter) {
    const int d = seed.dim_ambient();
    check_graph_dims(d, k);
    if (!seed.in_box(k)) fail(ErrorCode::OutOfBox, "seed outside the box");
    if (filter && !filter->count(static_cast<int>(seed.vertex_count())))
        fail(ErrorCode::InvalidInput, "seed violates the vertex filter");

    auto ctx = BoxContext::try_create(d, k, /*with_covers=*/false);

    std::map<std::string, std::vector<Vec>> node_data;
    std::map<std::string, std::vector<std::string>> nbrs;
    std::vector<std::string> frontier{canonical_key(seed)};
    node_data.emplace(frontier[0], seed.vertices());

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        std::vector<std::string> next;
        for (const std::string& key : frontier) {
            const std::vector<Vec>& vs = node_data.at(key);
            std::vector<std::pair<std::string, std::vector<Vec>>> out;
            if (ctx) {
                auto mask = mask_of_vertices(*ctx, vs);
                if (!mask) fail(ErrorCode::Internal, "node vertices missing from box table");
                out = neighbor_nodes_ctx(*ctx, *mask, filter);
            } else {
                out = neighbor_nodes_general(convex_hull(vs, d), k, filter);
            }
            std::vector<std::string> mine;
            for (auto& [nk, nv] : out) {
                mine.push_back(nk);
                if (!node_data.count(nk)) {
                    node_data.emplace(nk, std::move(nv));
                    next.push_back(nk);
                }
            }
            nbrs.emplace(key, std::move(mine));
        }
        frontier = std::move(next);
    }
    return freeze_graph(d, k, filter, std::move(node_data), std::move(nbrs));
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> connected_components(const MoveGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<std::string>> comps;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::string> comp;
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            comp.push_back(g.key_at(v));
            for (std::int32_t w : g.neighbors_at(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

std::optional<int> bfs_distance(const MoveGraph& g, const std::string& from, const std::string& to) {
    std::int64_t s = g.index_of(from);
    std::int64_t t = g.index_of(to);
    if (s < 0 || t < 0) fail(ErrorCode::UnknownNode, "distance endpoint not in the graph");
    if (s == t) return 0;
    std::vector<int> dist(g.node_count(), -1);
    dist[s] = 0;
    std::queue<std::int64_t> q;
    q.push(s);
    while (!q.empty()) {
        std::int64_t v = q.front();
        q.pop();
        for (std::int32_t w : g.neighbors_at(v)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            if (w == t) return dist[w];
            q.push(w);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

std::string export_jsonl(const MoveGraph& g) {
    std::string out;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        out += "{\"key\":\"" + g.key_at(i) + "\",\"vertices\":[";
        const auto& vs = g.vertices_at(i);
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (j) out += ',';
            out += '[';
            for (std::size_t c = 0; c < vs[j].size(); ++c) {
                if (c) out += ',';
                out += vs[j][c].str();
            }
            out += ']';
        }
        out += "],\"neighbors\":[";
        const auto& nb = g.neighbors_at(i);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            if (j) out += ',';
            out += "\"" + g.key_at(nb[j]) + "\"";
        }
        out += "]}\n";
    }
    return out;
}

std::string export_dot(const MoveGraph& g) {
    std::string out = "graph moves {\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) out += "  \"" + g.key_at(i) + "\";\n";
    for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::int32_t j : g.neighbors_at(i))
            if (static_cast<std::size_t>(j) > i)
                out += "  \"" + g.key_at(i) + "\" -- \"" + g.key_at(j) + "\";\n";
    out += "}\n";
    return out;
}

MoveGraph load_jsonl(const std::string& text) {
    std::map<std::string, std::vector<Vec>> node_data;
    std::map<std::string, std::vector<std::string>> nbrs;
    int d = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("vertices") ||
            !j.contains("neighbors"))
            fail(ErrorCode::ParseError, "malformed graph line: " + line);
        std::string key = j["key"].get<std::string>();
        std::vector<Vec> vs;
        for (const auto& row : j["vertices"]) {
            Vec v;
            for (const auto& c : row) v.push_back(Int(c.get<long long>()));
            vs.push_back(std::move(v));
        }
        if (vs.empty()) fail(ErrorCode::ParseError, "node without vertices: " + key);
        d = static_cast<int>(vs[0].size());
        std::vector<std::string> nk;
        for (const auto& s : j["neighbors"]) nk.push_back(s.get<std::string>());
        node_data.emplace(key, std::move(vs));
        nbrs.emplace(key, std::move(nk));
    }
    Int k = 1;  // recovered as the largest coordinate
    for (const auto& [key, vs] : node_data)
        for (const Vec& v : vs)
            for (const Int& c : v) k = std::max(k, c);
    for (const auto& [key, nb] : nbrs)
        for (const std::string& other : nb)
            if (!node_data.count(other)) fail(ErrorCode::ParseError, "dangling neighbor key: " + other);
    return freeze_graph(d, k, std::nullopt, std::move(node_data), std::move(nbrs));
}

std::uint64_t content_hash(const MoveGraph& g) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : export_jsonl(g)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace latmove
