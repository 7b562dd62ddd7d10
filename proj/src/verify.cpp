#include "latmove/verify.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>

#include "latmove/constructions.hpp"
#include "latmove/json_io.hpp"
#include "latmove/sampler.hpp"

namespace latmove {

namespace {

Vec v2(long long a, long long b) { return Vec{Int(a), Int(b)}; }

void check(VerifyReport& r, const std::string& desc, bool pass, std::string witness = "") {
    r.checks.push_back({desc, pass, std::move(witness)});
}

// All d-simplices contained in [0,k]^d, by scanning (d+1)-subsets of the box
// lattice points.
std::vector<Polytope> all_simplices_in_box(int d, long long k) {
    std::vector<Vec> grid;
    {
        Vec p(d, Int(0));
        while (true) {
            grid.push_back(p);
            int i = d - 1;
            while (i >= 0 && p[i] == k) {
                p[i] = 0;
                --i;
            }
            if (i < 0) break;
            ++p[i];
        }
    }
    std::sort(grid.begin(), grid.end());
    const int m = d + 1;
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::vector<Polytope> out;
    while (true) {
        std::vector<Vec> pts;
        for (int i = 0; i < m; ++i) pts.push_back(grid[idx[i]]);
        if (affine_rank(pts) == d) out.push_back(convex_hull(pts, d));
        int pos = m - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(grid.size()) - m + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

// BFS closure with an optional JSONL cache keyed by (d, k, filter).
MoveGraph closure_with_cache(int d, const Int& k, const VertexFilter& filter,
                             const std::string& cache_dir) {
    std::string name;
    if (!cache_dir.empty()) {
        name = cache_dir + "/lambda_d" + std::to_string(d) + "_k" + k.str();
        if (filter) {
            name += "_f";
            for (int v : *filter) name += std::to_string(v) + "_";
        }
        name += ".jsonl";
        std::error_code ec;
        if (std::filesystem::exists(name, ec)) {
            std::string text = read_file(name);
            MoveGraph g = load_jsonl(text);
            std::string hash_file = name + ".fnv";
            if (std::filesystem::exists(hash_file, ec) &&
                read_file(hash_file) == std::to_string(content_hash(g)))
                return g;
        }
    }
    MoveGraph g = bfs_closure(corner_simplex(d, k), k, filter);
    if (!name.empty()) {
        write_file(name, export_jsonl(g));
        write_file(name + ".fnv", std::to_string(content_hash(g)));
    }
    return g;
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

void criterion_census_21(VerifyReport& r) {
    auto keys = enumerate_keys(2, 1);
    check(r, "census of [0,1]^2 has 5 polytopes", keys.size() == 5,
          std::to_string(keys.size()) + " nodes");
    MoveGraph g = build_graph(enumerate_polytopes(2, 1), 1);
    std::int64_t sq = g.index_of("2|0,0;0,1;1,0;1,1");
    bool star = sq >= 0 && g.neighbors_at(sq).size() == 4 && g.edge_count() == 4;
    for (std::size_t i = 0; star && i < g.node_count(); ++i)
        if (static_cast<std::int64_t>(i) != sq && g.neighbors_at(i).size() != 1) star = false;
    check(r, "graph is a star around the square", star);
    check(r, "graph is connected", connected_components(g).size() == 1);
}

void criterion_connectivity_2d(VerifyReport& r, const std::string& cache_dir) {
    for (long long k = 2; k <= 3; ++k) {
        auto census = enumerate_keys(2, k);
        MoveGraph g = closure_with_cache(2, k, std::nullopt, cache_dir);
        check(r, "reachable set equals census in [0," + std::to_string(k) + "]^2",
              g.keys() == census,
              std::to_string(g.node_count()) + " of " + std::to_string(census.size()) + " nodes");
        VertexFilter f{std::set<int>{3, 4}};
        auto fcensus = enumerate_keys(2, k, f);
        MoveGraph fg = closure_with_cache(2, k, f, cache_dir);
        check(r, "triangles and quadrilaterals connected in [0," + std::to_string(k) + "]^2",
              fg.keys() == fcensus,
              std::to_string(fg.node_count()) + " of " + std::to_string(fcensus.size()) + " nodes");
    }
}

void criterion_connectivity_high(VerifyReport& r, const std::string& cache_dir) {
    for (int d : {3, 4}) {
        auto census = enumerate_keys(d, 1);
        MoveGraph g = closure_with_cache(d, 1, std::nullopt, cache_dir);
        check(r, "reachable set equals census in [0,1]^" + std::to_string(d), g.keys() == census,
              std::to_string(g.node_count()) + " of " + std::to_string(census.size()) + " nodes");
        VertexFilter f{std::set<int>{d + 1, d + 2}};
        auto fcensus = enumerate_keys(d, 1, f);
        MoveGraph fg = closure_with_cache(d, 1, f, cache_dir);
        check(r,
              "simplices and (d+2)-vertex polytopes connected in [0,1]^" + std::to_string(d),
              fg.keys() == fcensus,
              std::to_string(fg.node_count()) + " of " + std::to_string(fcensus.size()) + " nodes");
    }
}

void criterion_simplex_insertion(VerifyReport& r) {
    const std::vector<std::pair<int, long long>> cases{{2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}};
    for (auto [d, k] : cases) {
        auto simplices = all_simplices_in_box(d, k);
        std::size_t bad = 0;
        std::string witness;
        for (const Polytope& s : simplices) {
            auto pts = insertable_points(s, k);
            if (pts.empty() || pts.count(find_simplex_insertion(s, k)) == 0) {
                ++bad;
                if (witness.empty()) witness = polytope_to_json(s);
            }
        }
        check(r,
              "every simplex in [0," + std::to_string(k) + "]^" + std::to_string(d) +
                  " admits the searched insertion (" + std::to_string(simplices.size()) + " simplices)",
              bad == 0, bad == 0 ? std::to_string(simplices.size()) + " checked" : witness);
    }
}

void criterion_pn_family(VerifyReport& r) {
    for (int n : {4, 6, 7, 8, 9, 10}) {
        Polytope p = pn_polygon(n);
        bool count_ok = static_cast<int>(p.vertex_count()) == n;
        bool empty_ok = true;
        std::string witness;
        for (const auto& cell : insertable_cells_2d(p)) {
            if (n >= 6 && !cell.bounded) {
                empty_ok = false;
                witness = "unbounded cell";
                break;
            }
            if (cell_has_lattice_point(cell)) {
                empty_ok = false;
                witness = point_to_json(cell_lattice_points(cell).front());
                break;
            }
        }
        check(r, "staircase polygon n=" + std::to_string(n) + " has n vertices and no insertion",
              count_ok && empty_ok, witness.empty() ? polytope_to_json(p) : witness);
    }
    // deleting any vertex of the 10-gon opens exactly that one insertion
    Polytope p10 = pn_polygon(10);
    for (const Vec& v : std::vector<Vec>(p10.vertices())) {
        Polytope q = apply_delete(p10, v);
        std::vector<Vec> insertable;
        bool bounded = true;
        for (const auto& cell : insertable_cells_2d(q)) {
            if (!cell.bounded) {
                bounded = false;
                break;
            }
            for (const Vec& x : cell_lattice_points(cell)) insertable.push_back(x);
        }
        std::sort(insertable.begin(), insertable.end());
        insertable.erase(std::unique(insertable.begin(), insertable.end()), insertable.end());
        bool only_v = bounded && insertable.size() == 1 && insertable[0] == v;
        check(r, "removing vertex " + point_to_json(v) + " of the 10-gon re-opens only it", only_v,
              std::to_string(insertable.size()) + " insertable points");
    }
}

void criterion_products(VerifyReport& r) {
    Polytope p6 = pn_polygon(6);
    Polytope square = pn_polygon(4);
    Polytope prod = cartesian_product(p6, square);
    check(r, "hexagon x square has 24 vertices in dimension 4",
          prod.vertex_count() == 24 && prod.dim_ambient() == 4);

    // no insertable lattice point in the 3x-inflated bounding box
    std::vector<std::pair<long long, long long>> ranges;
    for (int i = 0; i < 4; ++i) {
        Int lo = prod.vertices()[0][i], hi = lo;
        for (const Vec& v : prod.vertices()) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        long long l = lo.convert_to<long long>(), h = hi.convert_to<long long>();
        ranges.emplace_back(l - (h - l), h + (h - l));
    }
    std::size_t found = 0;
    std::string witness;
    bool only_over_interior = true;
    std::vector<long long> p(4);
    for (p[0] = ranges[0].first; p[0] <= ranges[0].second; ++p[0])
        for (p[1] = ranges[1].first; p[1] <= ranges[1].second; ++p[1])
            for (p[2] = ranges[2].first; p[2] <= ranges[2].second; ++p[2])
                for (p[3] = ranges[3].first; p[3] <= ranges[3].second; ++p[3]) {
                    Vec x{Int(p[0]), Int(p[1]), Int(p[2]), Int(p[3])};
                    if (can_insert(prod, x)) {
                        ++found;
                        if (witness.empty()) witness = point_to_json(x);
                        // double-check through the hull definition, and note
                        // whether the hexagon part is its interior point
                        std::vector<Vec> ext = prod.vertices();
                        ext.push_back(x);
                        if (convex_hull(ext, 4).vertex_count() != 25 || p[0] != 1 || p[1] != 1 ||
                            (p[2] >= 0 && p[2] <= 1 && p[3] >= 0 && p[3] <= 1))
                            only_over_interior = false;
                    }
                }
    check(r, "no insertable lattice point in the 3x-inflated box", found == 0,
          found == 0 ? "" : std::to_string(found) + " insertable points, first " + witness);
    // Exact account of the failures above: insertions into the product exist
    // precisely over the hexagon's interior lattice point (1,1) with the
    // square part outside [0,1]^2, each confirmed by the hull route. The
    // box-emptiness check is therefore expected to stay red.
    check(r, "insertions happen exactly over the hexagon's interior lattice point",
          only_over_interior && found == 12, std::to_string(found) + " points");

    // sampled product-cone decomposition
    SplitMix64 rng{2024};
    bool cones_ok = true;
    std::string cone_witness;
    for (int iter = 0; iter < 40 && cones_ok; ++iter) {
        const Vec& u = p6.vertices()[rng.below(p6.vertex_count())];
        const Vec& w = square.vertices()[rng.below(square.vertex_count())];
        Vec uw = u;
        uw.insert(uw.end(), w.begin(), w.end());
        Cone cp = vertex_cone(prod, uw);
        Cone cu = vertex_cone(p6, u);
        Cone cw = vertex_cone(square, w);
        for (int t = 0; t < 50; ++t) {
            Vec x{Int(static_cast<long long>(rng.below(13)) - 6),
                  Int(static_cast<long long>(rng.below(13)) - 6)};
            Vec y{Int(static_cast<long long>(rng.below(13)) - 6),
                  Int(static_cast<long long>(rng.below(13)) - 6)};
            Vec xy = x;
            xy.insert(xy.end(), y.begin(), y.end());
            if (cp.contains(xy) != (cu.contains(x) && cw.contains(y))) {
                cones_ok = false;
                cone_witness = point_to_json(xy);
                break;
            }
        }
    }
    check(r, "vertex cones of the product split by factor (2000 samples)", cones_ok, cone_witness);
}

void criterion_saturating(VerifyReport& r) {
    Polytope p = saturating_polytope(6, 2);
    check(r, "16 vertices in [0,2]^6", p.vertex_count() == 16 && p.in_box(2));
    check(r, "all 16 vertices deletable", deletable_vertices(p).size() == 16);

    std::size_t insertable = 0, other = 0;
    std::string witness;
    Vec x(6, Int(0));
    while (true) {
        if (!p.has_vertex(x)) {
            if (can_insert(p, x)) ++insertable;
            else {
                ++other;
                if (witness.empty()) witness = point_to_json(x);
            }
        }
        int i = 5;
        while (i >= 0 && x[i] == 2) {
            x[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++x[i];
    }
    check(r, "all 713 non-vertex lattice points of [0,2]^6 insertable",
          insertable == 713 && other == 0, witness);
}

void criterion_impossibility_2d(VerifyReport& r) {
    auto nodes = enumerate_polytopes(2, 2);
    std::size_t bad = 0;
    std::string witness;
    for (const Polytope& p : nodes) {
        bool found = false;
        for (long long x = 0; x <= 2 && !found; ++x)
            for (long long y = 0; y <= 2 && !found; ++y) {
                Vec q = v2(x, y);
                bool is_vertex = p.has_vertex(q);
                bool blocked = is_vertex ? !can_delete(p, q) : !can_insert(p, q);
                if (blocked) found = true;
            }
        if (!found) {
            ++bad;
            if (witness.empty()) witness = polytope_to_json(p);
        }
    }
    check(r,
          "every polygon in [0,2]^2 has a blocked lattice point (" +
              std::to_string(nodes.size()) + " polygons)",
          bad == 0, witness);
}

void criterion_pentagon_pipeline(VerifyReport& r) {
    auto pentagons = enumerate_polytopes(2, 3, VertexFilter{std::set<int>{5}});
    std::size_t flatten_bad = 0, strong_bad = 0, oblique_bad = 0;
    std::string witness;
    for (const Polytope& p : pentagons) {
        try {
            MoveTrace ft = flatten_pentagon(p);
            if (ft.moves.size() > 2) throw Error(ErrorCode::Internal, "flatten took extra moves");
            Polytope flat = replay_trace(ft, std::nullopt, std::make_pair(5, 6));
            if (!is_flat(flat, false)) throw Error(ErrorCode::Internal, "flatten output not flat");

            MoveTrace st = make_strongly_flat(flat);
            Polytope strong = replay_trace(st, std::nullopt, std::make_pair(5, 6));
            if (!is_flat(strong, true)) {
                ++strong_bad;
                if (witness.empty()) witness = polytope_to_json(p);
                continue;
            }
            MoveTrace ot = shear_to_oblique(strong);
            Polytope oblique = replay_trace(ot, std::nullopt, std::make_pair(5, 6));
            if (!is_oblique(oblique)) {
                ++oblique_bad;
                if (witness.empty()) witness = polytope_to_json(p);
            }
        } catch (const Error&) {
            ++flatten_bad;
            if (witness.empty()) witness = polytope_to_json(p);
        }
    }
    check(r,
          "all " + std::to_string(pentagons.size()) +
              " pentagons in [0,3]^2 flatten in at most two moves",
          flatten_bad == 0, witness);
    check(r, "every flat pentagon becomes strongly flat with validated moves", strong_bad == 0,
          witness);
    check(r, "every strongly flat pentagon shears to an oblique one", oblique_bad == 0, witness);
}

void criterion_move_engine(VerifyReport& r) {
    SplitMix64 rng{424242};
    std::size_t disagreements = 0, round_trip_bad = 0, bound_bad = 0, insertions = 0;
    std::string witness;
    for (int pair = 0; pair < 10000; ++pair) {
        const int d = 2 + static_cast<int>(rng.below(3));
        std::vector<Vec> pts;
        const int npts = d + 2 + static_cast<int>(rng.below(4));
        for (int i = 0; i < npts; ++i) {
            Vec v(d);
            for (int c = 0; c < d; ++c) v[c] = Int(static_cast<long long>(rng.below(6)));
            pts.push_back(std::move(v));
        }
        if (affine_rank(pts) != d) continue;
        Polytope p = convex_hull(pts, d);

        // sample x from the bounding box inflated by 2
        Vec x(d);
        for (int c = 0; c < d; ++c) {
            Int lo = p.vertices()[0][c], hi = lo;
            for (const Vec& v : p.vertices()) {
                lo = std::min(lo, v[c]);
                hi = std::max(hi, v[c]);
            }
            long long l = lo.convert_to<long long>() - 2, h = hi.convert_to<long long>() + 2;
            x[c] = Int(l + static_cast<long long>(rng.below(h - l + 1)));
        }

        // the definitional route: x outside and the hull of V u {x} keeps V
        bool definitional = false;
        if (!contains_point(p, x)) {
            std::vector<Vec> ext = p.vertices();
            ext.push_back(x);
            definitional = convex_hull(ext, d).vertex_count() == p.vertex_count() + 1;
        }
        if (can_insert(p, x) != definitional) {
            ++disagreements;
            if (witness.empty()) witness = polytope_to_json(p) + " x=" + point_to_json(x);
        }
        if (definitional) {
            ++insertions;
            Polytope q = apply_insert(p, x);
            if (!can_delete(q, x) || apply_delete(q, x) != p) ++round_trip_bad;
        }
        if (p.vertex_count() - deletable_vertices(p).size() > static_cast<std::size_t>(d) + 1)
            ++bound_bad;
    }
    check(r, "cone route equals hull route on 10000 random pairs", disagreements == 0, witness);
    check(r, "insert/delete round trips restore the polytope (" + std::to_string(insertions) +
                 " insertions)",
          round_trip_bad == 0);
    check(r, "at most d+1 non-deletable vertices everywhere", bound_bad == 0);
}

void criterion_sampler(VerifyReport& r) {
    auto nodes = enumerate_polytopes(2, 1);
    auto m = transition_matrix(nodes, 1);
    bool symmetric = true;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != m[j][i]) symmetric = false;
    check(r, "transition kernel is symmetric", symmetric);
    auto pi = stationary_distribution(m);
    bool uniform = pi.size() == 5;
    for (const Rat& x : pi)
        if (x != Rat(1, 5)) uniform = false;
    check(r, "exact stationary distribution is uniform", uniform);

    Histogram h = run_chain(2, 1, 1'000'000, 1000, 20240601);
    Rat tv = tv_distance_to_uniform(h, 5);
    check(r, "empirical distance to uniform below 0.02 after one million steps", tv < Rat(2, 100),
          tv.str());
}

void criterion_corner_traces(VerifyReport& r) {
    for (auto [d, k] : std::vector<std::pair<int, long long>>{{2, 3}, {3, 2}}) {
        SplitMix64 rng{777 + static_cast<std::uint64_t>(d)};
        Polytope goal = corner_simplex(d, k);
        std::size_t bad = 0;
        std::string witness;
        for (int iter = 0; iter < 200; ++iter) {
            std::vector<Vec> pts;
            while (true) {
                pts.clear();
                for (int i = 0; i <= d; ++i) {
                    Vec v(d);
                    for (int c = 0; c < d; ++c)
                        v[c] = Int(static_cast<long long>(rng.below(k + 1)));
                    pts.push_back(std::move(v));
                }
                if (affine_rank(pts) == d) break;
            }
            Polytope s = convex_hull(pts, d);
            try {
                MoveTrace t = simplex_to_corner_path(s, k);
                if (replay_trace(t, Int(k), std::make_pair(d + 1, d + 2)) != goal)
                    throw Error(ErrorCode::Internal, "wrong endpoint");
            } catch (const Error&) {
                ++bad;
                if (witness.empty()) witness = polytope_to_json(s);
            }
        }
        check(r,
              "200 random simplices reach the corner simplex in [0," + std::to_string(k) + "]^" +
                  std::to_string(d),
              bad == 0, witness);
    }
}

}  // namespace

VerifyReport run_criterion(int index, const std::string& cache_dir) {
    VerifyReport r;
    r.suite = "criterion-" + std::to_string(index);
    auto t0 = std::chrono::steady_clock::now();
    switch (index) {
        case 1: criterion_census_21(r); break;
        case 2: criterion_connectivity_2d(r, cache_dir); break;
        case 3: criterion_connectivity_high(r, cache_dir); break;
        case 4: criterion_simplex_insertion(r); break;
        case 5: criterion_pn_family(r); break;
        case 6: criterion_products(r); break;
        case 7: criterion_saturating(r); break;
        case 8: criterion_impossibility_2d(r); break;
        case 9: criterion_pentagon_pipeline(r); break;
        case 10: criterion_move_engine(r); break;
        case 11: criterion_sampler(r); break;
        case 12: criterion_corner_traces(r); break;
        default: fail(ErrorCode::InvalidInput, "criterion index out of range");
    }
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{
        "connectivity-2d", "connectivity-3d",   "simplex-insertion",
        "pn-family",       "products",          "saturating",
        "impossibility-2d", "pentagon-pipeline", "sampler-uniformity"};
    return names;
}

bool is_verify_suite(const std::string& name) {
    const auto& names = verify_suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

VerifyReport run_suite(const std::string& name, const std::string& cache_dir) {
    std::vector<int> criteria;
    if (name == "connectivity-2d") criteria = {1, 2};
    else if (name == "connectivity-3d") criteria = {3};
    else if (name == "simplex-insertion") criteria = {4};
    else if (name == "pn-family") criteria = {5};
    else if (name == "products") criteria = {6};
    else if (name == "saturating") criteria = {7};
    else if (name == "impossibility-2d") criteria = {8};
    else if (name == "pentagon-pipeline") criteria = {9};
    else if (name == "sampler-uniformity") criteria = {11};
    else fail(ErrorCode::InvalidInput, "unknown suite: " + name);

    VerifyReport all;
    all.suite = name;
    for (int c : criteria) {
        VerifyReport r = run_criterion(c, cache_dir);
        all.elapsed_seconds += r.elapsed_seconds;
        for (auto& ch : r.checks) all.checks.push_back(std::move(ch));
    }
    return all;
}

std::string report_table(const VerifyReport& report) {
    std::string out = "suite: " + report.suite + "\n";
    for (const auto& c : report.checks) {
        out += (c.pass ? "  [pass] " : "  [FAIL] ") + c.description;
        if (!c.witness.empty()) out += "  (" + c.witness + ")";
        out += "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", report.elapsed_seconds);
    out += std::string(report.passed() ? "result: pass" : "result: FAIL") + " in " + buf + "s\n";
    return out;
}

std::string report_json(const VerifyReport& report) {
    std::string out = "{\"suite\":\"" + report.suite + "\",\"passed\":";
    out += report.passed() ? "true" : "false";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", report.elapsed_seconds);
    out += ",\"elapsed_seconds\":" + std::string(buf) + ",\"checks\":[";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const auto& c = report.checks[i];
        if (i) out += ',';
        std::string desc = c.description, wit = c.witness;
        for (std::string* s : {&desc, &wit}) {
            std::string esc;
            for (char ch : *s) {
                if (ch == '"' || ch == '\\') esc += '\\';
                esc += ch;
            }
            *s = esc;
        }
        out += "{\"description\":\"" + desc + "\",\"pass\":" + (c.pass ? "true" : "false") +
               ",\"witness\":\"" + wit + "\"}";
    }
    return out + "]}";
}

}  // namespace latmove
