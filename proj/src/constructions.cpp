#include "latmove/constructions.hpp"

#include <algorithm>

namespace latmove {

namespace {

Vec unit_vec(int d, int i) {
    Vec v(d, Int(0));
    v[i] = 1;
    return v;
}

Vec lift_coord(const Vec& p, int pos, const Int& value) {
    Vec out;
    out.reserve(p.size() + 1);
    for (int i = 0; i < pos; ++i) out.push_back(p[i]);
    out.push_back(value);
    for (std::size_t i = pos; i < p.size(); ++i) out.push_back(p[i]);
    return out;
}

Vec drop_coord(const Vec& p, int pos) {
    Vec out;
    out.reserve(p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (static_cast<int>(i) != pos) out.push_back(p[i]);
    return out;
}

// Records moves while mutating the current polytope; an optional box keeps
// bounded constructions honest at every step. Arguments are taken by value:
// callers routinely pass references into cur, which reassignment invalidates.
struct PathCtx {
    Polytope cur;
    std::vector<Move>* out;
    std::optional<Int> box;

    void insert(Vec x) {
        cur = apply_insert(cur, x);
        if (box && !cur.in_box(*box)) fail(ErrorCode::Internal, "path step left the box");
        out->push_back(Move{MoveKind::Insert, std::move(x)});
    }
    void erase(Vec v) {
        cur = apply_delete(cur, v);
        out->push_back(Move{MoveKind::Delete, std::move(v)});
    }
};

// Outward half-plane of the polygon edge through u and v.
HalfSpace edge_facet(const Polytope& p, const Vec& u, const Vec& v) {
    for (const HalfSpace& f : p.facets())
        if (f.tight_at(u) && f.tight_at(v)) return f;
    fail(ErrorCode::Internal, "edge facet not found");
}

}  // namespace

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

Polytope corner_simplex(int d, const Int& k) {
    if (d < 2 || d > kMaxDim) fail(ErrorCode::InvalidInput, "corner_simplex: dimension out of range");
    if (k < 1) fail(ErrorCode::InvalidInput, "corner_simplex: box must have k >= 1");
    std::vector<Vec> pts{Vec(d, Int(0))};
    for (int i = 0; i < d; ++i) pts.push_back(unit_vec(d, i));
    return convex_hull(pts, d);
}

Polytope pn_polygon(int n) {
    if (n < 4 || n == 5) fail(ErrorCode::Unsupported, "pn_polygon: defined for n = 4 and n >= 6");
    if (n == 4)
        return convex_hull(
            {Vec{Int(0), Int(0)}, Vec{Int(1), Int(0)}, Vec{Int(0), Int(1)}, Vec{Int(1), Int(1)}}, 2);

    auto f = [](const Int& x) { return x * (x - 1) / 2; };
    const int m = (n % 2 == 0) ? n : n + 1;
    // staircase points with 0 <= x1 < m/2 and their reflections through a/2
    Int a1 = Int(m / 2 - 1);
    Int a2 = f(a1) + 1;
    std::vector<Vec> pts;
    for (Int t = 0; t < Int(m / 2); ++t) {
        Vec p{t, f(t)};
        pts.push_back(Vec{a1 - p[0], a2 - p[1]});
        pts.push_back(std::move(p));
    }
    if (n % 2 == 1) pts.push_back(Vec{a1, a2 + 1});
    Polytope p = convex_hull(pts, 2);
    if (static_cast<int>(p.vertex_count()) != n)
        fail(ErrorCode::Internal, "pn_polygon produced a wrong vertex count");
    return p;
}

Polytope empty_simplex(int k) {
    if (k < 2) fail(ErrorCode::Unsupported, "empty_simplex: needs k >= 2");
    const int d = k + 1;
    if (d > kMaxDim) fail(ErrorCode::Unsupported, "empty_simplex: dimension out of range");
    std::vector<Vec> cols;
    cols.push_back(scale(Int(k), unit_vec(d, 0)));
    for (int i = 1; i <= k; ++i)
        cols.push_back(add(unit_vec(d, i - 1), scale(Int(k), unit_vec(d, i))));
    cols.push_back(unit_vec(d, d - 1));
    return convex_hull(cols, d);
}

Polytope cartesian_product(const Polytope& p, const Polytope& q) {
    const int dp = p.dim_ambient();
    const int dq = q.dim_ambient();
    if (dp + dq > kMaxDim) fail(ErrorCode::InvalidInput, "product dimension out of range");

    std::vector<Vec> verts;
    verts.reserve(p.vertex_count() * q.vertex_count());
    for (const Vec& u : p.vertices())
        for (const Vec& v : q.vertices()) {
            Vec w = u;
            w.insert(w.end(), v.begin(), v.end());
            verts.push_back(std::move(w));
        }
    std::sort(verts.begin(), verts.end());

    // Facets of a product are exactly the lifted factor facets.
    std::vector<HalfSpace> facets;
    for (const HalfSpace& f : p.facets()) {
        Vec n = f.normal;
        n.resize(dp + dq, Int(0));
        facets.push_back({std::move(n), f.offset});
    }
    for (const HalfSpace& f : q.facets()) {
        Vec n(dp, Int(0));
        n.insert(n.end(), f.normal.begin(), f.normal.end());
        facets.push_back({std::move(n), f.offset});
    }
    return Polytope::from_canonical_parts(dp + dq, std::move(verts), std::move(facets));
}

Polytope saturating_polytope(int d, int k) {
    if (k < 2) fail(ErrorCode::Unsupported, "saturating_polytope: needs k >= 2");
    if (d % (k + 1) != 0 || d / (k + 1) < 2)
        fail(ErrorCode::Unsupported, "saturating_polytope: k+1 must be a proper divisor of d");
    if (d > kMaxDim) fail(ErrorCode::Unsupported, "saturating_polytope: dimension out of range");
    Polytope s = empty_simplex(k);
    Polytope out = s;
    for (int i = 1; i < d / (k + 1); ++i) out = cartesian_product(out, s);
    return out;
}

// ---------------------------------------------------------------------------
// Insertion search for simplices
// ---------------------------------------------------------------------------

std::vector<SimplexFacetFrame> simplex_frames(const Polytope& s, const Int& k) {
    if (!s.is_simplex()) fail(ErrorCode::NotASimplex, "frames are defined for simplices");
    if (k < 1) fail(ErrorCode::InvalidInput, "box must have k >= 1");
    if (!s.in_box(k)) fail(ErrorCode::OutOfBox, "simplex is not contained in [0,k]^d");
    const int d = s.dim_ambient();
    const auto& verts = s.vertices();

    std::vector<SimplexFacetFrame> frames;
    for (int i = 0; i < d; ++i) {
        Int lo = verts[0][i], hi = verts[0][i];
        for (const Vec& v : verts) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
        for (int side = 0; side < 2; ++side) {
            SimplexFacetFrame fr;
            fr.coord = i;
            fr.upper = side == 1;
            fr.level = fr.upper ? hi : lo;
            for (const Vec& v : verts)
                (v[i] == fr.level ? fr.f_vertices : fr.fstar_vertices).push_back(v);

            // direction orthogonal to the touching face and its complement
            std::vector<Vec> rows;
            for (std::size_t j = 1; j < fr.f_vertices.size(); ++j)
                rows.push_back(sub(fr.f_vertices[j], fr.f_vertices[0]));
            for (std::size_t j = 1; j < fr.fstar_vertices.size(); ++j)
                rows.push_back(sub(fr.fstar_vertices[j], fr.fstar_vertices[0]));
            auto c = integer_kernel_vector(rows, d);
            if (!c) fail(ErrorCode::Internal, "frame direction missing");
            fr.c = *c;
            fr.epsilon = dot(fr.c, fr.f_vertices[0]);
            fr.epsilon_star = dot(fr.c, fr.fstar_vertices[0]);
            if (fr.epsilon > fr.epsilon_star) {
                fr.c = neg(fr.c);
                fr.epsilon = -fr.epsilon;
                fr.epsilon_star = -fr.epsilon_star;
            }
            if (fr.epsilon == fr.epsilon_star) fail(ErrorCode::Internal, "frame direction degenerate");

            // the face of aff(R) n [0,k]^d minimizing c.x
            fr.delta = fr.c[i] * fr.level;
            fr.g_base = Vec(d, Int(0));
            fr.g_base[i] = fr.level;
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                if (fr.c[j] < 0) {
                    fr.delta += fr.c[j] * k;
                    fr.g_base[j] = k;
                } else if (fr.c[j] == 0) {
                    fr.g_free.push_back(j);
                }
            }
            frames.push_back(std::move(fr));
        }
    }
    return frames;
}

namespace {

// Lattice points of the cube face G, lexicographically; stops when the
// callback returns true.
template <typename F>
void for_each_g_point(const SimplexFacetFrame& fr, const Int& k, F&& fn) {
    Vec p = fr.g_base;
    const auto& free = fr.g_free;
    while (true) {
        if (fn(p)) return;
        int i = static_cast<int>(free.size()) - 1;
        while (i >= 0 && p[free[i]] == k) {
            p[free[i]] = 0;
            --i;
        }
        if (i < 0) return;
        ++p[free[i]];
    }
}

struct InsertionResult {
    Vec point;
    int frame_index = -1;
};

// Case analysis over the frames of maximal touching-face dimension. Every
// returned point is validated with the move predicate; tie breaks are
// lexicographic (first frame in order, then smallest point).
InsertionResult find_insertion_impl(const Polytope& s, const Int& k) {
    const int d = s.dim_ambient();
    auto frames = simplex_frames(s, k);
    int g = -1;
    for (const auto& fr : frames) g = std::max(g, fr.dim_f());

    if (g == d - 1) {
        // The touching face spans a box facet; any lattice point of the
        // parallel hyperplane through the opposite vertex works, except
        // that vertex itself.
        for (std::size_t fi = 0; fi < frames.size(); ++fi) {
            const auto& fr = frames[fi];
            if (fr.dim_f() != d - 1) continue;
            const Vec& v = fr.fstar_vertices[0];
            Vec p(d, Int(0));
            while (true) {
                if (dot(fr.c, p) == fr.epsilon_star && p != v && can_insert(s, p))
                    return {p, static_cast<int>(fi)};
                int i = d - 1;
                while (i >= 0 && p[i] == k) {
                    p[i] = 0;
                    --i;
                }
                if (i < 0) break;
                ++p[i];
            }
        }
        fail(ErrorCode::Internal, "no insertion point on the opposite hyperplane");
    }

    // All touching faces have dimension at most d-2.
    // First: some frame's touching face misses the minimizing cube face G,
    // so every lattice point of G is insertable.
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const auto& fr = frames[fi];
        if (fr.dim_f() != g || fr.delta == fr.epsilon) continue;
        InsertionResult res;
        for_each_g_point(fr, k, [&](const Vec& p) {
            if (can_insert(s, p)) {
                res = {p, static_cast<int>(fi)};
                return true;
            }
            return false;
        });
        if (res.frame_index >= 0) return res;
    }
    // Second: the touching face sits inside a strictly larger G; G then
    // holds a lattice point off the face's affine hull.
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const auto& fr = frames[fi];
        if (fr.dim_f() != g || fr.delta != fr.epsilon || fr.dim_f() >= fr.dim_g()) continue;
        AffineFlat aff_f = affine_flat_of(fr.f_vertices);
        InsertionResult res;
        for_each_g_point(fr, k, [&](const Vec& p) {
            if (!aff_f.contains(p) && can_insert(s, p)) {
                res = {p, static_cast<int>(fi)};
                return true;
            }
            return false;
        });
        if (res.frame_index >= 0) return res;
    }
    // Last: project a complementary vertex onto the box facet; the image
    // stays below the complementary level and off the touching face.
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const auto& fr = frames[fi];
        if (fr.dim_f() != g) continue;
        AffineFlat aff_f = affine_flat_of(fr.f_vertices);
        std::vector<Vec> stars = fr.fstar_vertices;
        std::sort(stars.begin(), stars.end());
        for (const Vec& v : stars) {
            Vec w = v;
            w[fr.coord] = fr.level;
            if (dot(fr.c, w) >= fr.epsilon_star) continue;
            if (aff_f.contains(w)) continue;
            if (can_insert(s, w)) return {w, static_cast<int>(fi)};
        }
    }
    fail(ErrorCode::Internal, "simplex insertion search exhausted all cases");
}

}  // namespace

Vec find_simplex_insertion(const Polytope& s, const Int& k) {
    return find_insertion_impl(s, k).point;
}

// ---------------------------------------------------------------------------
// Simplex-to-corner path
// ---------------------------------------------------------------------------

namespace {

// Endgame in the plane: swap the current triangle's vertices for the corner
// triangle's, one insertion/deletion pair per vertex. Preference follows the
// insert-origin-first, delete-top-right-last rule; a short depth-first
// search over the remaining orders makes the step total.
bool corner_swap_dfs(const Polytope& tri, const std::vector<Vec>& goal, const Polytope& goal_poly,
                     std::vector<Move>& moves) {
    if (tri == goal_poly) return true;
    std::vector<Vec> missing;
    for (const Vec& g : goal)
        if (!tri.has_vertex(g)) missing.push_back(g);
    std::sort(missing.begin(), missing.end());  // origin first, then lex

    for (const Vec& x : missing) {
        if (!can_insert(tri, x)) continue;
        Polytope quad = apply_insert(tri, x);
        std::vector<Vec> dels;
        for (const Vec& v : quad.vertices())
            if (std::find(goal.begin(), goal.end(), v) == goal.end()) dels.push_back(v);
        std::sort(dels.begin(), dels.end());
        std::stable_sort(dels.begin(), dels.end(),
                         [](const Vec& a, const Vec& b) { return a[0] + a[1] < b[0] + b[1]; });
        for (const Vec& v : dels) {
            if (!can_delete(quad, v)) continue;
            moves.push_back(Move{MoveKind::Insert, x});
            moves.push_back(Move{MoveKind::Delete, v});
            if (corner_swap_dfs(apply_delete(quad, v), goal, goal_poly, moves)) return true;
            moves.pop_back();
            moves.pop_back();
        }
    }
    return false;
}

void drive_to_corner_2d(PathCtx& ctx) {
    const Int k = *ctx.box;
    Polytope goal_poly = corner_simplex(2, k);
    std::vector<Vec> goal = goal_poly.vertices();
    if (ctx.cur == goal_poly) return;

    auto axis_edge = [&](int coord) -> std::optional<std::pair<Vec, Vec>> {
        const auto& vs = ctx.cur.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (vs[i][coord] == vs[j][coord]) return std::make_pair(vs[i], vs[j]);
        return std::nullopt;
    };

    // Stage 1: get an axis-parallel edge.
    if (!axis_edge(0) && !axis_edge(1)) {
        Vec x = find_simplex_insertion(ctx.cur, k);
        Polytope before = ctx.cur;
        ctx.insert(x);
        // the inserted point shares a bounding-box coordinate with exactly
        // one old vertex; delete a vertex off that line
        int shared = -1;
        for (const Vec& v : before.vertices())
            for (int c = 0; c < 2; ++c)
                if (v[c] == x[c]) shared = c;
        if (shared < 0) fail(ErrorCode::Internal, "inserted point shares no axis line");
        bool deleted = false;
        for (const Vec& v : ctx.cur.vertices()) {
            if (v == x || v[shared] == x[shared]) continue;
            if (can_delete(ctx.cur, v)) {
                ctx.erase(v);
                deleted = true;
                break;
            }
        }
        if (!deleted) fail(ErrorCode::Internal, "no deletable vertex off the axis edge");
    }

    // Stage 2: get both a horizontal and a vertical edge.
    if (ctx.cur != goal_poly && (!axis_edge(0) || !axis_edge(1))) {
        int have = axis_edge(1) ? 1 : 0;
        auto [u, v] = *axis_edge(have);
        Vec w;
        for (const Vec& p : ctx.cur.vertices())
            if (p != u && p != v) w = p;
        // insert the projection of an edge endpoint onto the parallel line
        // through the apex, then delete the apex
        Vec cand1 = u, cand2 = v;
        cand1[have] = w[have];
        cand2[have] = w[have];
        std::vector<Vec> cands{cand1, cand2};
        std::sort(cands.begin(), cands.end());
        bool done = false;
        for (const Vec& x : cands) {
            if (x == w || !can_insert(ctx.cur, x)) continue;
            ctx.insert(x);
            ctx.erase(w);
            done = true;
            break;
        }
        if (!done) fail(ErrorCode::Internal, "apex line insertion failed");
    }

    // Stage 3: make the oblique edge face the bottom-left box corner by
    // completing the rectangle and deleting its bottom-left corner.
    if (ctx.cur != goal_poly) {
        const auto vs = ctx.cur.vertices();
        Vec c, la, lb;
        for (const Vec& p : vs) {
            int hits = 0;
            for (const Vec& q : vs) {
                if (q == p) continue;
                if (q[0] == p[0] || q[1] == p[1]) ++hits;
            }
            if (hits == 2) c = p;
        }
        if (c.empty()) fail(ErrorCode::Internal, "no right-angle corner after stage 2");
        for (const Vec& q : vs)
            if (q != c) (q[1] == c[1] ? la : lb) = q;
        Vec r = sub(add(la, lb), c);
        Vec cwmax{std::max(std::max(c[0], la[0]), std::max(lb[0], r[0])),
                  std::max(std::max(c[1], la[1]), std::max(lb[1], r[1]))};
        if (c != cwmax) {
            Vec cwmin{std::min(std::min(c[0], la[0]), std::min(lb[0], r[0])),
                      std::min(std::min(c[1], la[1]), std::min(lb[1], r[1]))};
            ctx.insert(r);
            ctx.erase(cwmin);
        }
    }

    // Stage 4: vertex replacement.
    if (ctx.cur != goal_poly) {
        std::vector<Move> moves;
        if (!corner_swap_dfs(ctx.cur, goal, goal_poly, moves))
            fail(ErrorCode::Internal, "corner replacement search failed");
        for (const Move& m : moves)
            m.kind == MoveKind::Insert ? ctx.insert(m.point) : ctx.erase(m.point);
    }
}

// Runs the (d-1)-dimensional path on a facet living in a box hyperplane and
// lifts each move back through the fixed coordinate; every lifted move is a
// valid move of the pyramid over that facet.
void recurse_on_facet(PathCtx& ctx, const std::vector<Vec>& face, int coord, const Int& level) {
    std::vector<Vec> proj;
    proj.reserve(face.size());
    for (const Vec& v : face) proj.push_back(drop_coord(v, coord));
    Polytope fp = convex_hull(proj, static_cast<int>(proj[0].size()));
    MoveTrace sub = simplex_to_corner_path(fp, *ctx.box);
    for (const Move& m : sub.moves) {
        Vec lifted = lift_coord(m.point, coord, level);
        m.kind == MoveKind::Insert ? ctx.insert(lifted) : ctx.erase(lifted);
    }
}

void drive_to_corner(PathCtx& ctx) {
    const int d = ctx.cur.dim_ambient();
    const Int k = *ctx.box;
    if (d == 2) {
        drive_to_corner_2d(ctx);
        return;
    }
    Polytope goal = corner_simplex(d, k);
    if (ctx.cur == goal) return;

    // Phase 1: raise the maximal touching-face dimension to d-1. Each round
    // inserts a point on a spanning box hyperplane off the face's affine
    // hull and deletes a vertex away from that hyperplane.
    while (true) {
        auto frames = simplex_frames(ctx.cur, k);
        int g = -1;
        for (const auto& fr : frames) g = std::max(g, fr.dim_f());
        if (g == d - 1) break;
        InsertionResult step = find_insertion_impl(ctx.cur, k);
        const auto fr = frames[step.frame_index];
        ctx.insert(step.point);
        bool deleted = false;
        for (const Vec& v : ctx.cur.vertices()) {
            if (v[fr.coord] == fr.level) continue;  // keep the enlarged face
            if (can_delete(ctx.cur, v)) {
                ctx.erase(v);
                deleted = true;
                break;
            }
        }
        if (!deleted) fail(ErrorCode::Internal, "no deletable vertex off the touching face");
    }

    // Phase 2: the touching face is now a facet; normalize it to the corner
    // simplex of its box hyperplane (moves lift through the pyramid apex).
    auto frames = simplex_frames(ctx.cur, k);
    const SimplexFacetFrame* fr = nullptr;
    for (const auto& f : frames)
        if (f.dim_f() == d - 1) {
            fr = &f;
            break;
        }
    const int i0 = fr->coord;
    const Int level = fr->level;
    const Vec apex = fr->fstar_vertices[0];
    recurse_on_facet(ctx, fr->f_vertices, i0, level);

    // Phase 3: swap the apex onto the coordinate column over the facet
    // corner.
    Vec w(d, Int(0));
    w[i0] = level;
    Vec z(d, Int(0));
    z[i0] = apex[i0];
    if (z != apex) {
        ctx.insert(z);
        ctx.erase(apex);
    }

    // Phase 4: pick the new apex among the unit neighbors of the facet
    // corner and normalize the rest inside the coordinate hyperplane.
    std::vector<Vec> neighbors;
    for (int j = 0; j < d; ++j)
        if (j != i0) neighbors.push_back(add(w, unit_vec(d, j)));
    std::sort(neighbors.begin(), neighbors.end());
    Vec vprime = neighbors[0];
    int jprime = -1;
    for (int j = 0; j < d; ++j)
        if (j != i0 && vprime[j] == 1) jprime = j;
    std::vector<Vec> fprime;
    for (const Vec& v : ctx.cur.vertices())
        if (v != vprime) fprime.push_back(v);
    recurse_on_facet(ctx, fprime, jprime, Int(0));

    // Phase 5: final apex swap down to the unit point.
    Vec target_apex = unit_vec(d, jprime);
    if (vprime != target_apex) {
        ctx.insert(target_apex);
        ctx.erase(vprime);
    }
    if (ctx.cur != goal) fail(ErrorCode::Internal, "path did not reach the corner simplex");
}

}  // namespace

MoveTrace simplex_to_corner_path(const Polytope& s, const Int& k) {
    if (!s.is_simplex()) fail(ErrorCode::NotASimplex, "path source must be a simplex");
    if (k < 1) fail(ErrorCode::InvalidInput, "box must have k >= 1");
    if (!s.in_box(k)) fail(ErrorCode::OutOfBox, "simplex is not contained in [0,k]^d");

    MoveTrace trace;
    trace.start = s;
    PathCtx ctx{s, &trace.moves, k};
    drive_to_corner(ctx);
    return trace;
}

// ---------------------------------------------------------------------------
// Convex-position connection
// ---------------------------------------------------------------------------

MoveTrace connect_convex_position(const Polytope& p, const Polytope& q) {
    if (p.dim_ambient() != q.dim_ambient()) fail(ErrorCode::InvalidInput, "connect: dimension mismatch");
    const int d = p.dim_ambient();
    const int np = static_cast<int>(p.vertex_count());
    const int nq = static_cast<int>(q.vertex_count());
    if (std::abs(np - nq) > 1)
        fail(ErrorCode::InvalidInput, "connect: vertex counts must differ by at most one");

    std::vector<Vec> joint = p.vertices();
    joint.insert(joint.end(), q.vertices().begin(), q.vertices().end());
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    Polytope hull = convex_hull(joint, d);
    if (hull.vertices() != joint)
        fail(ErrorCode::NotInConvexPosition, "vertex sets are not jointly in convex position");

    MoveTrace trace;
    trace.start = p;
    if (p == q) return trace;
    PathCtx ctx{p, &trace.moves, std::nullopt};

    const int n = std::min(np, nq);

    // Reduce the start to n vertices, preferring vertices the target lacks.
    if (np == n + 1) {
        bool done = false;
        for (int pass = 0; pass < 2 && !done; ++pass) {
            for (const Vec& v : ctx.cur.vertices()) {
                if (pass == 0 && q.has_vertex(v)) continue;
                if (can_delete(ctx.cur, v)) {
                    ctx.erase(v);
                    done = true;
                    break;
                }
            }
        }
        if (!done) fail(ErrorCode::Internal, "could not reduce the start polytope");
    }
    // If the target has n+1 vertices, aim for target-minus-one vertex and
    // restore it at the end.
    Polytope target = q;
    std::optional<Vec> final_insert;
    if (nq == n + 1) {
        bool done = false;
        for (int pass = 0; pass < 2 && !done; ++pass) {
            for (const Vec& v : q.vertices()) {
                if (pass == 0 && ctx.cur.has_vertex(v)) continue;
                if (can_delete(q, v)) {
                    target = apply_delete(q, v);
                    final_insert = v;
                    done = true;
                    break;
                }
            }
        }
        if (!done) fail(ErrorCode::Internal, "could not reduce the target polytope");
    }

    // Trade one alien vertex for one target vertex per round. In jointly
    // convex position every missing target vertex is insertable, and some
    // alien is always deletable afterward.
    while (ctx.cur != target) {
        bool progressed = false;
        for (const Vec& x : target.vertices()) {
            if (ctx.cur.has_vertex(x) || !can_insert(ctx.cur, x)) continue;
            Polytope widened = apply_insert(ctx.cur, x);
            for (const Vec& v : widened.vertices()) {
                if (target.has_vertex(v)) continue;
                if (!can_delete(widened, v)) continue;
                ctx.insert(x);
                ctx.erase(v);
                progressed = true;
                break;
            }
            if (progressed) break;
        }
        if (!progressed) fail(ErrorCode::Internal, "convex-position connection stalled");
    }
    if (final_insert) ctx.insert(*final_insert);

    if (trace.moves.size() > static_cast<std::size_t>(2 * n + 2))
        fail(ErrorCode::Internal, "convex-position trace exceeded its length bound");
    return trace;
}

// ---------------------------------------------------------------------------
// Polygon normal forms
// ---------------------------------------------------------------------------

namespace {

// Consecutive pairs in scan order: edges along the ccw cycle, each tried
// with its lexicographically smaller endpoint first.
std::vector<std::pair<Vec, Vec>> ordered_pairs(const std::vector<Vec>& cyc) {
    std::vector<std::pair<Vec, Vec>> out;
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& u = cyc[i];
        const Vec& v = cyc[(i + 1) % n];
        if (u < v) {
            out.emplace_back(u, v);
            out.emplace_back(v, u);
        } else {
            out.emplace_back(v, u);
            out.emplace_back(u, v);
        }
    }
    return out;
}

Vec rot90(const Vec& v) { return Vec{-v[1], v[0]}; }

// Nonzero lattice direction in the cone {c : n.c >= 0 for all n}, or
// nothing. Any nonzero element lies on a boundary ray and every boundary
// ray is orthogonal to some constraint, so the rotated normals are a
// complete candidate set.
std::optional<Vec> cone_nonzero(const std::vector<Vec>& normals) {
    for (const Vec& n : normals) {
        for (const Vec& r : {rot90(n), neg(rot90(n))}) {
            bool ok = true;
            for (const Vec& m : normals)
                if (dot(m, r) < 0) {
                    ok = false;
                    break;
                }
            if (ok) return make_primitive(r);
        }
    }
    return std::nullopt;
}

// Lattice direction satisfying every constraint strictly, or nothing. The
// cone has interior iff it is a half-plane (some normal works) or a
// two-dimensional wedge (the sum of its boundary rays works).
std::optional<Vec> cone_interior(const std::vector<Vec>& normals) {
    auto strict_ok = [&](const Vec& c) {
        for (const Vec& m : normals)
            if (dot(m, c) <= 0) return false;
        return true;
    };
    std::vector<Vec> cands;
    for (const Vec& n : normals) {
        cands.push_back(n);
        cands.push_back(rot90(n));
        cands.push_back(neg(rot90(n)));
    }
    for (const Vec& c : cands)
        if (strict_ok(c)) return make_primitive(c);
    std::vector<Vec> feasible;
    for (const Vec& c : cands) {
        bool ok = true;
        for (const Vec& m : normals)
            if (dot(m, c) < 0) {
                ok = false;
                break;
            }
        if (ok && !is_zero(c)) feasible.push_back(c);
    }
    for (std::size_t i = 0; i < feasible.size(); ++i)
        for (std::size_t j = i + 1; j < feasible.size(); ++j) {
            Vec c = add(feasible[i], feasible[j]);
            if (!is_zero(c) && strict_ok(c)) return make_primitive(c);
        }
    return std::nullopt;
}

}  // namespace

std::optional<std::pair<Vec, Vec>> is_oblique(const Polytope& p) {
    if (p.dim_ambient() != 2) fail(ErrorCode::InvalidInput, "oblique test needs a polygon");
    std::vector<Vec> cyc = ccw_cycle(p);
    for (const auto& [a, b] : ordered_pairs(cyc)) {
        bool ok = true;
        for (const Vec& v : cyc) {
            if (v == a || v == b) continue;
            if (!(a[0] < v[0] && v[0] < b[0] && a[1] < v[1] && v[1] < b[1])) {
                ok = false;
                break;
            }
        }
        if (ok) return std::make_pair(a, b);
    }
    return std::nullopt;
}

std::optional<FlatWitness> is_flat(const Polytope& p, bool strict) {
    if (p.dim_ambient() != 2) fail(ErrorCode::InvalidInput, "flat test needs a polygon");
    std::vector<Vec> cyc = ccw_cycle(p);
    for (const auto& [a, b] : ordered_pairs(cyc)) {
        std::vector<Vec> normals;
        for (const Vec& v : cyc) {
            if (v == a || v == b) continue;
            normals.push_back(sub(v, a));
            normals.push_back(sub(b, v));
        }
        auto c = strict ? cone_interior(normals) : cone_nonzero(normals);
        if (c) return FlatWitness{*c, a, b};
    }
    return std::nullopt;
}

MoveTrace flatten_pentagon(const Polytope& p) {
    if (p.dim_ambient() != 2 || p.vertex_count() != 5)
        fail(ErrorCode::NotAPentagon, "flatten needs a lattice pentagon");
    MoveTrace trace;
    trace.start = p;
    if (is_flat(p, false)) return trace;

    std::vector<Vec> cyc = ccw_cycle(p);
    // The two-move construction is stated for one distinguished edge; try
    // every labeling (5 rotations, both orientations) and keep the first
    // whose side conditions hold.
    for (int orient = 0; orient < 2; ++orient) {
        std::vector<Vec> order = cyc;
        if (orient == 1) std::reverse(order.begin(), order.end());
        for (int rot = 0; rot < 5; ++rot) {
            const Vec& p1 = order[rot % 5];
            const Vec& p2 = order[(rot + 1) % 5];
            const Vec& p3 = order[(rot + 2) % 5];
            const Vec& p4 = order[(rot + 3) % 5];
            const Vec& p5 = order[(rot + 4) % 5];
            const HalfSpace e1 = edge_facet(p, p3, p4);  // edge opposite p1
            const HalfSpace e5 = edge_facet(p, p2, p3);  // edge opposite p5

            Vec chord = sub(p5, p2);
            Vec e1_dir = sub(p4, p3);
            bool parallel = chord[0] * e1_dir[1] - chord[1] * e1_dir[0] == 0;

            std::vector<std::pair<Vec, Vec>> attempts;  // (insert, delete)
            if (!parallel) {
                Vec x1 = sub(add(p3, p5), p2);
                Vec x2 = sub(add(p4, p2), p5);
                if (dot(e1.normal, x1) < e1.offset) attempts.emplace_back(x1, p2);
                else if (dot(e1.normal, x2) < e1.offset) attempts.emplace_back(x2, p5);
            } else {
                Vec x = sub(add(p1, p3), p4);
                if (dot(e5.normal, x) < e5.offset) attempts.emplace_back(x, p4);
                else attempts.emplace_back(add(x, sub(p5, p2)), p3);
            }
            for (const auto& [x, del] : attempts) {
                if (!can_insert(p, x)) continue;
                Polytope hexed = apply_insert(p, x);
                if (!can_delete(hexed, del)) continue;
                Polytope flat = apply_delete(hexed, del);
                if (flat.vertex_count() != 5 || !is_flat(flat, false)) continue;
                trace.moves = {Move{MoveKind::Insert, x}, Move{MoveKind::Delete, del}};
                return trace;
            }
        }
    }
    fail(ErrorCode::Internal, "pentagon flattening found no valid candidate");
}

namespace {

// Boundary chain from a to b avoiding the edge (a,b), monotone in c.
std::vector<Vec> witness_chain(const Polytope& p, const Vec& c, const Vec& a, const Vec& b) {
    std::vector<Vec> cyc = ccw_cycle(p);
    const std::size_t n = cyc.size();
    std::size_t ia = n;
    for (std::size_t i = 0; i < n; ++i)
        if (cyc[i] == a) ia = i;
    if (ia == n) fail(ErrorCode::Internal, "witness vertex missing");
    int step = (cyc[(ia + 1) % n] == b) ? -1 : 1;
    std::vector<Vec> chain;
    for (std::size_t t = 0; t < n; ++t) chain.push_back(cyc[(ia + n + t * step) % n]);
    if (chain.back() != b) fail(ErrorCode::Internal, "witness pair is not an edge");
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (dot(c, chain[i]) > dot(c, chain[i + 1]))
            fail(ErrorCode::Internal, "witness chain is not monotone");
    return chain;
}

// When the first chain edge is orthogonal to c, replace the second chain
// vertex: insert a far point on the level line of the third vertex beyond
// the witness edge, then drag it below the bottom level. The distance is
// found by doubling and minimized by binary search.
void fix_orthogonal_end(PathCtx& ctx, const Vec& c, std::vector<Vec>& chain) {
    const std::size_t n = chain.size();
    if (dot(c, chain[0]) != dot(c, chain[1])) return;

    const Vec s0 = chain[0], s1 = chain[1], s2 = chain[2], top = chain[n - 1];
    const HalfSpace e = edge_facet(ctx.cur, s0, top);
    Vec u = make_primitive(rot90(c));
    Int step = dot(e.normal, u);
    if (step == 0) fail(ErrorCode::Internal, "level line parallel to witness edge");
    if (step < 0) u = neg(u);

    // minimal m with (x - m c).c < c.s0; independent of the distance
    Int m = (dot(c, s2) - dot(c, s0)) / dot(c, c) + 1;

    struct Attempt {
        Vec x, y;
        bool ok = false;
    };
    auto attempt = [&](const Int& t) {
        Attempt at;
        at.x = add(s2, scale(t, u));
        if (dot(e.normal, at.x) <= e.offset) return at;  // not beyond the edge
        if (!can_insert(ctx.cur, at.x)) return at;
        Polytope q1 = apply_insert(ctx.cur, at.x);
        if (!can_delete(q1, s1)) return at;
        Polytope q2 = apply_delete(q1, s1);
        at.y = sub(at.x, scale(m, c));
        const HalfSpace f = edge_facet(q2, s0, s2);
        if (dot(f.normal, at.y) >= f.offset) return at;
        const HalfSpace g = edge_facet(q2, at.x, top);
        if (dot(g.normal, at.y) >= g.offset) return at;
        if (!can_insert(q2, at.y)) return at;
        Polytope q3 = apply_insert(q2, at.y);
        if (!can_delete(q3, at.x)) return at;
        at.ok = true;
        return at;
    };

    Int t = 1;
    Attempt found = attempt(t);
    int rounds = 0;
    while (!found.ok) {
        t *= 2;
        found = attempt(t);
        if (++rounds > 80) fail(ErrorCode::Internal, "far-point search did not stabilize");
    }
    Int lo = 1, hi = t;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (attempt(mid).ok) hi = mid;
        else lo = mid + 1;
    }
    // keep the doubled distance if the boundary probe was not clean
    Attempt minimal = attempt(lo);
    if (minimal.ok) found = minimal;

    ctx.insert(found.x);
    ctx.erase(s1);
    ctx.insert(found.y);
    ctx.erase(found.x);

    chain.erase(chain.begin() + 1);
    chain.insert(chain.begin(), found.y);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (dot(c, chain[i]) > dot(c, chain[i + 1]))
            fail(ErrorCode::Internal, "chain no longer monotone after end fix");
}

}  // namespace

MoveTrace make_strongly_flat(const Polytope& p) {
    if (p.dim_ambient() != 2) fail(ErrorCode::InvalidInput, "needs a polygon");
    MoveTrace trace;
    trace.start = p;
    if (is_flat(p, true)) return trace;
    auto w = is_flat(p, false);
    if (!w) fail(ErrorCode::NotFlat, "polygon is not flat");
    if (p.vertex_count() < 5) fail(ErrorCode::NotFlat, "end fix needs at least five vertices");

    PathCtx ctx{p, &trace.moves, std::nullopt};
    std::vector<Vec> chain = witness_chain(p, w->c, w->a, w->b);

    fix_orthogonal_end(ctx, w->c, chain);
    std::reverse(chain.begin(), chain.end());
    Vec cneg = neg(w->c);
    fix_orthogonal_end(ctx, cneg, chain);

    if (!is_flat(ctx.cur, true))
        fail(ErrorCode::Internal, "end fixes did not produce a strongly flat polygon");
    return trace;
}

namespace {

struct ShearData {
    ShearParams params;
    Polytope target;
};

// Strict witness whose direction has coordinates of opposite signs, if one
// exists. With such a direction the two sheared coordinate sequences are
// monotone the same way, which is what obliqueness requires.
std::optional<FlatWitness> mixed_sign_strict_witness(const Polytope& p) {
    std::vector<Vec> cyc = ccw_cycle(p);
    for (const auto& [a, b] : ordered_pairs(cyc)) {
        std::vector<Vec> normals;
        for (const Vec& v : cyc) {
            if (v == a || v == b) continue;
            normals.push_back(sub(v, a));
            normals.push_back(sub(b, v));
        }
        for (int quadrant = 0; quadrant < 2; ++quadrant) {
            std::vector<Vec> augmented = normals;
            if (quadrant == 0) {
                augmented.push_back(Vec{Int(1), Int(0)});
                augmented.push_back(Vec{Int(0), Int(-1)});
            } else {
                augmented.push_back(Vec{Int(-1), Int(0)});
                augmented.push_back(Vec{Int(0), Int(1)});
            }
            if (auto c = cone_interior(augmented)) return FlatWitness{*c, a, b};
        }
    }
    return std::nullopt;
}

ShearData shear_data(const Polytope& p) {
    if (!is_flat(p, true)) fail(ErrorCode::NotStronglyFlat, "shear needs a strongly flat polygon");
    auto w = mixed_sign_strict_witness(p);
    if (!w) w = is_flat(p, true);
    Vec c = w->c;
    const Vec a = w->a, b = w->b;
    std::vector<Vec> cyc = ccw_cycle(p);

    auto strictly_ok = [&](const Vec& cc) {
        for (const Vec& v : cyc) {
            if (v == a || v == b) continue;
            if (!(dot(cc, a) < dot(cc, v) && dot(cc, v) < dot(cc, b))) return false;
        }
        return true;
    };
    // both coordinates of the direction must be nonzero: lengthen it until
    // a unit perturbation keeps all strict inequalities
    if (c[0] == 0 || c[1] == 0) {
        Vec e = c[0] == 0 ? Vec{Int(1), Int(0)} : Vec{Int(0), Int(1)};
        Int mult = 1;
        while (true) {
            Vec cc = add(scale(mult, c), e);
            if (strictly_ok(cc)) {
                c = cc;
                break;
            }
            mult *= 2;
            if (mult > Int(1) << 80) fail(ErrorCode::Internal, "direction perturbation ran away");
        }
    }

    Vec u = make_primitive(rot90(c));
    const HalfSpace e_facet = edge_facet(p, a, b);
    Int orient = dot(e_facet.normal, u);
    if (orient == 0) fail(ErrorCode::Internal, "orthogonal direction parallel to witness edge");
    if (orient < 0) u = neg(u);

    std::vector<Vec> chain = witness_chain(p, c, a, b);
    const std::size_t n = chain.size();
    // central reflection through the midpoint of the witness edge,
    // re-indexed to run from a up to b
    std::vector<Vec> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = sub(add(a, b), chain[n - 1 - i]);

    // vertical + u decomposition of q_i - a; u[0] != 0 by construction
    std::vector<Rat> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat t = Rat(q[i][0] - a[0]) / Rat(u[0]);
        phi[i] = Rat(q[i][1] - a[1]) - t * Rat(u[1]);
    }

    Int mult = 1;
    for (const Rat& r : phi) {
        Int den = boost::multiprecision::denominator(r);
        mult = mult / boost::multiprecision::gcd(mult, den) * den;
    }
    // the scaled offsets must be non-negative so the shear displaces along
    // u, away from the polygon; the offsets share one sign
    for (const Rat& r : phi) {
        if (r < 0) {
            mult = -mult;
            break;
        }
        if (r > 0) break;
    }
    auto monotone_enough = [&](const Int& kk) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Rat dphi = phi[i + 1] - phi[i];
            if (dphi == 0) fail(ErrorCode::Internal, "equal offsets in a strongly flat polygon");
            Rat lhs0 = boost::multiprecision::abs(Rat(kk) * dphi * Rat(u[0]));
            Rat lhs1 = boost::multiprecision::abs(Rat(kk) * dphi * Rat(u[1]));
            Int dq0 = boost::multiprecision::abs(q[i + 1][0] - q[i][0]);
            Int dq1 = boost::multiprecision::abs(q[i + 1][1] - q[i][1]);
            if (!(lhs0 > Rat(dq0) && lhs1 > Rat(dq1))) return false;
        }
        return true;
    };
    while (!monotone_enough(mult)) mult *= 2;

    std::vector<Vec> sheared(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat kphi = Rat(mult) * phi[i];
        if (boost::multiprecision::denominator(kphi) != 1)
            fail(ErrorCode::Internal, "shear multiplier lost integrality");
        Int s = boost::multiprecision::numerator(kphi);
        if (s < 0) fail(ErrorCode::Internal, "shear offset pushed against the witness edge");
        sheared[i] = add(q[i], scale(s, u));
    }
    Polytope target = convex_hull(sheared, 2);
    if (target.vertex_count() != n) fail(ErrorCode::Internal, "shear collapsed a vertex");
    if (!is_oblique(target) && !is_flat(target, true))
        fail(ErrorCode::Internal, "sheared polygon lost strong flatness");

    ShearData out;
    out.params = ShearParams{c, u, mult, std::move(phi)};
    out.target = std::move(target);
    return out;
}

MoveTrace shear_once_then_finish(const Polytope& p, int depth) {
    ShearData data = shear_data(p);
    MoveTrace trace = connect_convex_position(p, data.target);
    if (is_oblique(data.target)) return trace;
    // Same-sign witness directions shear to a monotone staircase instead of
    // an oblique polygon; the staircase always has a mixed-sign witness, so
    // one more round finishes.
    if (depth >= 2) fail(ErrorCode::Internal, "shear cascade did not reach an oblique polygon");
    MoveTrace rest = shear_once_then_finish(data.target, depth + 1);
    trace.moves.insert(trace.moves.end(), rest.moves.begin(), rest.moves.end());
    return trace;
}

}  // namespace

ShearParams shear_params_of(const Polytope& p) { return shear_data(p).params; }

MoveTrace shear_to_oblique(const Polytope& p) { return shear_once_then_finish(p, 0); }

}  // namespace latmove
