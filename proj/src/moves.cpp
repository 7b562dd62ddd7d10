#include "latmove/moves.hpp"

#include <algorithm>

namespace latmove {

namespace {

// Walks the lattice points of [0,k]^d in lexicographic order.
template <typename F>
void for_each_box_point(int d, const Int& k, F&& fn) {
    Vec p(d, Int(0));
    while (true) {
        fn(p);
        int i = d - 1;
        while (i >= 0 && p[i] == k) {
            p[i] = 0;
            --i;
        }
        if (i < 0) return;
        ++p[i];
    }
}

void require_in_box(const Polytope& p, const Int& k) {
    if (k < 1) fail(ErrorCode::InvalidInput, "box size must be at least 1");
    if (!p.in_box(k)) fail(ErrorCode::OutOfBox, "polytope is not contained in [0,k]^d");
}

Vec outward_normal(const Vec& a, const Vec& b) {
    Vec n{b[1] - a[1], a[0] - b[0]};
    return make_primitive(std::move(n));
}

}  // namespace

Cone vertex_cone(const Polytope& p, const Vec& v) {
    if (!p.has_vertex(v)) fail(ErrorCode::NotAVertex, "cone apex is not a vertex");
    Cone c;
    c.apex = v;
    for (const HalfSpace& f : p.facets()) {
        if (f.tight_at(v)) {
            // The supporting side of a facet is the outer one: n.x >= b,
            // stored in <= form as (-n).x <= -b.
            c.halfspaces.push_back({neg(f.normal), -f.offset});
        }
    }
    return c;
}

bool can_insert(const Polytope& p, const Vec& x) {
    if (static_cast<int>(x.size()) != p.dim_ambient())
        fail(ErrorCode::InvalidInput, "can_insert: dimension mismatch");

    // Signed slack per facet, computed once: inside the polytope means all
    // slacks <= 0; inside the cone of v means slack >= 0 on the facets at v.
    const auto& facets = p.facets();
    std::vector<int> sign(facets.size());
    bool outside = false;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        Int s = dot(facets[i].normal, x) - facets[i].offset;
        sign[i] = (s > 0) - (s < 0);
        if (sign[i] > 0) outside = true;
    }
    if (!outside) return false;

    for (const Vec& v : p.vertices()) {
        bool in_cone = true;
        for (std::size_t i = 0; i < facets.size(); ++i) {
            if (!facets[i].tight_at(v)) continue;
            if (sign[i] < 0) {
                in_cone = false;
                break;
            }
        }
        if (in_cone) return false;
    }
    return true;
}

bool can_delete(const Polytope& p, const Vec& v) {
    if (!p.has_vertex(v)) fail(ErrorCode::NotAVertex, "can_delete: not a vertex");
    std::vector<Vec> rest;
    rest.reserve(p.vertex_count() - 1);
    for (const Vec& u : p.vertices())
        if (u != v) rest.push_back(u);
    return affine_rank(rest) == p.dim_ambient();
}

Polytope apply_insert(const Polytope& p, const Vec& x) {
    if (!can_insert(p, x)) fail(ErrorCode::IllegalMove, "point cannot be inserted");
    std::vector<Vec> pts = p.vertices();
    pts.push_back(x);
    Polytope q = convex_hull(pts, p.dim_ambient());
    if (q.vertex_count() != p.vertex_count() + 1)
        fail(ErrorCode::Internal, "insertion did not preserve the vertex set");
    return q;
}

Polytope apply_delete(const Polytope& p, const Vec& v) {
    if (!can_delete(p, v)) fail(ErrorCode::IllegalMove, "vertex cannot be deleted");
    std::vector<Vec> pts;
    for (const Vec& u : p.vertices())
        if (u != v) pts.push_back(u);
    return convex_hull(pts, p.dim_ambient());
}

Polytope apply_move(const Polytope& p, const Move& m) {
    return m.kind == MoveKind::Insert ? apply_insert(p, m.point) : apply_delete(p, m.point);
}

std::set<Vec> deletable_vertices(const Polytope& p) {
    std::set<Vec> out;
    for (const Vec& v : p.vertices())
        if (can_delete(p, v)) out.insert(v);
    return out;
}

std::set<Vec> insertable_points(const Polytope& p, const Int& k) {
    require_in_box(p, k);
    const int d = p.dim_ambient();
    Int count = 1;
    for (int i = 0; i < d; ++i) {
        count *= (k + 1);
        if (count > Int(1) << 24) fail(ErrorCode::TooLarge, "box has too many lattice points");
    }
    std::set<Vec> out;
    for_each_box_point(d, k, [&](const Vec& x) {
        if (can_insert(p, x)) out.insert(x);
    });
    return out;
}

std::vector<Cell2D> insertable_cells_2d(const Polytope& p) {
    if (p.dim_ambient() != 2) fail(ErrorCode::InvalidInput, "cells are defined for polygons only");
    std::vector<Vec> cyc = ccw_cycle(p);
    const std::size_t n = cyc.size();
    std::vector<Cell2D> cells;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& a = cyc[i];
        const Vec& b = cyc[(i + 1) % n];
        const Vec& prev_a = cyc[(i + n - 1) % n];
        const Vec& next_b = cyc[(i + 2) % n];

        Vec ne = outward_normal(a, b);
        Int be = dot(ne, a);
        Vec np = outward_normal(prev_a, a);
        Int bp = dot(np, prev_a);
        Vec nn = outward_normal(b, next_b);
        Int bn = dot(nn, b);

        Cell2D cell;
        cell.edge_a = a;
        cell.edge_b = b;
        // Open cell: strictly beyond the edge line, strictly on the inner
        // side of both neighboring edge lines.
        cell.constraints.push_back({ne, be});
        cell.constraints.push_back({neg(np), -bp});
        cell.constraints.push_back({neg(nn), -bn});

        Int det2 = np[0] * nn[1] - np[1] * nn[0];
        if (det2 == 0) {
            cell.kind = Cell2D::Kind::Strip;
            cell.bounded = false;
        } else {
            Rat zx = Rat(bp * nn[1] - bn * np[1]) / Rat(det2);
            Rat zy = Rat(np[0] * bn - nn[0] * bp) / Rat(det2);
            cell.apex = std::make_pair(zx, zy);
            Rat beyond = Rat(ne[0]) * zx + Rat(ne[1]) * zy - Rat(be);
            if (beyond > 0) {
                cell.kind = Cell2D::Kind::Triangle;
                cell.bounded = true;
            } else {
                cell.kind = Cell2D::Kind::Wedge;
                cell.bounded = false;
            }
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

namespace {

// Lattice points strictly inside a bounded triangle cell: scan integer
// columns of the rational triangle, solving the open y-interval exactly.
std::vector<Vec> triangle_lattice_points(const Cell2D& cell) {
    Rat xmin = Rat(cell.edge_a[0]);
    Rat xmax = xmin;
    auto widen = [&](const Rat& v) {
        if (v < xmin) xmin = v;
        if (v > xmax) xmax = v;
    };
    widen(Rat(cell.edge_b[0]));
    widen(cell.apex->first);

    std::vector<Vec> out;
    for (Int t = rat_ceil(xmin); t <= rat_floor(xmax); ++t) {
        bool column_ok = true;
        bool has_lo = false, has_hi = false;
        Rat lo, hi;
        for (const auto& c : cell.constraints) {
            // c.normal[0]*t + c.normal[1]*y > c.offset
            Rat rhs = Rat(c.offset - c.normal[0] * t);
            if (c.normal[1] > 0) {
                Rat bound = rhs / Rat(c.normal[1]);
                if (!has_lo || bound > lo) lo = bound;
                has_lo = true;
            } else if (c.normal[1] < 0) {
                Rat bound = rhs / Rat(c.normal[1]);
                if (!has_hi || bound < hi) hi = bound;
                has_hi = true;
            } else if (rhs >= 0) {
                column_ok = false;
                break;
            }
        }
        if (!column_ok || !has_lo || !has_hi) continue;
        Int y_from = rat_floor(lo) + 1;
        Int y_to = rat_ceil(hi) - 1;
        for (Int y = y_from; y <= y_to; ++y) out.push_back(Vec{t, y});
    }
    return out;
}

// The two parallel clip lines of a strip bound m.x to an open interval;
// the strip holds a lattice point iff that interval holds an integer.
std::optional<std::pair<Vec, Int>> strip_lattice_line(const Cell2D& cell) {
    const auto& inner_prev = cell.constraints[1];  // (-np).x > -bp
    const auto& inner_next = cell.constraints[2];
    Vec m = neg(inner_prev.normal);
    // Distinct parallel edges of a convex polygon have opposite outward
    // normals, so the primitive clip normals are negatives of each other.
    if (inner_next.normal != m) fail(ErrorCode::Internal, "strip cell normals disagree");
    Int upper = -inner_prev.offset;  // m.x < upper
    Int lower = inner_next.offset;   // m.x > lower
    if (lower + 1 < upper) return std::make_pair(m, lower + 1);
    return std::nullopt;
}

Vec solve_line_lattice_point(const Vec& m, const Int& w) {
    // m primitive, so m0*x + m1*y = w has integer solutions (extended gcd).
    Int old_r = m[0], r = m[1];
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    Int g = old_r;  // +-1
    return Vec{old_s * w / g, old_t * w / g};
}

std::optional<Vec> unbounded_cell_witness(const Cell2D& cell) {
    if (cell.kind == Cell2D::Kind::Strip) {
        auto line = strip_lattice_line(cell);
        if (!line) return std::nullopt;
        auto [m, w] = *line;
        Vec x0 = solve_line_lattice_point(m, w);
        Vec dir{-m[1], m[0]};
        const auto& beyond = cell.constraints[0];
        Int step = dot(beyond.normal, dir);
        if (step == 0) fail(ErrorCode::Internal, "strip direction parallel to its edge");
        if (step < 0) dir = neg(dir);
        // walk along the lattice line until strictly beyond the edge
        Int need = beyond.offset - dot(beyond.normal, x0);
        Int t = need < 0 ? Int(1) : need / boost::multiprecision::abs(dot(beyond.normal, dir)) + 2;
        Vec w0 = add(x0, scale(t, dir));
        if (!cell.contains(w0)) fail(ErrorCode::Internal, "strip witness landed outside");
        return w0;
    }
    // Wedge: full-dimensional and open, so lattice points exist; an
    // expanding box scan around the edge is guaranteed to find one.
    Vec center = cell.edge_a;
    for (Int r = 2;; r *= 2) {
        for (Int x = center[0] - r; x <= center[0] + r; ++x)
            for (Int y = center[1] - r; y <= center[1] + r; ++y) {
                Vec q{x, y};
                if (cell.contains(q)) return q;
            }
        if (r > Int(1) << 24) fail(ErrorCode::Internal, "wedge witness search ran away");
    }
}

}  // namespace

std::vector<Vec> cell_lattice_points(const Cell2D& cell) {
    if (cell.kind == Cell2D::Kind::Triangle) return triangle_lattice_points(cell);
    auto w = unbounded_cell_witness(cell);
    if (!w) return {};
    return {*w};
}

bool cell_has_lattice_point(const Cell2D& cell) {
    if (cell.kind == Cell2D::Kind::Triangle) return !triangle_lattice_points(cell).empty();
    return unbounded_cell_witness(cell).has_value();
}

std::vector<std::pair<Move, Polytope>> neighbors_in_box(const Polytope& p, const Int& k,
                                                        const VertexFilter& filter) {
    require_in_box(p, k);
    Int points = 1;
    for (int i = 0; i < p.dim_ambient(); ++i) {
        points *= (k + 1);
        if (points > Int(1) << 24) fail(ErrorCode::TooLarge, "box has too many lattice points");
    }
    std::vector<std::pair<Move, Polytope>> out;
    const int count = static_cast<int>(p.vertex_count());
    if (filter && !filter->count(count)) return out;

    if (!filter || filter->count(count + 1)) {
        for_each_box_point(p.dim_ambient(), k, [&](const Vec& x) {
            if (can_insert(p, x)) out.emplace_back(Move{MoveKind::Insert, x}, apply_insert(p, x));
        });
    }
    if (!filter || filter->count(count - 1)) {
        for (const Vec& v : p.vertices())
            if (can_delete(p, v)) out.emplace_back(Move{MoveKind::Delete, v}, apply_delete(p, v));
    }
    return out;
}

Polytope replay_trace(const MoveTrace& trace, const std::optional<Int>& box,
                      const std::optional<std::pair<int, int>>& vertex_window) {
    auto check = [&](const Polytope& p) {
        if (box && !p.in_box(*box)) fail(ErrorCode::OutOfBox, "trace left the box");
        if (vertex_window) {
            int c = static_cast<int>(p.vertex_count());
            if (c < vertex_window->first || c > vertex_window->second)
                fail(ErrorCode::IllegalMove, "trace left the vertex-count window");
        }
    };
    Polytope cur = trace.start;
    check(cur);
    for (const Move& m : trace.moves) {
        cur = apply_move(cur, m);
        check(cur);
    }
    return cur;
}

}  // namespace latmove
