#ifndef LATMOVE_MOVES_HPP
#define LATMOVE_MOVES_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "latmove/kernel.hpp"

namespace latmove {

// Vertex cone: intersection of the supporting half-spaces of the facets
// incident to the apex. A point inside it would destroy the apex when
// inserted, so insertability means avoiding every vertex cone.
struct Cone {
    Vec apex;
    std::vector<HalfSpace> halfspaces;  // {x : n.x <= b} form

    bool contains(const Vec& x) const {
        for (const HalfSpace& h : halfspaces)
            if (!h.contains(x)) return false;
        return true;
    }
};

enum class MoveKind { Insert, Delete };

struct Move {
    MoveKind kind;
    Vec point;

    friend bool operator==(const Move& a, const Move& b) {
        return a.kind == b.kind && a.point == b.point;
    }
};

// A replayable path in the move graph. Replay validates every step.
struct MoveTrace {
    Polytope start;
    std::vector<Move> moves;
};

Cone vertex_cone(const Polytope& p, const Vec& v);

// A point can be inserted iff it lies outside the polytope and outside every
// vertex cone; equivalently the hull of V u {x} keeps all old vertices.
bool can_insert(const Polytope& p, const Vec& x);

// A vertex can be deleted iff the remaining vertices still span dimension d;
// equivalently the polytope is not a pyramid with that apex.
bool can_delete(const Polytope& p, const Vec& v);

Polytope apply_insert(const Polytope& p, const Vec& x);
Polytope apply_delete(const Polytope& p, const Vec& v);
Polytope apply_move(const Polytope& p, const Move& m);

std::set<Vec> deletable_vertices(const Polytope& p);

// All lattice points of [0,k]^d that can be inserted; requires p inside the box.
std::set<Vec> insertable_points(const Polytope& p, const Int& k);

// One open cell per edge of a polygon: the region beyond the edge line
// clipped by the two neighboring vertex cones. The union of the open cells
// is exactly the set of insertable points of the plane.
struct StrictHalfPlane {
    Vec normal;
    Int offset;
    bool contains(const Vec& x) const { return dot(normal, x) > offset; }
};

struct Cell2D {
    enum class Kind { Triangle, Wedge, Strip };
    Vec edge_a, edge_b;                        // edge endpoints, ccw order
    std::vector<StrictHalfPlane> constraints;  // cell = all strict inequalities
    Kind kind = Kind::Triangle;
    bool bounded = false;
    std::optional<std::pair<Rat, Rat>> apex;   // meet of the neighbor edge lines

    bool contains(const Vec& x) const {
        for (const auto& c : constraints)
            if (!c.contains(x)) return false;
        return true;
    }
};

std::vector<Cell2D> insertable_cells_2d(const Polytope& p);

// Lattice points in the open cell. Exact for triangles and strips; for a
// wedge (always lattice-rich) returns one witness found by expanding search.
std::vector<Vec> cell_lattice_points(const Cell2D& cell);
bool cell_has_lattice_point(const Cell2D& cell);

using VertexFilter = std::optional<std::set<int>>;

// All single-move neighbors staying inside [0,k]^d; with a filter, both
// endpoint vertex counts must lie in it.
std::vector<std::pair<Move, Polytope>> neighbors_in_box(const Polytope& p, const Int& k,
                                                        const VertexFilter& filter = std::nullopt);

// Replays a trace, validating every step; optional box and vertex-count
// window constraints are enforced on every intermediate polytope.
Polytope replay_trace(const MoveTrace& trace, const std::optional<Int>& box = std::nullopt,
                      const std::optional<std::pair<int, int>>& vertex_window = std::nullopt);

}  // namespace latmove

#endif
