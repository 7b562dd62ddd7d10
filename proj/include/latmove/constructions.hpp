#ifndef LATMOVE_CONSTRUCTIONS_HPP
#define LATMOVE_CONSTRUCTIONS_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "latmove/moves.hpp"

namespace latmove {

// ---------------------------------------------------------------------------
// Explicit families
// ---------------------------------------------------------------------------

// Simplex on the origin and the d lattice points at distance 1 from it.
Polytope corner_simplex(int d, const Int& k);

// The n-vertex polygon built on the staircase y = x(x-1)/2 and its central
// reflection; no lattice point of the plane can be inserted into it.
// Defined for n = 4 and n >= 6.
Polytope pn_polygon(int n);

// The (k+1)-dimensional empty simplex inside [0,k]^{k+1} whose vertices are
// the columns of the banded (k+1) x (k+2) matrix with diagonal k above 1.
Polytope empty_simplex(int k);

// Cartesian product: vertices are all concatenations, facets are the lifted
// factor facets.
Polytope cartesian_product(const Polytope& p, const Polytope& q);

// Product of d/(k+1) empty simplices: every lattice point of [0,k]^d is
// either insertable or a deletable vertex. Requires k+1 a proper divisor of d.
Polytope saturating_polytope(int d, int k);

// ---------------------------------------------------------------------------
// Insertion search for simplices
// ---------------------------------------------------------------------------

// Data around one facet R of the tight bounding box Q of a simplex S:
// the touching face F = S n R, the complementary face F*, the integer
// vector c orthogonal to both, the slab values of c on F/F*, and the
// minimizing face G of aff(R) n [0,k]^d.
struct SimplexFacetFrame {
    int coord = 0;           // the coordinate fixed on aff(R)
    bool upper = false;      // which side of the bounding box
    Int level = 0;           // gamma: value of that coordinate on R
    std::vector<Vec> f_vertices;      // vertices of F
    std::vector<Vec> fstar_vertices;  // vertices of F*
    Vec c;                   // orthogonal to F and F*, pointing away from F
    Int delta = 0;           // min of c.x over aff(R) n [0,k]^d
    Int epsilon = 0;         // c.x on F
    Int epsilon_star = 0;    // c.x on F*
    std::vector<int> g_free; // free coordinates of the face G
    Vec g_base;              // fixed coordinates of G (free entries zero)

    int dim_f() const { return static_cast<int>(f_vertices.size()) - 1; }
    int dim_g() const { return static_cast<int>(g_free.size()); }
};

// Frames for all bounding-box facets, in deterministic facet order.
std::vector<SimplexFacetFrame> simplex_frames(const Polytope& s, const Int& k);

// A lattice point of [0,k]^d insertable into the simplex, found by the
// maximal-touching-face case analysis; deterministic lexicographic
// tie-breaks throughout.
Vec find_simplex_insertion(const Polytope& s, const Int& k);

// ---------------------------------------------------------------------------
// Constructive paths
// ---------------------------------------------------------------------------

// Alternating trace from a simplex to the corner simplex of [0,k]^d; every
// intermediate polytope has d+1 or d+2 vertices and stays in the box.
MoveTrace simplex_to_corner_path(const Polytope& s, const Int& k);

// Trace between two polytopes whose vertex sets are jointly in convex
// position, alternating insertions and deletions; length at most 2n+2.
MoveTrace connect_convex_position(const Polytope& p, const Polytope& q);

// ---------------------------------------------------------------------------
// Polygon normal forms
// ---------------------------------------------------------------------------

// Consecutive pair (a,b) strictly dominating every other vertex in both
// coordinates, or nothing.
std::optional<std::pair<Vec, Vec>> is_oblique(const Polytope& p);

struct FlatWitness {
    Vec c;
    Vec a;
    Vec b;
};

// Lattice direction c and consecutive pair (a,b) with a.c <= v.c <= b.c for
// all other vertices (strict when strict=true), or nothing. Decided exactly
// through the rational cone of admissible directions.
std::optional<FlatWitness> is_flat(const Polytope& p, bool strict);

// Empty trace if the pentagon is already flat, otherwise one insertion and
// one deletion producing a flat pentagon.
MoveTrace flatten_pentagon(const Polytope& p);

// From a flat polygon with n >= 5 vertices to a strongly flat one, replacing
// the extreme vertices whose edges are orthogonal to the witness direction.
MoveTrace make_strongly_flat(const Polytope& p);

// Shear parameters: witness direction c, orthogonal direction u pointing
// beyond the witness edge, the integer multiplier, and the rational offsets
// of the reflected vertices.
struct ShearParams {
    Vec c;
    Vec u;
    Int multiplier = 0;
    std::vector<Rat> phi;
};

// From a strongly flat polygon to an oblique one: reflect through the
// witness edge midpoint, shear the reflection to strict monotonicity, and
// connect through jointly convex position.
MoveTrace shear_to_oblique(const Polytope& p);
ShearParams shear_params_of(const Polytope& p);  // exposed for diagnostics

}  // namespace latmove

#endif
