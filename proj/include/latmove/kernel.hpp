#ifndef LATMOVE_KERNEL_HPP
#define LATMOVE_KERNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "latmove/linalg.hpp"
#include "latmove/numeric.hpp"

namespace latmove {

constexpr int kMinDim = 1;  // degenerate factors (segments) allowed in products
constexpr int kMaxDim = 8;

// Closed half-space {x : normal.x <= offset} with a primitive normal, so each
// geometric half-space has exactly one representation.
struct HalfSpace {
    Vec normal;
    Int offset;

    bool contains(const Vec& x) const { return dot(normal, x) <= offset; }
    bool tight_at(const Vec& x) const { return dot(normal, x) == offset; }

    friend bool operator==(const HalfSpace& a, const HalfSpace& b) {
        return a.normal == b.normal && a.offset == b.offset;
    }
    friend bool operator<(const HalfSpace& a, const HalfSpace& b) {
        if (a.normal != b.normal) return a.normal < b.normal;
        return a.offset < b.offset;
    }
};

// Affine subspace given by a basepoint and an independent lattice direction
// basis; used for affine-hull membership tests.
struct AffineFlat {
    Vec basepoint;
    std::vector<Vec> directions;
    int dim = 0;

    bool contains(const Vec& x) const;
};

AffineFlat affine_flat_of(const std::vector<Vec>& pts);

// Canonical V- and H-representation of a full-dimensional lattice polytope.
// Vertices are exactly the extreme points, sorted lexicographically; the
// facet list is irredundant with primitive outward normals.
class Polytope {
  public:
    Polytope() = default;

    int dim_ambient() const { return d_; }
    int dim() const { return d_; }  // always full-dimensional by construction
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<HalfSpace>& facets() const { return facets_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    bool is_simplex() const { return vertices_.size() == static_cast<std::size_t>(d_) + 1; }
    bool has_vertex(const Vec& v) const;
    bool in_box(const Int& k) const;

    friend bool operator==(const Polytope& a, const Polytope& b) {
        return a.d_ == b.d_ && a.vertices_ == b.vertices_;
    }
    friend bool operator!=(const Polytope& a, const Polytope& b) { return !(a == b); }

    // Assembles a polytope from parts already known to satisfy the class
    // invariants (product constructions, box-table hulls). Checked in debug.
    static Polytope from_canonical_parts(int d, std::vector<Vec> vertices,
                                         std::vector<HalfSpace> facets);

  private:
    friend Polytope convex_hull(std::vector<Vec> points, int d);
    int d_ = 0;
    std::vector<Vec> vertices_;
    std::vector<HalfSpace> facets_;
};

// Dimension of the affine hull of the input; -1 for no points.
int affine_dimension(const std::vector<Vec>& points);

// Canonical hull of a full-dimensional point set: duplicates and non-extreme
// points are dropped, facets are enumerated exactly.
Polytope convex_hull(std::vector<Vec> points, int d);

// True when x satisfies every facet inequality.
bool contains_point(const Polytope& p, const Vec& x);

// Deterministic injective serialization "d|x,y;x,y;...".
std::string canonical_key(const Polytope& p);

// Counter-clockwise boundary cycle of a polygon, starting at the
// lexicographically smallest vertex. Only valid for d == 2.
std::vector<Vec> ccw_cycle(const Polytope& p);

}  // namespace latmove

#endif
